#ifndef BAYESMAP_ERRORS_HPP
#define BAYESMAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bayesmap {

/// Root of every exception thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad density pieces, unparsable config, inconsistent options.
struct InvalidInput : Error {
  using Error::Error;
};

struct InvalidDensity : InvalidInput {
  using InvalidInput::InvalidInput;
};

struct ConfigError : InvalidInput {
  using InvalidInput::InvalidInput;
};

/// Well-formed input for which the requested quantity does not exist.
struct DomainError : Error {
  using Error::Error;
};

struct EmptySearchBox : DomainError {
  EmptySearchBox() : DomainError("search box is empty") {}
  explicit EmptySearchBox(const std::string& what) : DomainError(what) {}
};

struct ZeroEvidence : DomainError {
  ZeroEvidence() : DomainError("normalizing constant of the posterior is zero") {}
};

struct DivergentEvidence : DomainError {
  DivergentEvidence() : DomainError("normalizing constant of the posterior is not finite") {}
};

struct CutoffTooSmall : DomainError {
  using DomainError::DomainError;
  CutoffTooSmall(int needed, int available)
      : DomainError("counterexample cutoff too small: need bump " + std::to_string(needed) +
                    ", have " + std::to_string(available)) {}
};

/// A post-condition the library guarantees was observed to fail.
struct InvariantViolation : Error {
  using Error::Error;
};

}  // namespace bayesmap

#endif  // BAYESMAP_ERRORS_HPP
