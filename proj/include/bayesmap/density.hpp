#ifndef BAYESMAP_DENSITY_HPP
#define BAYESMAP_DENSITY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bayesmap/errors.hpp"
#include "bayesmap/piece.hpp"

namespace bayesmap {

inline constexpr double kMassTolerance = 1e-9;
inline constexpr double kGridMassTolerance = 1e-6;

/// Description of density mass that lies beyond the materialized pieces.
///
/// Used for densities with infinitely many pieces that are truncated at a
/// cutoff. Beyond `start` the density is not materialized; it takes values
/// approaching `sup_value` (every level below it is exceeded arbitrarily far
/// out) and carries at most `mass_bound` total mass.
struct OmittedTail {
  double start = 0.0;
  double sup_value = 0.0;
  double mass_bound = 0.0;
};

struct DensityOptions {
  double mass_tolerance = kMassTolerance;
  /// Isolated points where the usc envelope is declared +inf.
  std::vector<double> unbounded_at;
  std::optional<OmittedTail> tail;
};

/// Upper semicontinuous density on the real line built from analytic pieces.
///
/// Values at breakpoints follow the usc envelope: the larger of the two
/// one-sided limits, where the outside of the support contributes 0.
/// Integrals are exact and do not depend on breakpoint values.
class UscDensity1D {
 public:
  UscDensity1D() = default;

  explicit UscDensity1D(std::vector<Piece> pieces, DensityOptions options = {})
      : pieces_(std::move(pieces)), options_(std::move(options)) {
    std::sort(pieces_.begin(), pieces_.end(),
              [](const Piece& x, const Piece& y) { return x.lo < y.lo; });
    if (pieces_.empty()) throw InvalidDensity("density needs at least one piece");
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      validate_piece(pieces_[i]);
      if (i > 0 && pieces_[i].lo < pieces_[i - 1].hi)
        throw InvalidDensity("density pieces overlap");
    }
    los_.reserve(pieces_.size());
    for (const auto& p : pieces_) {
      los_.push_back(p.lo);
      total_mass_ += p.mass();
      breakpoints_.push_back(p.lo);
      breakpoints_.push_back(p.hi);
    }
    std::sort(breakpoints_.begin(), breakpoints_.end());
    breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());
    std::sort(options_.unbounded_at.begin(), options_.unbounded_at.end());
    for (double u : options_.unbounded_at)
      if (!std::isfinite(u)) throw InvalidDensity("unbounded_at points must be finite");
    if (options_.tail && options_.tail->start < pieces_.back().hi)
      throw InvalidDensity("omitted tail must start after the last piece");
    if (!(options_.mass_tolerance >= 0.0) || std::abs(total_mass_ - 1.0) > options_.mass_tolerance)
      throw InvalidDensity("density mass " + std::to_string(total_mass_) +
                           " is not within tolerance of 1");
  }

  /// Builds a density after rescaling the pieces to unit mass.
  static UscDensity1D normalized(std::vector<Piece> pieces, DensityOptions options = {}) {
    double m = 0.0;
    for (const auto& p : pieces) {
      validate_piece(p);
      m += p.mass();
    }
    if (!(m > 0.0) || !std::isfinite(m)) throw InvalidDensity("pieces have no positive mass");
    for (auto& p : pieces) p = p.scaled(1.0 / m);
    return UscDensity1D(std::move(pieces), std::move(options));
  }

  std::span<const Piece> pieces() const { return pieces_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& unbounded_at() const { return options_.unbounded_at; }
  const std::optional<OmittedTail>& tail() const { return options_.tail; }
  double mass_tolerance() const { return options_.mass_tolerance; }
  const DensityOptions& options() const { return options_; }
  double total_mass() const { return total_mass_; }
  double support_lo() const { return pieces_.front().lo; }
  double support_hi() const { return pieces_.back().hi; }

  /// Index of the piece whose half-open interval contains t, if any.
  std::optional<std::size_t> piece_index(double t) const {
    auto it = std::upper_bound(los_.begin(), los_.end(), t);
    if (it == los_.begin()) return std::nullopt;
    const auto i = static_cast<std::size_t>(std::distance(los_.begin(), it) - 1);
    if (t < pieces_[i].hi) return i;
    return std::nullopt;
  }

  /// Limit of the density as s -> t from the left (s < t).
  double left_limit(double t) const {
    auto it = std::lower_bound(los_.begin(), los_.end(), t);  // first piece with lo >= t
    if (it == los_.begin()) return 0.0;
    const auto i = static_cast<std::size_t>(std::distance(los_.begin(), it) - 1);
    if (t <= pieces_[i].hi) return pieces_[i].value(t);
    return 0.0;
  }

  /// Limit of the density as s -> t from the right (s > t).
  double right_limit(double t) const {
    auto idx = piece_index(t);
    return idx ? pieces_[*idx].value(t) : 0.0;
  }

  bool is_unbounded_at(double t) const {
    return std::binary_search(options_.unbounded_at.begin(), options_.unbounded_at.end(), t);
  }

  /// Pointwise value under the usc envelope convention.
  double evaluate(double t) const {
    if (std::isnan(t)) return 0.0;
    if (is_unbounded_at(t)) return std::numeric_limits<double>::infinity();
    return std::max(left_limit(t), right_limit(t));
  }
  double operator()(double t) const { return evaluate(t); }

  /// The density is continuous at t unless t is a breakpoint with unequal limits
  /// or a declared +inf point.
  bool is_continuity_point(double t, double tol = 0.0) const {
    if (is_unbounded_at(t)) return false;
    if (!std::binary_search(breakpoints_.begin(), breakpoints_.end(), t)) return true;
    return std::abs(left_limit(t) - right_limit(t)) <= tol;
  }

  /// Exact integral over [lo, hi]; zero when hi <= lo.
  double integrate(double lo, double hi) const {
    if (!(lo < hi)) return 0.0;
    lo = std::max(lo, support_lo());
    hi = std::min(hi, support_hi());
    if (!(lo < hi)) return 0.0;
    auto it = std::upper_bound(los_.begin(), los_.end(), lo);
    std::size_t i = it == los_.begin() ? 0 : static_cast<std::size_t>(std::distance(los_.begin(), it) - 1);
    if (pieces_[i].hi <= lo) ++i;
    double sum = 0.0;
    for (; i < pieces_.size() && pieces_[i].lo < hi; ++i) {
      const Piece& p = pieces_[i];
      const double x = std::max(lo, p.lo);
      const double y = std::min(hi, p.hi);
      if (x < y) sum += p.integral(x, y);
    }
    return std::max(0.0, sum);
  }

  /// Integral over [c - r, c + r]. A piece covering the whole window gets
  /// width exactly 2r, so averages of constants are exact.
  double integrate_window(double c, double r) const {
    const double lo = c - r, hi = c + r;
    if (!(lo < hi)) return 0.0;
    if (const auto i = piece_index(c)) {
      const Piece& p = pieces_[*i];
      if (p.lo <= lo && hi <= p.hi) return std::max(0.0, p.integral(lo, hi, 2.0 * r, c));
    }
    return integrate(lo, hi);
  }

 private:
  std::vector<Piece> pieces_;
  DensityOptions options_;
  std::vector<double> los_;
  std::vector<double> breakpoints_;
  double total_mass_ = 0.0;
};

}  // namespace bayesmap

#endif  // BAYESMAP_DENSITY_HPP
