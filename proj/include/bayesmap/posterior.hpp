#ifndef BAYESMAP_POSTERIOR_HPP
#define BAYESMAP_POSTERIOR_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "bayesmap/any_density.hpp"

namespace bayesmap {

/// p(x | theta) >= 0 as a function of the observation and the parameter.
struct Likelihood {
  std::function<double(double x, const Point& theta)> fn;
  /// Set when p(x | theta) does not depend on theta; the posterior is then the prior.
  bool theta_independent = false;

  double operator()(double x, const Point& theta) const { return fn(x, theta); }

  static Likelihood constant(double value) {
    return {[value](double, const Point&) { return value; }, true};
  }
};

struct BayesModel {
  Density prior;
  Likelihood likelihood;
  double observation = 0.0;
};

struct PosteriorResult {
  Density density;
  /// Midpoint-rule normalizing constant at the requested resolution.
  double evidence = 0.0;
  /// The same at twice the resolution.
  double evidence_refined = 0.0;
  /// Richardson estimate of the error of evidence_refined (second-order rule).
  double richardson_error = 0.0;
  /// The prior was returned unchanged.
  bool exact = false;
};

namespace detail {

inline void check_evidence(double z) {
  if (!std::isfinite(z)) throw DivergentEvidence();
  if (!(z > 0.0)) throw ZeroEvidence();
}

inline double checked_likelihood(const BayesModel& m, const Point& theta) {
  const double p = m.likelihood(m.observation, theta);
  if (std::isnan(p) || p < 0.0) throw InvalidInput("likelihood must be nonnegative");
  return p;
}

/// Unnormalized posterior at the midpoints of an n (x n) cell grid over the
/// prior's support, with its midpoint-rule integral.
inline std::pair<std::vector<double>, double> midpoint_posterior(const BayesModel& m, const Box& support,
                                                                 std::size_t n) {
  const std::size_t dim = support.dim();
  const std::size_t ny = dim == 2 ? n : 1;
  const double hx = support.axis(0).width() / static_cast<double>(n);
  const double hy = dim == 2 ? support.axis(1).width() / static_cast<double>(n) : 1.0;
  std::vector<double> vals(n * ny);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      Point th{support.axis(0).lo + (static_cast<double>(i) + 0.5) * hx};
      if (dim == 2) th.push_back(support.axis(1).lo + (static_cast<double>(j) + 0.5) * hy);
      const double v = checked_likelihood(m, th) * evaluate(m.prior, th);
      vals[i * ny + j] = v;
      sum += v;
    }
  return {std::move(vals), sum * hx * hy};
}

}  // namespace detail

/// Posterior density p(x | theta) pi(theta) / Z.
///
/// A theta-independent likelihood returns the prior itself. Otherwise the
/// product is sampled at cell midpoints of a grid_resolution grid over the
/// prior's support and returned as a histogram; Z is checked by doubling.
inline PosteriorResult posterior(const BayesModel& m, std::size_t grid_resolution) {
  if (grid_resolution == 0) throw InvalidInput("grid resolution must be positive");
  if (!m.likelihood.fn) throw InvalidInput("model has no likelihood");
  const Box support = support_box(m.prior);
  if (m.likelihood.theta_independent) {
    const double p = detail::checked_likelihood(m, support.center());
    detail::check_evidence(p);
    return {m.prior, p, p, 0.0, true};
  }
  auto [vals, z] = detail::midpoint_posterior(m, support, grid_resolution);
  detail::check_evidence(z);
  const double z2 = detail::midpoint_posterior(m, support, 2 * grid_resolution).second;
  PosteriorResult out;
  out.evidence = z;
  out.evidence_refined = z2;
  out.richardson_error = std::abs(z2 - z) / 3.0;
  const double hx = support.axis(0).width() / static_cast<double>(grid_resolution);
  if (support.dim() == 1) {
    out.density = GridDensity::one_d(support.axis(0).lo, hx, std::move(vals));
  } else {
    const double hy = support.axis(1).width() / static_cast<double>(grid_resolution);
    out.density = GridDensity::two_d({support.axis(0).lo, support.axis(1).lo}, {hx, hy}, grid_resolution,
                                     grid_resolution, std::move(vals));
  }
  return out;
}

}  // namespace bayesmap

#endif  // BAYESMAP_POSTERIOR_HPP
