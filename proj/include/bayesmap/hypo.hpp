#ifndef BAYESMAP_HYPO_HPP
#define BAYESMAP_HYPO_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "bayesmap/estimators.hpp"

namespace bayesmap {

inline constexpr double kHypoClosedSlack = 1e-12;

/// One set at one nu in the finite hit-and-miss family.
struct HypoRecord {
  bool open = false;
  Interval set;
  double nu = 0.0;
  /// sup of f^nu over the set.
  double sup_mollified = 0.0;
  /// sup of f over the set (closure for open sets).
  double sup_base = 0.0;
  /// sup_mollified - sup_base.
  double margin = 0.0;
  /// Closed sets: sup of f over the set grown by 1/nu.
  /// Open sets: sup of f over the set shrunk by 1/nu.
  double reference = 0.0;
  /// Allowed slack against the reference.
  double slack = 0.0;
  bool violation = false;
  /// Open sets only: no usable Lipschitz bound, or the shrunk set is empty.
  bool not_applicable = false;
  std::string note;
};

/// Finite-family diagnostic of hypo-convergence of f^nu to f. Passing it is
/// evidence, not proof.
struct HypoReport {
  std::vector<double> nu_list;
  std::vector<HypoRecord> records;
  bool any_violation = false;
};

namespace detail {

/// Lipschitz bound of f on [lo, hi]; inf when f jumps, is unbounded or has a
/// sqrt branch point there.
inline double lipschitz_on(const UscDensity1D& f, double lo, double hi) {
  double L = 0.0;
  for (double u : f.unbounded_at())
    if (u >= lo && u <= hi) return std::numeric_limits<double>::infinity();
  for (double b : f.breakpoints())
    if (b > lo && b < hi && f.left_limit(b) != f.right_limit(b))
      return std::numeric_limits<double>::infinity();
  for (const auto& p : f.pieces()) {
    const double x = std::max(lo, p.lo), y = std::min(hi, p.hi);
    if (x < y) L = std::max(L, p.lipschitz(x, y));
  }
  return L;
}

}  // namespace detail

/// For every closed B checks sup_B f^nu <= sup_{B+1/nu} f + 1e-12; for every
/// open O checks sup_O f^nu >= sup_{O-1/nu} f - L/nu with L the Lipschitz
/// bound of f on the ball around the maximizer of f over O-1/nu.
inline HypoReport hypo_diagnostic(const Density& d, const std::vector<double>& nu_list,
                                  const std::vector<Interval>& boxes, const std::vector<Interval>& opens,
                                  const MaximizeOptions& opt = {}) {
  const auto line = as_piecewise_1d(d);
  if (!line) throw InvalidInput("the hypo diagnostic supports one-dimensional densities");
  for (std::size_t i = 0; i < nu_list.size(); ++i) {
    if (!(nu_list[i] > 0.0) || !std::isfinite(nu_list[i])) throw InvalidInput("nu values must be positive");
    if (i > 0 && !(nu_list[i] > nu_list[i - 1])) throw InvalidInput("nu list must be increasing");
  }
  const double tol = default_tolerance(d, opt);
  const auto shared = std::make_shared<const Density>(d);

  HypoReport rep;
  rep.nu_list = nu_list;
  for (const auto& B : boxes) {
    if (B.empty()) throw EmptySearchBox();
    const double sup_base = detail::maximize_density_1d(*line, B, tol).sup_value;
    for (double nu : nu_list) {
      const BallObjective fnu(shared, 1.0 / nu, true);
      HypoRecord r;
      r.set = B;
      r.nu = nu;
      r.sup_mollified = mollified_sup(fnu, Box(B.lo, B.hi), opt).sup_value;
      r.sup_base = sup_base;
      r.margin = r.sup_mollified - sup_base;
      const double rad = 1.0 / nu;
      r.reference = detail::maximize_density_1d(*line, {B.lo - rad, B.hi + rad}, tol).sup_value;
      r.slack = kHypoClosedSlack;
      r.violation = r.sup_mollified > r.reference + r.slack;
      rep.any_violation = rep.any_violation || r.violation;
      rep.records.push_back(std::move(r));
    }
  }
  for (const auto& O : opens) {
    if (!(O.lo < O.hi)) throw EmptySearchBox();
    const double sup_base = detail::maximize_density_1d(*line, O, tol, true).sup_value;
    for (double nu : nu_list) {
      const double rad = 1.0 / nu;
      const BallObjective fnu(shared, rad, true);
      HypoRecord r;
      r.open = true;
      r.set = O;
      r.nu = nu;
      // f^nu is continuous, so its sup over O equals the sup over the closure.
      r.sup_mollified = mollified_sup(fnu, Box(O.lo, O.hi), opt).sup_value;
      r.sup_base = sup_base;
      r.margin = r.sup_mollified - sup_base;
      const Interval shrunk{O.lo + rad, O.hi - rad};
      if (!(shrunk.lo < shrunk.hi)) {
        r.not_applicable = true;
        r.note = "set shrunk by 1/nu is empty";
      } else {
        const ArgmaxResult inner = detail::maximize_density_1d(*line, shrunk, tol, true);
        r.reference = inner.sup_value;
        const double t = inner.canonical.at(0);
        const double L = detail::lipschitz_on(*line, t - rad, t + rad);
        if (!std::isfinite(L) || inner.sup_infinite) {
          r.not_applicable = true;
          r.note = "no finite Lipschitz bound near the maximizer";
        } else {
          r.slack = L * rad;
          r.violation = r.sup_mollified < r.reference - r.slack - kHypoClosedSlack;
        }
      }
      rep.any_violation = rep.any_violation || r.violation;
      rep.records.push_back(std::move(r));
    }
  }
  return rep;
}

}  // namespace bayesmap

#endif  // BAYESMAP_HYPO_HPP
