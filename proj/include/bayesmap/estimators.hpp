#ifndef BAYESMAP_ESTIMATORS_HPP
#define BAYESMAP_ESTIMATORS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "bayesmap/any_density.hpp"
#include "bayesmap/argmax.hpp"
#include "bayesmap/mollifier.hpp"
#include "bayesmap/region.hpp"

namespace bayesmap {

/// 0-1 loss L^c: zero when the estimate is within distance 1/c of the parameter.
struct LossSpec {
  double c = 1.0;

  explicit LossSpec(double c_) : c(c_) {
    if (!(c > 0.0) || !std::isfinite(c)) throw InvalidInput("0-1 loss parameter c must be positive");
  }
  double radius() const { return 1.0 / c; }
  /// L^c(theta, z) for scalar parameters.
  double operator()(double theta, double z) const { return std::abs(theta - z) < radius() ? 0.0 : 1.0; }
};

/// Objective-value distance of an estimate from the Bayes optimum.
struct ApproxGap {
  Point theta;
  double c = 0.0;
  /// sup of the ball mass minus the ball mass at theta.
  double gap = 0.0;
  /// The same gap for the averaged objective (gap / ball volume).
  double normalized_gap = 0.0;
  double objective_at_theta = 0.0;
  double sup_value = 0.0;
};

namespace detail {

/// Exact sup and maximizers of a piecewise density over an interval. With
/// open_ends the endpoints contribute their one-sided limits from inside.
inline ArgmaxResult maximize_density_1d(const UscDensity1D& f, Interval box, double tol,
                                        bool open_ends = false) {
  const double A = box.lo, B = box.hi;
  std::vector<Candidate> cands;

  std::vector<Box> infinite;
  for (double u : f.unbounded_at())
    if ((open_ends ? (u > A && u < B) : box.contains(u))) infinite.push_back(Box(u, u));
  if (!infinite.empty()) {
    ArgmaxResult out;
    out.sup_infinite = true;
    out.sup_value = std::numeric_limits<double>::infinity();
    out.maximizers = std::move(infinite);
    out.canonical = smallest_norm_point(out.maximizers);
    out.tol_value = tol;
    return out;
  }

  std::vector<double> cuts{A, B};
  for (double bp : f.breakpoints())
    if (bp > A && bp < B) cuts.push_back(bp);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  for (double c : cuts) {
    if (open_ends && c == A && A < B) {
      cands.push_back({Box(A, A), f.right_limit(A)});
    } else if (open_ends && c == B && A < B) {
      cands.push_back({Box(B, B), f.left_limit(B)});
    } else {
      cands.push_back({Box(c, c), f.evaluate(c)});
    }
  }
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double u = cuts[k], v = cuts[k + 1];
    const auto idx = f.piece_index(0.5 * (u + v));
    if (!idx) {
      cands.push_back({Box(u, v), 0.0});
    } else if (f.pieces()[*idx].is_flat()) {
      cands.push_back({Box(u, v), f.pieces()[*idx].value(u)});
    }
    // Monotone pieces peak at a segment end, which is already a candidate.
  }
  return assemble_argmax(std::move(cands), tol);
}

inline ArgmaxResult maximize_grid_2d(const GridDensity& g, const Box& box, double tol) {
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < g.shape(0); ++i)
    for (std::size_t j = 0; j < g.shape(1); ++j) {
      const double v = g.value(i, j);
      if (v <= 0.0) continue;
      Box cell = g.cell_box(i, j);
      bool overlaps = true;
      for (std::size_t a = 0; a < 2; ++a) {
        Interval& I = cell.axis(a);
        I.lo = std::max(I.lo, box.axis(a).lo);
        I.hi = std::min(I.hi, box.axis(a).hi);
        if (I.lo > I.hi) overlaps = false;
      }
      if (overlaps) cands.push_back({std::move(cell), v});
    }
  if (cands.empty()) cands.push_back({box, 0.0});
  return assemble_argmax(std::move(cands), tol);
}

}  // namespace detail

/// MAP estimate: maximizers of the usc density over the search box.
inline ArgmaxResult map_estimate(const Density& d, const SearchBox& box, const MaximizeOptions& opt = {}) {
  require_nonempty(box);
  if (box.dim() != dimension(d)) throw InvalidInput("search box dimension does not match the density");
  const double tol = default_tolerance(d, opt);
  if (auto line = as_piecewise_1d(d)) return detail::maximize_density_1d(*line, box.axis(0), tol);
  return detail::maximize_grid_2d(std::get<GridDensity>(d), box, tol);
}

/// Bayes estimate under L^c: maximizers of the posterior mass of the radius-1/c ball.
///
/// The reported sup_value is that mass; tol_value is the normalized tolerance
/// times the ball volume so the maximizer set matches mollified_sup exactly.
inline ArgmaxResult bayes_estimate(const Density& d, const LossSpec& loss, const SearchBox& box,
                                   const MaximizeOptions& opt = {}) {
  return maximize_ball_objective(BallObjective(d, loss.radius(), false), box, opt);
}

inline ApproxGap approx_gap(const Density& d, const LossSpec& loss, const Point& theta,
                            const SearchBox& box, const MaximizeOptions& opt = {}) {
  require_nonempty(box);
  if (!box.contains(theta)) throw InvalidInput("approx_gap: theta must lie in the search box");
  const BallObjective obj(d, loss.radius(), false);
  const ArgmaxResult best = maximize_ball_objective(obj, box, opt);
  ApproxGap out;
  out.theta = theta;
  out.c = loss.c;
  out.sup_value = best.sup_value;
  out.objective_at_theta = obj.raw(theta);
  double gap = best.sup_value - out.objective_at_theta;
  if (gap < 0.0) {
    if (gap < -best.tol_value)
      throw InvariantViolation("approx_gap: objective at theta exceeds the computed supremum");
    gap = 0.0;
  }
  out.gap = gap;
  out.normalized_gap = gap / obj.ball_volume();
  return out;
}

}  // namespace bayesmap

#endif  // BAYESMAP_ESTIMATORS_HPP
