#ifndef BAYESMAP_COUNTEREXAMPLE_HPP
#define BAYESMAP_COUNTEREXAMPLE_HPP

#include <cmath>
#include <string>
#include <vector>

#include "bayesmap/estimators.hpp"
#include "bayesmap/sweep.hpp"

namespace bayesmap::counterexample {

/// Density with MAP estimate 0 whose 0-1 loss Bayes estimates never approach 0.
///
///   f(t) = 1 - sqrt(2|t|)                         on (-1/2, 1/2)
///   rise    (2^n - 1) 4^n (t - n + 8^-n)          on [n - 8^-n, n)
///   plateau 1 - 2^-n                              on [n, n + 2^-n - 8^-n)
///   fall    (1 - 2^n) 4^n (t - n - 2^-n)          on [n + 2^-n - 8^-n, n + 2^-n)
///
/// for bumps n = 1..max_bump. Bump n carries mass 2^-n - 4^-n, so the full
/// family has mass exactly 1; the bumps past the cutoff are described by an
/// OmittedTail. From n = 17 on the rise and fall are narrower than the spacing
/// of doubles near n and cannot be represented; those bumps keep only their
/// plateau, which moves less than 2^-50 of mass.
struct Spec {
  int max_bump = 20;
};

inline constexpr int kDefaultMaxBump = 20;

inline double pow2(int k) { return std::ldexp(1.0, k); }

/// Mass of bumps n > N: sum of 2^-n - 4^-n.
inline double omitted_mass(int max_bump) { return pow2(-max_bump) - pow2(-2 * max_bump) / 3.0; }

/// Mass of the center piece, 2 (1/2 - (2/3) sqrt(2) (1/2)^(3/2)) = 1/3.
inline double center_mass() { return 1.0 / 3.0; }

inline double bump_mass(int n) { return pow2(-n) - pow2(-2 * n); }

struct Knots {
  double rise_lo, top_lo, top_hi, fall_hi;
  double height;
  /// Rise and fall representable exactly.
  bool resolved;
};

inline Knots bump_knots(int n) {
  const double N = n;
  const double w = pow2(-3 * n);
  Knots k{N - w, N, N + pow2(-n) - w, N + pow2(-n), 1.0 - pow2(-n), false};
  k.resolved = (k.top_lo - k.rise_lo) == w && (k.fall_hi - k.top_hi) == w;
  return k;
}

inline UscDensity1D build(const Spec& spec = {}) {
  if (spec.max_bump < 1) throw InvalidInput("counterexample needs max_bump >= 1");
  if (spec.max_bump > 60) throw InvalidInput("counterexample max_bump above 60 is not representable");
  std::vector<Piece> pieces;
  const double root2 = std::sqrt(2.0);
  pieces.push_back(Piece::sqrt_affine(-0.5, 0.0, 1.0, -root2, 0.0, -1));
  pieces.push_back(Piece::sqrt_affine(0.0, 0.5, 1.0, -root2, 0.0, 1));
  for (int n = 1; n <= spec.max_bump; ++n) {
    const Knots k = bump_knots(n);
    const double slope = (pow2(n) - 1.0) * pow2(2 * n);
    if (k.resolved) pieces.push_back(Piece::affine(k.rise_lo, k.top_lo, 0.0, slope, k.rise_lo));
    pieces.push_back(Piece::constant(k.top_lo, k.top_hi, k.height));
    if (k.resolved) pieces.push_back(Piece::affine(k.top_hi, k.fall_hi, 0.0, -slope, k.fall_hi));
  }
  DensityOptions o;
  const double omitted = omitted_mass(spec.max_bump);
  o.mass_tolerance = omitted + kMassTolerance;
  o.tail = OmittedTail{bump_knots(spec.max_bump + 1).rise_lo, 1.0, omitted};
  return UscDensity1D(std::move(pieces), std::move(o));
}

/// Continuity at one knot of the construction.
struct KnotCheck {
  int bump = 0;  // 0 for the center piece
  double theta = 0.0;
  double left = 0.0;
  double right = 0.0;
  double value = 0.0;
  bool continuous = false;
};

/// Left limit, right limit and value at every knot. Bumps whose rise and fall
/// cannot be represented are skipped.
inline std::vector<KnotCheck> knot_continuity(const UscDensity1D& f, int max_bump) {
  std::vector<KnotCheck> out;
  auto check = [&](int bump, double t) {
    KnotCheck k{bump, t, f.left_limit(t), f.right_limit(t), f.evaluate(t), false};
    k.continuous = std::abs(k.left - k.right) <= 1e-15 && k.value == std::max(k.left, k.right);
    out.push_back(k);
  };
  check(0, -0.5);
  check(0, 0.0);
  check(0, 0.5);
  for (int n = 1; n <= max_bump; ++n) {
    const Knots k = bump_knots(n);
    if (!k.resolved) continue;
    for (double t : {k.rise_lo, k.top_lo, k.top_hi, k.fall_hi}) check(n, t);
  }
  return out;
}

/// Loss radius for rung nu of the ladder c = 2 * 4^nu.
inline double radius(int nu) { return pow2(-2 * nu - 1); }
inline double ladder_c(int nu) { return 2.0 * pow2(2 * nu); }

/// Mass of the loss ball at the origin: 4^-nu - (2/3) 8^-nu.
inline double objective_at_origin(int nu) {
  if (nu < 1) throw InvalidInput("nu must be >= 1");
  return pow2(-2 * nu) - (2.0 / 3.0) * pow2(-3 * nu);
}

/// Lower bound (1 - 4^-nu)(4^-nu - 64^-nu) for the ball mass centred on the
/// plateau of bump 2 nu: the ball covers the whole plateau.
inline double plateau_bound(int nu, int max_bump = kDefaultMaxBump) {
  if (nu < 1) throw InvalidInput("nu must be >= 1");
  if (max_bump < 2 * nu) throw CutoffTooSmall(2 * nu, max_bump);
  return (1.0 - pow2(-2 * nu)) * (pow2(-2 * nu) - pow2(-6 * nu));
}

/// Centre of the plateau of bump 2 nu.
inline double plateau_center(int nu) { return 2.0 * nu + 0.5 * (pow2(-2 * nu) - pow2(-6 * nu)); }

struct DominationRow {
  int nu = 0;
  double c = 0.0;
  double origin_value = 0.0;
  double plateau_bound = 0.0;
  /// Ball mass at plateau_center(nu), computed by integration.
  double plateau_objective = 0.0;
  double bayes_sup = 0.0;
  Point canonical;
  /// Every Bayes maximizer lies outside (-1/2, 1/2).
  bool outside_center = false;
};

struct NonconvergenceReport {
  std::vector<DominationRow> rows;
  SweepTrace trace;
  bool map_is_origin = false;
  bool all_outside = false;
};

inline bool outside_center(const ArgmaxResult& a) {
  for (const auto& m : a.maximizers) {
    const Interval& I = m.axis(0);
    if (I.hi > -0.5 && I.lo < 0.5) return false;
  }
  return !a.maximizers.empty();
}

/// Bayes estimates along c = 2 * 4^nu, nu = 1..nu_max, on the built density,
/// with the closed-form domination numbers for each rung.
inline NonconvergenceReport verify_nonconvergence(const UscDensity1D& f, int max_bump, int nu_max,
                                                  const SearchBox& box, const MaximizeOptions& opt = {}) {
  if (nu_max < 1) throw InvalidInput("nu_max must be >= 1");
  if (max_bump < 2 * nu_max) throw CutoffTooSmall(2 * nu_max, max_bump);
  require_nonempty(box);
  if (box.dim() != 1 || box.axis(0).lo > -1.0 || box.axis(0).hi < 2.0 * nu_max + 1.0)
    throw InvalidInput("search box must cover [-1, 2 nu_max + 1]");
  const Density d = f;
  NonconvergenceReport rep;
  rep.trace = sweep(d, default_ladder(nu_max), box, opt);
  rep.map_is_origin = rep.trace.map.canonical == Point{0.0} && rep.trace.map.sup_value == 1.0;
  rep.all_outside = true;
  for (int nu = 1; nu <= nu_max; ++nu) {
    const auto& row = rep.trace.rows[static_cast<std::size_t>(nu - 1)];
    const double r = radius(nu);
    DominationRow dr;
    dr.nu = nu;
    dr.c = row.c;
    dr.origin_value = objective_at_origin(nu);
    dr.plateau_bound = plateau_bound(nu, max_bump);
    dr.plateau_objective = f.integrate_window(plateau_center(nu), r);
    dr.bayes_sup = row.argmax.sup_value;
    dr.canonical = row.argmax.canonical;
    dr.outside_center = outside_center(row.argmax);
    rep.all_outside = rep.all_outside && dr.outside_center;
    rep.rows.push_back(std::move(dr));
  }
  return rep;
}

}  // namespace bayesmap::counterexample

#endif  // BAYESMAP_COUNTEREXAMPLE_HPP
