#ifndef BAYESMAP_CONDITIONS_HPP
#define BAYESMAP_CONDITIONS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bayesmap/any_density.hpp"
#include "bayesmap/region.hpp"

namespace bayesmap {

/// Upper level set {theta : f(theta) >= alpha}.
struct LevelSetReport {
  double alpha = 0.0;
  /// Closed intervals for 1D densities, sorted and disjoint.
  std::vector<Interval> intervals;
  /// Closed cells for 2D grids.
  std::vector<Box> cells;
  /// alpha <= 0: the set is the whole space.
  bool whole_space = false;
  bool empty = true;
  bool bounded = true;
  /// Smallest M with the set inside [-M, M]^n (inf when unbounded).
  double bound_M = 0.0;
  bool nonempty_interior = false;
  /// Set when the density carries an unmaterialized tail that reaches the level.
  std::optional<double> unbounded_beyond;
};

/// Triple (x, y, lambda) with z = lambda x + (1 - lambda) y breaking a shape inequality.
struct TripleWitness {
  Point x;
  Point y;
  double lambda = 0.5;
  Point z;
  double f_x = 0.0;
  double f_y = 0.0;
  double f_z = 0.0;
};

struct ShapeVerdict {
  bool holds = true;
  /// false when the verdict comes from random sampling.
  bool exact = true;
  std::optional<TripleWitness> witness;
  std::string note;
};

struct ConditionReport {
  std::vector<double> alpha_grid;
  /// Strict-level-set reports, one per grid value.
  std::vector<LevelSetReport> level_sets;
  bool level_set_condition = false;
  std::optional<double> witness_alpha;
  ShapeVerdict quasiconcave;
  ShapeVerdict log_concave;
  bool eventually_level_bounded = false;
};

inline constexpr double kShapeSlack = 1e-12;
inline constexpr double kStrictLevelShift = 1e-12;
inline constexpr std::size_t kRandomTriples = 10000;

namespace detail {

/// {t in [p.lo, p.hi] : formula(t) >= alpha} for a monotone piece.
inline std::optional<Interval> piece_level_interval(const Piece& p, double alpha) {
  const Interval full{p.lo, p.hi};
  auto clip = [&](double lo, double hi) -> std::optional<Interval> {
    Interval I{std::max(lo, p.lo), std::min(hi, p.hi)};
    if (I.empty()) return std::nullopt;
    return I;
  };
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (p.kind) {
    case PieceKind::constant:
      if (p.a >= alpha) return full;
      return std::nullopt;
    case PieceKind::affine: {
      if (p.b == 0.0) return p.a >= alpha ? std::optional<Interval>(full) : std::nullopt;
      const double root = p.t0 + (alpha - p.a) / p.b;
      return p.b > 0.0 ? clip(root, inf) : clip(-inf, root);
    }
    case PieceKind::sqrt_affine: {
      if (p.b == 0.0) return p.a >= alpha ? std::optional<Interval>(full) : std::nullopt;
      // Range of u = s (t - t0) satisfying a + b sqrt(u) >= alpha.
      double ulo = 0.0, uhi = inf;
      if (p.b > 0.0) {
        const double k = (alpha - p.a) / p.b;
        if (k > 0.0) ulo = k * k;
      } else {
        if (alpha > p.a) return std::nullopt;
        const double k = (p.a - alpha) / -p.b;
        uhi = k * k;
      }
      if (p.s > 0) return clip(p.t0 + ulo, p.t0 + uhi);
      return clip(p.t0 - uhi, p.t0 - ulo);
    }
  }
  return std::nullopt;
}

inline void finish_level_report(LevelSetReport& r) {
  r.empty = r.intervals.empty() && r.cells.empty();
  if (r.unbounded_beyond) {
    r.empty = false;
    r.bounded = false;
    r.bound_M = std::numeric_limits<double>::infinity();
  } else {
    r.bounded = true;
    double M = 0.0;
    for (const auto& I : r.intervals) M = std::max({M, std::abs(I.lo), std::abs(I.hi)});
    for (const auto& c : r.cells)
      for (std::size_t a = 0; a < c.dim(); ++a)
        M = std::max({M, std::abs(c.axis(a).lo), std::abs(c.axis(a).hi)});
    r.bound_M = M;
  }
  for (const auto& I : r.intervals)
    if (I.hi > I.lo) r.nonempty_interior = true;
  if (!r.cells.empty()) r.nonempty_interior = true;
  if (r.unbounded_beyond) r.nonempty_interior = true;
}

inline LevelSetReport level_set_1d(const UscDensity1D& f, double alpha) {
  LevelSetReport r;
  r.alpha = alpha;
  if (alpha <= 0.0) {
    r.whole_space = true;
    r.empty = false;
    r.bounded = false;
    r.bound_M = std::numeric_limits<double>::infinity();
    r.nonempty_interior = true;
    return r;
  }
  // With the envelope rule a breakpoint belongs to the set iff one of its
  // one-sided limits does, so closed per-piece solutions union to the set.
  std::vector<Interval> parts;
  for (const auto& p : f.pieces())
    if (auto I = piece_level_interval(p, alpha)) parts.push_back(*I);
  for (double u : f.unbounded_at()) parts.push_back({u, u});
  std::sort(parts.begin(), parts.end(),
            [](const Interval& a, const Interval& b) { return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi; });
  for (const auto& I : parts) {
    if (!r.intervals.empty() && I.lo <= r.intervals.back().hi)
      r.intervals.back().hi = std::max(r.intervals.back().hi, I.hi);
    else
      r.intervals.push_back(I);
  }
  if (f.tail() && alpha < f.tail()->sup_value) r.unbounded_beyond = f.tail()->start;
  finish_level_report(r);
  return r;
}

inline LevelSetReport level_set_grid(const GridDensity& g, double alpha) {
  if (g.dim() == 1) return level_set_1d(g.to_usc_1d(), alpha);
  LevelSetReport r;
  r.alpha = alpha;
  if (alpha <= 0.0) {
    r.whole_space = true;
    r.empty = false;
    r.bounded = false;
    r.bound_M = std::numeric_limits<double>::infinity();
    r.nonempty_interior = true;
    return r;
  }
  for (std::size_t i = 0; i < g.shape(0); ++i)
    for (std::size_t j = 0; j < g.shape(1); ++j)
      if (g.value(i, j) >= alpha) r.cells.push_back(g.cell_box(i, j));
  finish_level_report(r);
  return r;
}

// ---------------------------------------------------------------------------
// Shape checks
// ---------------------------------------------------------------------------

inline bool quasi_violated(double fx, double fy, double fz) {
  return fz < std::min(fx, fy) - kShapeSlack;
}

/// f(z) < f(x)^lambda f(y)^(1 - lambda) - slack, with 0 and +inf handled.
inline bool log_violated(double fx, double fy, double fz, double lambda) {
  if (fx <= 0.0 || fy <= 0.0) return false;
  double rhs;
  if (std::isinf(fx) || std::isinf(fy))
    rhs = std::numeric_limits<double>::infinity();
  else
    rhs = std::exp(lambda * std::log(fx) + (1.0 - lambda) * std::log(fy));
  return fz < rhs - kShapeSlack;
}

template <class F>
std::optional<TripleWitness> make_witness(const F& f, const Point& x, const Point& y, double lambda,
                                          bool log_form) {
  if (!(lambda > 0.0 && lambda < 1.0)) return std::nullopt;
  Point z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = lambda * x[i] + (1.0 - lambda) * y[i];
  TripleWitness w{x, y, lambda, z, f(x), f(y), f(z)};
  const bool bad = log_form ? log_violated(w.f_x, w.f_y, w.f_z, lambda) : quasi_violated(w.f_x, w.f_y, w.f_z);
  if (!bad) return std::nullopt;
  return w;
}

/// Random triples drawn from positive cells or the sampling box.
template <class F>
std::optional<TripleWitness> random_witness(const F& f, const Box& box, const std::vector<Point>& anchors,
                                            bool log_form, std::uint64_t seed,
                                            std::size_t count = kRandomTriples) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto draw = [&]() {
    if (!anchors.empty() && U(rng) < 0.5) {
      const auto k = static_cast<std::size_t>(U(rng) * static_cast<double>(anchors.size()));
      return anchors[std::min(k, anchors.size() - 1)];
    }
    Point p(box.dim());
    for (std::size_t a = 0; a < box.dim(); ++a) p[a] = box.axis(a).lo + box.axis(a).width() * U(rng);
    return p;
  };
  for (std::size_t k = 0; k < count; ++k) {
    const Point x = draw(), y = draw();
    const double lambda = 0.01 + 0.98 * U(rng);
    if (auto w = make_witness(f, x, y, lambda, log_form)) return w;
  }
  return std::nullopt;
}

struct ShapeSample {
  double pos;
  double value;
  int rank;            // ordering of coincident samples: hi-limit, point, lo-limit
  double inward = 0.0; // direction into the piece for one-sided limits
  double room = 0.0;   // piece width available for nudging
};

/// Exact quasiconcavity of a piecewise density.
///
/// Every piece is monotone, so f is quasiconcave iff the ordered sequence of
/// piece-end limits (with 0 in gaps and beyond the support) never dips below
/// both a value to its left and a value to its right.
inline ShapeVerdict quasiconcavity_1d(const UscDensity1D& f, std::uint64_t seed) {
  const auto pieces = f.pieces();
  std::vector<ShapeSample> seq;
  constexpr double inf = std::numeric_limits<double>::infinity();
  seq.push_back({-inf, 0.0, 1});
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const Piece& p = pieces[k];
    if (k > 0 && pieces[k - 1].hi < p.lo) seq.push_back({0.5 * (pieces[k - 1].hi + p.lo), 0.0, 1});
    seq.push_back({p.lo, p.value_at_lo(), 2, 1.0, p.hi - p.lo});
    seq.push_back({p.hi, p.value_at_hi(), 0, -1.0, p.hi - p.lo});
  }
  for (double u : f.unbounded_at()) seq.push_back({u, inf, 1});
  seq.push_back({inf, 0.0, 1});
  std::stable_sort(seq.begin(), seq.end(), [](const ShapeSample& a, const ShapeSample& b) {
    return a.pos != b.pos ? a.pos < b.pos : a.rank < b.rank;
  });

  const std::size_t n = seq.size();
  std::vector<double> pre(n, -inf), suf(n, -inf);
  for (std::size_t j = 1; j < n; ++j) pre[j] = std::max(pre[j - 1], seq[j - 1].value);
  for (std::size_t j = n - 1; j-- > 0;) suf[j] = std::max(suf[j + 1], seq[j + 1].value);

  const auto F = [&](const Point& p) { return f.evaluate(p[0]); };
  ShapeVerdict v;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double m = std::min(pre[j], suf[j]);
    if (!(seq[j].value < m - 1e3 * kShapeSlack)) continue;
    v.holds = false;
    // Attained dip point: the sample itself, or a point just inside its piece.
    double z = seq[j].pos, fz = f.evaluate(z);
    if (seq[j].inward != 0.0) {
      for (int s = 2; s <= 50; ++s) {
        z = seq[j].pos + seq[j].inward * seq[j].room * std::ldexp(1.0, -s);
        fz = f.evaluate(z);
        if (fz < m - 1e3 * kShapeSlack) break;
      }
    }
    const double tau = std::isfinite(m) ? 0.5 * (fz + m) : fz + 1.0;
    std::optional<double> x, y;
    for (std::size_t i = j; i-- > 0;)
      if (seq[i].value >= tau && std::isfinite(seq[i].pos)) {
        x = seq[i].pos;
        break;
      }
    for (std::size_t i = j + 1; i < n; ++i)
      if (seq[i].value >= tau && std::isfinite(seq[i].pos)) {
        y = seq[i].pos;
        break;
      }
    if (x && y && *x < z && z < *y) {
      v.witness = make_witness(F, Point{*x}, Point{*y}, (z - *y) / (*x - *y), false);
      if (v.witness) return v;
    }
    break;
  }
  if (!v.holds) {
    const Box box(f.support_lo(), f.support_hi());
    v.witness = random_witness(F, box, {}, false, seed);
    if (!v.witness) v.note = "dip detected but no witness verified";
  }
  return v;
}

/// Exact log-concavity of a piecewise density.
///
/// Requires a single interval of positivity without interior zeros or jumps,
/// log-concave pieces, and non-increasing slopes across each breakpoint.
inline ShapeVerdict log_concavity_1d(const UscDensity1D& f, std::uint64_t seed) {
  const auto pieces = f.pieces();
  const auto F = [&](const Point& p) { return f.evaluate(p[0]); };
  ShapeVerdict v;

  auto try_around = [&](double b, double width, bool symmetric_only) -> std::optional<TripleWitness> {
    for (int k = 2; k <= 45; ++k) {
      const double d = width * std::ldexp(1.0, -k);
      if (auto w = make_witness(F, Point{b - d}, Point{b + d}, 0.5, true)) return w;
      if (symmetric_only) continue;
      if (auto w = make_witness(F, Point{b - d}, Point{b + 3 * d}, 0.5, true)) return w;
      if (auto w = make_witness(F, Point{b - 3 * d}, Point{b + d}, 0.5, true)) return w;
      if (auto w = make_witness(F, Point{b - 2 * d}, Point{b}, 0.5, true)) return w;
      if (auto w = make_witness(F, Point{b}, Point{b + 2 * d}, 0.5, true)) return w;
    }
    return std::nullopt;
  };
  auto fail = [&](std::optional<TripleWitness> w, std::string note) {
    v.holds = false;
    v.witness = std::move(w);
    v.note = std::move(note);
    if (!v.witness) {
      v.witness = random_witness(F, Box(f.support_lo(), f.support_hi()), {}, true, seed);
      if (!v.witness) v.note += "; no witness verified";
    }
    return v;
  };

  if (!f.unbounded_at().empty()) {
    const double u = f.unbounded_at().front();
    for (const auto& p : pieces) {
      const double m = 0.5 * (p.lo + p.hi);
      if (m != u && p.value(m) > 0.0)
        return fail(make_witness(F, Point{u}, Point{m}, 0.5, true), "infinite value at a point");
    }
    return fail(std::nullopt, "infinite value at a point");
  }

  auto positive = [](const Piece& p) { return p.value_at_lo() > 0.0 || p.value_at_hi() > 0.0; };
  std::size_t i0 = 0, i1 = pieces.size() - 1;
  while (i0 < pieces.size() && !positive(pieces[i0])) ++i0;
  while (i1 > i0 && !positive(pieces[i1])) --i1;

  for (std::size_t k = i0; k < i1; ++k) {
    const Piece& a = pieces[k];
    const Piece& b = pieces[k + 1];
    const double w = std::min(a.hi - a.lo, b.hi - b.lo);
    if (a.hi < b.lo || !positive(b)) {
      const Piece& next = positive(b) ? b : pieces[std::min(k + 2, i1)];
      const double x = 0.5 * (a.lo + a.hi), y = 0.5 * (next.lo + next.hi);
      const double z = positive(b) ? 0.5 * (a.hi + b.lo) : 0.5 * (b.lo + b.hi);
      return fail(make_witness(F, Point{x}, Point{y}, (z - y) / (x - y), true),
                  "positive set is not an interval");
    }
    const double L = a.value_at_hi(), R = b.value_at_lo();
    if (L <= 0.0 || R <= 0.0) return fail(try_around(a.hi, w, false), "interior zero at a breakpoint");
    if (std::abs(L - R) > 1e-12 * std::max({1.0, L, R}))
      return fail(try_around(a.hi, w, false), "jump at an interior breakpoint");
    const double dl = a.derivative(a.hi), dr = b.derivative(b.lo);
    if (dl < dr - 1e-9 * std::max({1.0, std::abs(dl), std::isfinite(dr) ? std::abs(dr) : 0.0}))
      return fail(try_around(a.hi, w, true), "convex kink at a breakpoint");
  }

  for (std::size_t k = i0; k <= i1; ++k) {
    const Piece& p = pieces[k];
    if (p.kind != PieceKind::sqrt_affine || !(p.b < 0.0)) continue;
    // a - |b| sqrt(u) has concave log exactly where sqrt(u) >= a / (2 |b|).
    const double ustar = std::pow(p.a / (2.0 * -p.b), 2);
    const double ulo = std::min(p.root_arg(p.lo), p.root_arg(p.hi));
    const double uhi = std::max(p.root_arg(p.lo), p.root_arg(p.hi));
    if (ulo >= ustar * (1.0 - 1e-12)) continue;
    const double ucut = std::min(uhi, ustar);
    const double t1 = p.t0 + p.s * ulo, t2 = p.t0 + p.s * ucut;
    const double lo = std::min(t1, t2), hi = std::max(t1, t2);
    std::optional<TripleWitness> w;
    for (int k2 = 1; k2 <= 30 && !w; ++k2) {
      const double inset = (hi - lo) * std::ldexp(1.0, -k2 - 4);
      w = make_witness(F, Point{lo + inset}, Point{hi - inset}, 0.5, true);
    }
    return fail(std::move(w), "piece with convex logarithm");
  }
  return v;
}

inline ShapeVerdict random_shape_2d(const GridDensity& g, bool log_form, std::uint64_t seed) {
  std::vector<Point> anchors;
  for (std::size_t i = 0; i < g.shape(0); ++i)
    for (std::size_t j = 0; j < g.shape(1); ++j)
      if (g.value(i, j) > 0.0) anchors.push_back(g.cell_box(i, j).center());
  ShapeVerdict v;
  v.exact = false;
  const auto F = [&](const Point& p) { return g.evaluate(p); };
  v.witness = random_witness(F, g.extent(), anchors, log_form, seed);
  v.holds = !v.witness.has_value();
  v.note = "randomized: " + std::to_string(kRandomTriples) + " triples";
  return v;
}

}  // namespace detail

/// Exact upper level set {f >= alpha}.
inline LevelSetReport level_set(const Density& d, double alpha) {
  if (const auto* u = std::get_if<UscDensity1D>(&d)) return detail::level_set_1d(*u, alpha);
  return detail::level_set_grid(std::get<GridDensity>(d), alpha);
}

/// Strict level set {f > alpha}, computed as {f >= alpha - 1e-12}.
inline LevelSetReport strict_level_set(const Density& d, double alpha) {
  LevelSetReport r = level_set(d, alpha - kStrictLevelShift);
  r.alpha = alpha;
  return r;
}

inline ShapeVerdict check_quasiconcave(const Density& d, std::uint64_t seed = 0) {
  if (auto line = as_piecewise_1d(d)) return detail::quasiconcavity_1d(*line, seed);
  return detail::random_shape_2d(std::get<GridDensity>(d), false, seed);
}

inline ShapeVerdict check_log_concave(const Density& d, std::uint64_t seed = 0) {
  if (auto line = as_piecewise_1d(d)) return detail::log_concavity_1d(*line, seed);
  return detail::random_shape_2d(std::get<GridDensity>(d), true, seed);
}

inline ConditionReport check_conditions(const Density& d, const std::vector<double>& alpha_grid,
                                        std::uint64_t seed = 0) {
  if (alpha_grid.empty()) throw InvalidInput("alpha grid must be nonempty");
  ConditionReport r;
  r.alpha_grid = alpha_grid;
  for (double alpha : alpha_grid) {
    LevelSetReport L = strict_level_set(d, alpha);
    if (!r.level_set_condition && L.bounded && L.nonempty_interior) {
      r.level_set_condition = true;
      r.witness_alpha = alpha;
    }
    if (L.bounded && !L.empty) r.eventually_level_bounded = true;
    r.level_sets.push_back(std::move(L));
  }
  r.quasiconcave = check_quasiconcave(d, seed);
  r.log_concave = check_log_concave(d, seed + 1);
  if (r.log_concave.holds && !r.quasiconcave.holds)
    throw InvariantViolation("log-concave density reported as not quasiconcave");
  return r;
}

}  // namespace bayesmap

#endif  // BAYESMAP_CONDITIONS_HPP
