#ifndef BAYESMAP_MOLLIFIER_HPP
#define BAYESMAP_MOLLIFIER_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <vector>

#include "bayesmap/any_density.hpp"
#include "bayesmap/argmax.hpp"
#include "bayesmap/geometry.hpp"
#include "bayesmap/region.hpp"

namespace bayesmap {

inline constexpr double kExactValueTolerance = 1e-10;
inline constexpr double kGridValueTolerance = 1e-6;

/// Knobs for the maximizers of ball objectives.
struct MaximizeOptions {
  /// Value tolerance in units of the normalized (averaged) objective. Unset
  /// means 1e-10 for exact pieces and 1e-6 for grid densities.
  std::optional<double> tol_value;
  /// Step of the fallback scan as a fraction of the box width; 0 disables it.
  double scan_step_fraction = 1e-4;
  /// How many scan maxima get a golden-section refinement.
  std::size_t refine_limit = 64;
  /// Argument tolerance of the refinement.
  double refine_tol = 1e-10;
  /// Scan lattice points per axis for 2D grids.
  std::size_t scan_points_2d = 129;
};

inline double default_tolerance(const Density& d, const MaximizeOptions& o) {
  if (o.tol_value) return *o.tol_value;
  return is_grid(d) ? kGridValueTolerance : kExactValueTolerance;
}

/// The ball objective theta -> integral of the base density over the open ball
/// of the given radius around theta, optionally divided by the ball volume.
///
/// With radius 1/nu and normalized = true this is the mollified density f^nu.
/// With radius 1/c and normalized = false it is the posterior probability of
/// the 0-1 loss ball, whose maximizers are the Bayes estimates.
class BallObjective {
 public:
  BallObjective(std::shared_ptr<const Density> base, double radius, bool normalized)
      : base_(std::move(base)), radius_(radius), normalized_(normalized) {
    if (!base_) throw InvalidInput("ball objective needs a base density");
    if (!(radius_ > 0.0) || !std::isfinite(radius_))
      throw InvalidInput("ball radius must be positive and finite");
    dim_ = dimension(*base_);
    volume_ = bayesmap::ball_volume(dim_, radius_);
    line_ = as_piecewise_1d(*base_);
  }
  BallObjective(const Density& base, double radius, bool normalized)
      : BallObjective(std::make_shared<const Density>(base), radius, normalized) {}

  static BallObjective mollified(const Density& base, double nu) {
    return BallObjective(base, 1.0 / nu, true);
  }

  const Density& base() const { return *base_; }
  std::shared_ptr<const Density> base_ptr() const { return base_; }
  double radius() const { return radius_; }
  bool normalized() const { return normalized_; }
  std::size_t dim() const { return dim_; }
  double ball_volume() const { return volume_; }
  /// Exact 1D form of the base, when it has one.
  const std::optional<UscDensity1D>& line() const { return line_; }

  /// Mass of the ball around theta (never normalized).
  double raw(const Point& theta) const {
    if (theta.size() != dim_) throw InvalidInput("point dimension does not match the density");
    if (line_) return line_->integrate_window(theta[0], radius_);
    return disc_mass(std::get<GridDensity>(*base_), theta[0], theta[1]);
  }
  double raw(double theta) const { return raw(Point{theta}); }

  double value(const Point& theta) const {
    const double m = raw(theta);
    return normalized_ ? m / volume_ : m;
  }
  double value(double theta) const { return value(Point{theta}); }
  double operator()(const Point& theta) const { return value(theta); }
  double operator()(double theta) const { return value(theta); }

  /// Factor taking the raw mass to the reported objective.
  double scale() const { return normalized_ ? 1.0 / volume_ : 1.0; }

 private:
  double disc_mass(const GridDensity& g, double cx, double cy) const {
    const double r = radius_;
    auto index_range = [&](std::size_t axis, double c) {
      const double h = g.spacing(axis);
      const double o = g.origin(axis);
      const double n = static_cast<double>(g.shape(axis));
      const double lo = std::clamp(std::floor((c - r - o) / h), 0.0, n);
      const double hi = std::clamp(std::floor((c + r - o) / h) + 1.0, 0.0, n);
      return std::array<std::size_t, 2>{static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
    };
    const auto ri = index_range(0, cx);
    const auto rj = index_range(1, cy);
    double sum = 0.0;
    for (std::size_t i = ri[0]; i < ri[1]; ++i)
      for (std::size_t j = rj[0]; j < rj[1]; ++j) {
        const double v = g.value(i, j);
        if (v == 0.0) continue;
        sum += v * disc_rectangle_area(cx, cy, r, g.grid_line(0, i), g.grid_line(0, i + 1),
                                       g.grid_line(1, j), g.grid_line(1, j + 1));
      }
    return sum;
  }

  std::shared_ptr<const Density> base_;
  double radius_ = 0.0;
  bool normalized_ = true;
  std::size_t dim_ = 1;
  double volume_ = 0.0;
  std::optional<UscDensity1D> line_;
};

/// Ball objective value at theta: raw mass or average, per the objective's flag.
inline double ball_integral(const BallObjective& b, const Point& theta) { return b.value(theta); }
inline double ball_integral(const BallObjective& b, double theta) { return b.value(theta); }

namespace detail {

// p + q d + w sqrt(sigma (d - tau)) in a local coordinate d around a segment midpoint.
struct LocalTerm {
  double p = 0.0;
  double q = 0.0;
  double w = 0.0;
  int sigma = 1;
  double tau = 0.0;

  bool has_root() const { return w != 0.0; }
  bool flat() const { return q == 0.0 && w == 0.0; }
  double operator()(double d) const {
    return p + q * d + (w != 0.0 ? w * std::sqrt(std::max(0.0, sigma * (d - tau))) : 0.0);
  }
};

// Density at (m + shift + d) as a function of d, using the piece containing m + shift.
inline LocalTerm local_term(const UscDensity1D& f, double m, double shift) {
  LocalTerm t;
  const double x = m + shift;
  const auto idx = f.piece_index(x);
  if (!idx) return t;
  const Piece& pc = f.pieces()[*idx];
  switch (pc.kind) {
    case PieceKind::constant: t.p = pc.a; break;
    case PieceKind::affine:
      t.p = pc.a + pc.b * (x - pc.t0);
      t.q = pc.b;
      break;
    case PieceKind::sqrt_affine:
      t.p = pc.a;
      t.w = pc.b;
      t.sigma = pc.s;
      t.tau = pc.t0 - x;
      break;
  }
  return t;
}

inline void quadratic_roots(double A, double B, double C, std::vector<double>& out) {
  const double scale = std::max({std::abs(A), std::abs(B), std::abs(C)});
  if (scale == 0.0) return;
  if (std::abs(A) <= 1e-14 * scale) {
    if (B != 0.0) out.push_back(-C / B);
    return;
  }
  double disc = B * B - 4.0 * A * C;
  if (disc < 0.0) {
    if (disc > -1e-12 * (B * B + std::abs(4.0 * A * C))) disc = 0.0;
    else return;
  }
  const double sq = std::sqrt(disc);
  const double qq = -0.5 * (B + (B >= 0.0 ? sq : -sq));
  if (qq != 0.0) {
    out.push_back(qq / A);
    out.push_back(C / qq);
  } else {
    out.push_back(-B / (2.0 * A));
  }
}

// Candidate zeros of right(d) - left(d). Squaring may add spurious roots;
// those are harmless because every candidate is scored by the objective.
inline std::vector<double> stationary_candidates(const LocalTerm& R, const LocalTerm& L) {
  std::vector<double> roots;
  if (!R.has_root() && !L.has_root()) {
    const double Q = R.q - L.q;
    if (Q != 0.0) roots.push_back((L.p - R.p) / Q);
  } else if (R.has_root() != L.has_root()) {
    const LocalTerm& S = R.has_root() ? R : L;   // term with the square root
    const LocalTerm& T = R.has_root() ? L : R;   // affine or flat term
    // S.w sqrt(sigma (d - tau)) = (T.p - S.p) + T.q d
    const double P = T.p - S.p;
    const double Q = T.q;
    const double k = S.w * S.w * S.sigma;
    quadratic_roots(Q * Q, 2.0 * P * Q - k, P * P + k * S.tau, roots);
  } else {
    // R.w sqrt(U_R) - L.w sqrt(U_L) = L.p - R.p
    const double P = L.p - R.p;
    const double k1 = R.w * R.w * R.sigma;
    const double k2 = L.w * L.w * L.sigma;
    const double beta = k1 - k2;
    const double alpha = -k1 * R.tau + k2 * L.tau - P * P;
    const double k3 = 4.0 * P * P * k2;
    quadratic_roots(beta * beta, 2.0 * alpha * beta - k3, alpha * alpha + k3 * L.tau, roots);
  }
  return roots;
}

inline double golden_section_max(const auto& f, double a, double b, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

/// Maximizes scale * integral_{theta - r}^{theta + r} f over theta in box.
///
/// Candidates: box ends, base breakpoints shifted by +/- r, zeros of
/// f(theta + r) - f(theta - r) on every segment between those shifts, flat
/// segments as whole intervals, and refined maxima of a fallback scan.
inline ArgmaxResult maximize_window_1d(const UscDensity1D& f, double r, Interval box, double scale,
                                       double tol, const MaximizeOptions& opt) {
  const auto g = [&](double th) { return scale * f.integrate_window(th, r); };
  const double A = box.lo, B = box.hi;
  std::vector<Candidate> cands;
  auto add_point = [&](double th, bool scanned = false) {
    if (th >= A && th <= B) cands.push_back({Box(th, th), g(th), scanned});
  };

  std::vector<double> cuts{A, B};
  for (double bp : f.breakpoints())
    for (double c : {bp - r, bp + r})
      if (c > A && c < B) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (double c : cuts) add_point(c);

  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double u = cuts[k], v = cuts[k + 1];
    if (!(u < v)) continue;
    const double m = 0.5 * (u + v);
    const LocalTerm R = local_term(f, m, r);
    const LocalTerm L = local_term(f, m, -r);
    const double vscale = std::max({1.0, std::abs(R.p), std::abs(L.p)});
    const bool same_line = !R.has_root() && !L.has_root() && R.q == L.q;
    if (same_line && std::abs(R.p - L.p) <= 1e-12 * vscale) {
      const double gu = g(u), gv = g(v), gm = g(m);
      if (std::max({gu, gv, gm}) - std::min({gu, gv, gm}) <= tol) {
        cands.push_back({Box(u, v), std::min({gu, gv, gm})});
        continue;
      }
    }
    const double half = 0.5 * (v - u);
    for (double d : stationary_candidates(R, L))
      if (std::isfinite(d) && d > -half && d < half) add_point(m + d);
    // Sign changes from + to - of g' on a coarse lattice, refined by bisection.
    const auto h = [&](double d) { return R(d) - L(d); };
    constexpr int kSamples = 8;
    double prev_d = -half, prev_h = h(prev_d);
    for (int s = 1; s <= kSamples; ++s) {
      const double d = -half + (v - u) * s / kSamples;
      const double hd = h(d);
      if (prev_h > 0.0 && hd < 0.0) {
        double lo = prev_d, hi = d;
        for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (mid <= lo || mid >= hi) break;
          (h(mid) > 0.0 ? lo : hi) = mid;
        }
        add_point(m + 0.5 * (lo + hi));
      }
      prev_d = d;
      prev_h = hd;
    }
  }

  if (opt.scan_step_fraction > 0.0 && B > A) {
    const auto n = static_cast<std::size_t>(std::ceil(1.0 / opt.scan_step_fraction));
    const double step = (B - A) / static_cast<double>(n);
    std::vector<double> xs(n + 1), vs(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      xs[i] = i == n ? B : A + step * static_cast<double>(i);
      vs[i] = g(xs[i]);
    }
    std::vector<std::size_t> peaks;
    for (std::size_t i = 0; i <= n; ++i) {
      const bool left_ok = i == 0 || vs[i] >= vs[i - 1];
      const bool right_ok = i == n || vs[i] >= vs[i + 1];
      if (left_ok && right_ok) peaks.push_back(i);
    }
    std::stable_sort(peaks.begin(), peaks.end(),
                     [&](std::size_t x, std::size_t y) { return vs[x] > vs[y]; });
    if (peaks.size() > opt.refine_limit) peaks.resize(opt.refine_limit);
    for (std::size_t i : peaks) {
      const double a = xs[i == 0 ? 0 : i - 1];
      const double b = xs[i == n ? n : i + 1];
      add_point(golden_section_max(g, a, b, opt.refine_tol), true);
    }
  }
  return assemble_argmax(std::move(cands), tol, g, 1e-6 * std::max(1.0, B - A));
}

/// Maximizes scale * (mass of the disc around theta) over a 2D box by a
/// lattice scan followed by compass-search refinement of the best local maxima.
inline ArgmaxResult maximize_disc_2d(const BallObjective& obj, const Box& box, double scale,
                                     double tol, const MaximizeOptions& opt) {
  const auto g = [&](double x, double y) { return scale * obj.raw(Point{x, y}); };
  const std::size_t n = std::max<std::size_t>(2, opt.scan_points_2d);
  const Interval X = box.axis(0), Y = box.axis(1);
  auto lattice = [&](const Interval& I, std::size_t i) {
    return i + 1 == n ? I.hi : I.lo + I.width() * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  std::vector<double> vals(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) vals[i * n + j] = g(lattice(X, i), lattice(Y, j));

  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double v = vals[i * n + j];
      bool is_peak = true;
      for (int di = -1; di <= 1 && is_peak; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          const long ii = static_cast<long>(i) + di, jj = static_cast<long>(j) + dj;
          if ((di == 0 && dj == 0) || ii < 0 || jj < 0 || ii >= static_cast<long>(n) ||
              jj >= static_cast<long>(n))
            continue;
          if (vals[static_cast<std::size_t>(ii) * n + static_cast<std::size_t>(jj)] > v) {
            is_peak = false;
            break;
          }
        }
      if (is_peak) peaks.push_back(i * n + j);
    }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
  if (peaks.size() > opt.refine_limit) peaks.resize(opt.refine_limit);

  std::vector<Candidate> cands;
  const double hx = X.width() / static_cast<double>(n - 1);
  const double hy = Y.width() / static_cast<double>(n - 1);
  for (std::size_t idx : peaks) {
    double x = lattice(X, idx / n), y = lattice(Y, idx % n);
    double best = vals[idx];
    double sx = hx, sy = hy;
    while (sx > opt.refine_tol || sy > opt.refine_tol) {
      bool moved = false;
      for (auto [dx, dy] : {std::array<double, 2>{sx, 0}, {-sx, 0}, {0, sy}, {0, -sy}}) {
        const double nx = X.clamp(x + dx), ny = Y.clamp(y + dy);
        const double v = g(nx, ny);
        if (v > best) {
          best = v;
          x = nx;
          y = ny;
          moved = true;
        }
      }
      if (!moved) {
        sx *= 0.5;
        sy *= 0.5;
      }
    }
    cands.push_back({Box::point({x, y}), best});
  }
  return assemble_argmax(std::move(cands), tol);
}

}  // namespace detail

/// Supremum and maximizers of an objective over a search box.
inline ArgmaxResult maximize_ball_objective(const BallObjective& b, const SearchBox& box,
                                            const MaximizeOptions& opt = {}) {
  require_nonempty(box);
  if (box.dim() != b.dim()) throw InvalidInput("search box dimension does not match the density");
  const double tol_normalized = default_tolerance(b.base(), opt);
  const double tol = b.normalized() ? tol_normalized : tol_normalized * b.ball_volume();
  if (b.line()) return detail::maximize_window_1d(*b.line(), b.radius(), box.axis(0), b.scale(), tol, opt);
  return detail::maximize_disc_2d(b, box, b.scale(), tol, opt);
}

/// Supremum of the mollified density f^nu over a bounded box.
inline ArgmaxResult mollified_sup(const BallObjective& b, const SearchBox& box,
                                  const MaximizeOptions& opt = {}) {
  if (!b.normalized()) throw InvalidInput("mollified_sup needs the normalized objective");
  return maximize_ball_objective(b, box, opt);
}

}  // namespace bayesmap

#endif  // BAYESMAP_MOLLIFIER_HPP
