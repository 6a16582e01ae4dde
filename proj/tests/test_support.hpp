// Shared fixtures and independent numerical oracles for the test suites.
#ifndef BAYESMAP_TESTS_TEST_SUPPORT_HPP
#define BAYESMAP_TESTS_TEST_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "bayesmap/density.hpp"

namespace bayesmap::testing {

// ---------------------------------------------------------------------------
// Fixture densities
// ---------------------------------------------------------------------------

/// f(t) = 1 - |t| on [-1, 1].
inline UscDensity1D triangle() {
  return UscDensity1D({Piece::affine(-1.0, 0.0, 1.0, 1.0, 0.0), Piece::affine(0.0, 1.0, 1.0, -1.0, 0.0)});
}

inline UscDensity1D uniform01() { return UscDensity1D({Piece::constant(0.0, 1.0, 1.0)}); }

/// Value 2 on [0, 0.5).
inline UscDensity1D step_density() { return UscDensity1D({Piece::constant(0.0, 0.5, 2.0)}); }

/// f(t) = 2t on [0, 1].
inline UscDensity1D ramp() { return UscDensity1D({Piece::affine(0.0, 1.0, 0.0, 2.0, 0.0)}); }

/// Triangle with support [-1, 3] and mode 0 (height 1/2).
inline UscDensity1D skewed_triangle() {
  return UscDensity1D({Piece::affine(-1.0, 0.0, 0.5, 0.5, 0.0), Piece::affine(0.0, 3.0, 0.5, -0.5 / 3.0, 0.0)});
}

/// Cusp peak h (1 - sqrt(-t / 0.5)) on [-0.5, 0), h (1 - sqrt(t / 2)) on [0, 2), h = 1.2.
inline UscDensity1D skewed_cusp() {
  const double h = 3.0 / 2.5;
  return UscDensity1D({Piece::sqrt_affine(-0.5, 0.0, h, -h / std::sqrt(0.5), 0.0, -1),
                       Piece::sqrt_affine(0.0, 2.0, h, -h / std::sqrt(2.0), 0.0, 1)});
}

/// Trapezoid: rise on [-1, 0), plateau 1/3 on [0, 1), fall on [1, 4).
inline UscDensity1D skewed_trapezoid() {
  const double h = 1.0 / 3.0;
  return UscDensity1D({Piece::affine(-1.0, 0.0, h, h, 0.0), Piece::constant(0.0, 1.0, h),
                       Piece::affine(1.0, 4.0, h, -h / 3.0, 1.0)});
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

namespace detail {
inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                           double fm, double fb, double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b].
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double eps = 1e-13, int max_depth = 60) {
  if (!(a < b)) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, eps, max_depth);
}

/// Integral of d over [lo, hi] by adaptive Simpson on pointwise values, split at
/// breakpoints so each panel sees a smooth integrand. Uses no antiderivatives.
inline double oracle_integral(const UscDensity1D& d, double lo, double hi, double eps = 1e-13) {
  if (!(lo < hi)) return 0.0;
  std::vector<double> cuts{lo, hi};
  for (double b : d.breakpoints())
    if (b > lo && b < hi) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double x = cuts[k], y = cuts[k + 1];
    auto f = [&](double t) {
      if (t <= x) return d.right_limit(x);
      if (t >= y) return d.left_limit(y);
      return d.evaluate(t);
    };
    sum += adaptive_simpson(f, x, y, eps / static_cast<double>(cuts.size()));
  }
  return sum;
}

/// Maximizer of f over [a, b] by brute-force lattice scan.
inline std::pair<double, double> scan_max(const std::function<double(double)>& f, double a, double b,
                                          double step) {
  double best_x = a, best_v = f(a);
  const auto n = static_cast<long>(std::ceil((b - a) / step));
  for (long i = 1; i <= n; ++i) {
    const double x = std::min(b, a + step * static_cast<double>(i));
    const double v = f(x);
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  }
  return {best_x, best_v};
}

// ---------------------------------------------------------------------------
// Random piecewise densities
// ---------------------------------------------------------------------------

/// Random unit-mass density of 1-6 pieces of every kind, with occasional gaps.
inline UscDensity1D random_density(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::uniform_int_distribution<int> npieces(1, 6), kind(0, 2);
  const int n = npieces(rng);
  std::vector<Piece> pieces;
  double t = -2.0 + 2.0 * U(rng);
  for (int i = 0; i < n; ++i) {
    if (U(rng) < 0.25) t += 0.1 + 0.4 * U(rng);  // gap
    const double lo = t, hi = t + 0.2 + 1.3 * U(rng);
    switch (kind(rng)) {
      case 0: pieces.push_back(Piece::constant(lo, hi, 0.1 + U(rng))); break;
      case 1: {
        const double vlo = U(rng), vhi = U(rng);
        pieces.push_back(Piece::affine(lo, hi, vlo, (vhi - vlo) / (hi - lo), lo));
        break;
      }
      default: {
        const int s = U(rng) < 0.5 ? 1 : -1;
        // Branch point on the piece's near end or a little outside it.
        const double off = U(rng) < 0.5 ? 0.0 : 0.3 * U(rng);
        const double t0 = s > 0 ? lo - off : hi + off;
        const double umax = std::max(s * (lo - t0), s * (hi - t0));
        const double a = 0.05 + U(rng);
        double b = 2.0 * U(rng) - 1.0;
        if (a + b * std::sqrt(umax) < 0.0) b = -a / std::sqrt(umax) * U(rng);
        pieces.push_back(Piece::sqrt_affine(lo, hi, a, b, t0, s));
        break;
      }
    }
    t = hi;
  }
  return UscDensity1D::normalized(std::move(pieces));
}

}  // namespace bayesmap::testing

#endif  // BAYESMAP_TESTS_TEST_SUPPORT_HPP
