#ifndef BAYESMAP_PIECE_HPP
#define BAYESMAP_PIECE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "bayesmap/errors.hpp"

namespace bayesmap {

enum class PieceKind { constant, affine, sqrt_affine };

inline std::string_view to_string(PieceKind k) {
  switch (k) {
    case PieceKind::constant: return "constant";
    case PieceKind::affine: return "affine";
    case PieceKind::sqrt_affine: return "sqrt";
  }
  return "?";
}

inline PieceKind piece_kind_from_string(std::string_view s) {
  if (s == "constant") return PieceKind::constant;
  if (s == "affine") return PieceKind::affine;
  if (s == "sqrt") return PieceKind::sqrt_affine;
  throw InvalidDensity("unknown piece kind '" + std::string(s) + "'");
}

/// One analytic segment of a piecewise density on the half-open interval [lo, hi).
///
///   constant     k                         (stored in a)
///   affine       a + b (t - t0)
///   sqrt-affine  a + b sqrt(s (t - t0)),   s in {+1, -1}
///
/// Every kind is monotone on its interval, so extrema sit at the ends.
/// Affine pieces carry an anchor t0 so that steep segments far from the
/// origin keep full precision.
struct Piece {
  double lo = 0.0;
  double hi = 0.0;
  PieceKind kind = PieceKind::constant;
  double a = 0.0;
  double b = 0.0;
  double t0 = 0.0;
  int s = 1;

  static Piece constant(double lo, double hi, double k) {
    return Piece{lo, hi, PieceKind::constant, k, 0.0, 0.0, 1};
  }
  static Piece affine(double lo, double hi, double a, double b, double t0 = 0.0) {
    return Piece{lo, hi, PieceKind::affine, a, b, t0, 1};
  }
  static Piece sqrt_affine(double lo, double hi, double a, double b, double t0, int s) {
    return Piece{lo, hi, PieceKind::sqrt_affine, a, b, t0, s};
  }

  /// Argument of the square root, s (t - t0), clipped at zero.
  double root_arg(double t) const { return std::max(0.0, s * (t - t0)); }

  /// Formula value at t (no clipping to [lo, hi]). Tiny negative rounding is clamped.
  double value(double t) const {
    double v = 0.0;
    switch (kind) {
      case PieceKind::constant: v = a; break;
      case PieceKind::affine: v = a + b * (t - t0); break;
      case PieceKind::sqrt_affine: v = a + b * std::sqrt(root_arg(t)); break;
    }
    return std::max(0.0, v);
  }

  double value_at_lo() const { return value(lo); }
  double value_at_hi() const { return value(hi); }

  /// Exact integral over [x, y] with lo <= x <= y <= hi.
  double integral(double x, double y) const { return integral(x, y, y - x, 0.5 * (x + y)); }

  /// Same, with the width and midpoint supplied by a caller that knows them
  /// more accurately than y - x (a window 2r wide around a centre).
  double integral(double x, double y, double width, double mid) const {
    switch (kind) {
      case PieceKind::constant: return a * width;
      case PieceKind::affine: return width * (a + b * (mid - t0));
      case PieceKind::sqrt_affine: {
        const double ux = root_arg(x);
        const double uy = root_arg(y);
        return a * width + s * (2.0 * b / 3.0) * (uy * std::sqrt(uy) - ux * std::sqrt(ux));
      }
    }
    return 0.0;
  }

  double mass() const { return integral(lo, hi); }

  /// True when the piece is flat (its value does not depend on t).
  bool is_flat() const { return kind == PieceKind::constant || b == 0.0; }

  /// Derivative of the formula at t; +/-inf at the branch point of a sqrt piece.
  double derivative(double t) const {
    switch (kind) {
      case PieceKind::constant: return 0.0;
      case PieceKind::affine: return b;
      case PieceKind::sqrt_affine: {
        if (b == 0.0) return 0.0;
        const double u = root_arg(t);
        if (u == 0.0) return (b * s > 0 ? 1.0 : -1.0) * std::numeric_limits<double>::infinity();
        return b * s / (2.0 * std::sqrt(u));
      }
    }
    return 0.0;
  }

  /// Lipschitz constant of the formula on [x, y] (inf if the sqrt branch point is touched).
  double lipschitz(double x, double y) const {
    switch (kind) {
      case PieceKind::constant: return 0.0;
      case PieceKind::affine: return std::abs(b);
      case PieceKind::sqrt_affine: {
        if (b == 0.0) return 0.0;
        const double u = std::min(root_arg(x), root_arg(y));
        if (u <= 0.0) return std::numeric_limits<double>::infinity();
        return std::abs(b) / (2.0 * std::sqrt(u));
      }
    }
    return 0.0;
  }

  Piece scaled(double k) const {
    Piece p = *this;
    p.a *= k;
    p.b *= k;
    return p;
  }

  friend bool operator==(const Piece&, const Piece&) = default;
};

/// Checks that a piece is well formed; throws InvalidDensity otherwise.
inline void validate_piece(const Piece& p) {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(p.lo) || !finite(p.hi) || !finite(p.a) || !finite(p.b) || !finite(p.t0))
    throw InvalidDensity("piece has non-finite parameters");
  if (!(p.lo < p.hi)) throw InvalidDensity("piece interval must satisfy lo < hi");
  if (p.kind == PieceKind::sqrt_affine) {
    if (p.s != 1 && p.s != -1) throw InvalidDensity("sqrt piece orientation s must be +1 or -1");
    const double slack = 1e-12 * std::max(1.0, std::abs(p.t0));
    if (p.s * (p.lo - p.t0) < -slack || p.s * (p.hi - p.t0) < -slack)
      throw InvalidDensity("sqrt piece requires s (t - t0) >= 0 on its interval");
  }
  // Monotone kinds: checking both ends covers the interval.
  auto raw = [&](double t) {
    switch (p.kind) {
      case PieceKind::constant: return p.a;
      case PieceKind::affine: return p.a + p.b * (t - p.t0);
      case PieceKind::sqrt_affine: return p.a + p.b * std::sqrt(p.root_arg(t));
    }
    return 0.0;
  };
  const double scale = std::max({1.0, std::abs(p.a), std::abs(p.b)});
  if (raw(p.lo) < -1e-12 * scale || raw(p.hi) < -1e-12 * scale)
    throw InvalidDensity("piece takes negative values on [" + std::to_string(p.lo) + ", " +
                         std::to_string(p.hi) + ")");
}

}  // namespace bayesmap

#endif  // BAYESMAP_PIECE_HPP
