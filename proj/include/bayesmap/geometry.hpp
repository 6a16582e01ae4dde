#ifndef BAYESMAP_GEOMETRY_HPP
#define BAYESMAP_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace bayesmap {

/// Volume of the unit ball in R^n for n = 1, 2.
inline double unit_ball_volume(std::size_t n) {
  return n == 1 ? 2.0 : std::numbers::pi;
}

inline double ball_volume(std::size_t n, double radius) {
  return n == 1 ? 2.0 * radius : std::numbers::pi * radius * radius;
}

namespace detail {

// Antiderivative of sqrt(r^2 - u^2).
inline double half_chord_primitive(double u, double r) {
  const double w = std::clamp(u / r, -1.0, 1.0);
  const double root = std::sqrt(std::max(0.0, r * r - u * u));
  return 0.5 * (u * root + r * r * std::asin(w));
}

}  // namespace detail

/// Exact area of the intersection of the disc of radius r centred at (cx, cy)
/// with the rectangle [x1, x2] x [y1, y2].
inline double disc_rectangle_area(double cx, double cy, double r, double x1, double x2, double y1,
                                  double y2) {
  if (!(r > 0.0) || !(x1 < x2) || !(y1 < y2)) return 0.0;
  const double X1 = x1 - cx, X2 = x2 - cx, Y1 = y1 - cy, Y2 = y2 - cy;
  const double ulo = std::max(X1, -r), uhi = std::min(X2, r);
  if (!(ulo < uhi) || Y1 >= r || Y2 <= -r) return 0.0;

  std::vector<double> cuts{ulo, uhi};
  for (double y : {Y1, Y2}) {
    if (std::abs(y) < r) {
      const double u = std::sqrt(r * r - y * y);
      for (double c : {-u, u})
        if (c > ulo && c < uhi) cuts.push_back(c);
    }
  }
  std::sort(cuts.begin(), cuts.end());

  double area = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double p = cuts[k], q = cuts[k + 1];
    if (!(p < q)) continue;
    const double m = 0.5 * (p + q);
    const double half = std::sqrt(std::max(0.0, r * r - m * m));
    // Ties go to the chord: a tangent edge touches the circle only at m.
    const bool top_is_chord = half <= Y2;
    const bool bottom_is_chord = -half >= Y1;
    const double top = top_is_chord ? half : Y2;
    const double bottom = bottom_is_chord ? -half : Y1;
    if (top <= bottom) continue;
    const double chord = detail::half_chord_primitive(q, r) - detail::half_chord_primitive(p, r);
    const double span = q - p;
    area += (top_is_chord ? chord : Y2 * span) - (bottom_is_chord ? -chord : Y1 * span);
  }
  return std::max(0.0, area);
}

}  // namespace bayesmap

#endif  // BAYESMAP_GEOMETRY_HPP
