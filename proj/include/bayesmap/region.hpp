#ifndef BAYESMAP_REGION_HPP
#define BAYESMAP_REGION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "bayesmap/errors.hpp"

namespace bayesmap {

using Point = std::vector<double>;

/// Closed real interval [lo, hi]. Bounds may be infinite.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool empty() const { return !(lo <= hi); }
  double width() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
  bool contains(double t) const { return lo <= t && t <= hi; }
  double clamp(double t) const { return std::clamp(t, lo, hi); }
  double distance(double t) const {
    if (t < lo) return lo - t;
    if (t > hi) return t - hi;
    return 0.0;
  }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Axis-aligned closed box in 1 or 2 dimensions. A degenerate box is a point.
class Box {
 public:
  Box() = default;
  explicit Box(std::vector<Interval> axes) : axes_(std::move(axes)) {}
  Box(double lo, double hi) : axes_{Interval{lo, hi}} {}

  static Box point(const Point& p) {
    std::vector<Interval> axes;
    axes.reserve(p.size());
    for (double x : p) axes.push_back({x, x});
    return Box(std::move(axes));
  }

  std::size_t dim() const { return axes_.size(); }
  const Interval& axis(std::size_t i) const { return axes_[i]; }
  Interval& axis(std::size_t i) { return axes_[i]; }
  const std::vector<Interval>& axes() const { return axes_; }

  bool empty() const {
    if (axes_.empty()) return true;
    return std::any_of(axes_.begin(), axes_.end(), [](const Interval& a) {
      return a.empty() || std::isnan(a.lo) || std::isnan(a.hi);
    });
  }

  bool is_point() const {
    return std::all_of(axes_.begin(), axes_.end(), [](const Interval& a) { return a.lo == a.hi; });
  }

  bool contains(const Point& p) const {
    if (p.size() != axes_.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (!axes_[i].contains(p[i])) return false;
    return true;
  }

  /// Closest point of the box to p.
  Point project(const Point& p) const {
    Point q(axes_.size());
    for (std::size_t i = 0; i < axes_.size(); ++i) q[i] = axes_[i].clamp(p[i]);
    return q;
  }

  double distance(const Point& p) const {
    double s = 0.0;
    for (std::size_t i = 0; i < axes_.size(); ++i) {
      const double d = axes_[i].distance(p[i]);
      s += d * d;
    }
    return std::sqrt(s);
  }

  Point lower() const {
    Point q;
    for (const auto& a : axes_) q.push_back(a.lo);
    return q;
  }
  Point upper() const {
    Point q;
    for (const auto& a : axes_) q.push_back(a.hi);
    return q;
  }
  Point center() const {
    Point q;
    for (const auto& a : axes_) q.push_back(a.midpoint());
    return q;
  }

  friend bool operator==(const Box&, const Box&) = default;

 private:
  std::vector<Interval> axes_;
};

using SearchBox = Box;

inline double norm(const Point& p) {
  double s = 0.0;
  for (double x : p) s += x * x;
  return std::sqrt(s);
}

inline double distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

/// Distance from p to a union of boxes; +inf for an empty union.
inline double distance_to_union(const Point& p, const std::vector<Box>& boxes) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : boxes) best = std::min(best, b.distance(p));
  return best;
}

/// Smallest-norm point of a union of boxes, ties broken lexicographically.
inline Point smallest_norm_point(const std::vector<Box>& boxes) {
  Point best;
  double best_norm = std::numeric_limits<double>::infinity();
  for (const auto& b : boxes) {
    Point q = b.project(Point(b.dim(), 0.0));
    const double n = norm(q);
    if (best.empty() || n < best_norm || (n == best_norm && q < best)) {
      best = std::move(q);
      best_norm = n;
    }
  }
  return best;
}

inline void require_nonempty(const SearchBox& box) {
  if (box.empty()) throw EmptySearchBox();
}

}  // namespace bayesmap

#endif  // BAYESMAP_REGION_HPP
