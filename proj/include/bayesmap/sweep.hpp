#ifndef BAYESMAP_SWEEP_HPP
#define BAYESMAP_SWEEP_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "bayesmap/estimators.hpp"

namespace bayesmap {

enum class Verdict { converges_to_MAP, limit_point_is_MAP, diverges_from_MAP, inconclusive };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::converges_to_MAP: return "converges_to_MAP";
    case Verdict::limit_point_is_MAP: return "limit_point_is_MAP";
    case Verdict::diverges_from_MAP: return "diverges_from_MAP";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct SweepRow {
  double c = 0.0;
  ArgmaxResult argmax;
  double dist_to_map = 0.0;
  /// Largest distance from any Bayes maximizer to the MAP set.
  double max_dist_to_map = 0.0;
  /// Distance below which this row counts as near the MAP set.
  double threshold = 0.0;
};

struct LimitPoint {
  Point point;
  std::size_t members = 0;
  double dist_to_map = 0.0;
};

struct SweepTrace {
  std::vector<double> ladder;
  std::vector<SweepRow> rows;
  ArgmaxResult map;
  std::vector<LimitPoint> limit_points;
  Verdict verdict = Verdict::inconclusive;
  /// Index of the first row in the tail used for the verdict.
  std::size_t tail_start = 0;
};

/// c_k = base * factor^k for k = 1..count.
inline std::vector<double> geometric_ladder(double base, double factor, int count) {
  if (count < 1) throw InvalidInput("ladder count must be positive");
  std::vector<double> out;
  double c = base;
  for (int k = 1; k <= count; ++k) {
    c *= factor;
    out.push_back(c);
  }
  return out;
}

/// The ladder c = 2 * 4^nu for nu = 1..nu_max.
inline std::vector<double> default_ladder(int nu_max = 6) { return geometric_ladder(2.0, 4.0, nu_max); }

/// Closeness threshold for a ladder rung: the diameter of the loss ball plus 1e-6.
inline double near_map_threshold(double c) { return 2.0 / c + 1e-6; }

namespace detail {

/// Largest distance from a 1D interval (or 2D box) to a union of boxes,
/// sampled at the corners. Exact when the union is a single convex box.
inline double far_distance(const Box& b, const std::vector<Box>& targets) {
  double worst = 0.0;
  const std::size_t n = b.dim();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Point p(n);
    for (std::size_t a = 0; a < n; ++a) p[a] = (mask >> a) & 1 ? b.axis(a).hi : b.axis(a).lo;
    worst = std::max(worst, distance_to_union(p, targets));
  }
  return worst;
}

inline double diameter(const std::vector<Box>& boxes) {
  if (boxes.empty()) return 0.0;
  Box h = boxes.front();
  for (const auto& m : boxes)
    for (std::size_t a = 0; a < h.dim(); ++a) {
      h.axis(a).lo = std::min(h.axis(a).lo, m.axis(a).lo);
      h.axis(a).hi = std::max(h.axis(a).hi, m.axis(a).hi);
    }
  return distance(h.lower(), h.upper());
}

/// Single-linkage clusters of points, each represented by its last member.
inline std::vector<LimitPoint> cluster_points(const std::vector<Point>& pts, double link) {
  const std::size_t n = pts.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (distance(pts[i], pts[j]) <= link) parent[find(j)] = find(i);
  std::vector<LimitPoint> out;
  std::vector<std::size_t> root_of_cluster;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    auto it = std::find(root_of_cluster.begin(), root_of_cluster.end(), r);
    if (it == root_of_cluster.end()) {
      root_of_cluster.push_back(r);
      out.push_back({pts[i], 1, 0.0});
    } else {
      auto& lp = out[static_cast<std::size_t>(it - root_of_cluster.begin())];
      lp.point = pts[i];
      ++lp.members;
    }
  }
  return out;
}

}  // namespace detail

/// Bayes estimates along an increasing ladder of c, compared with the MAP set.
///
/// The verdict looks at the tail of the ladder (the last half, at least two
/// rungs). All tail canonicals within 2/c + 1e-6 of the MAP set, with every
/// maximizer near it and a single-point MAP set, give converges_to_MAP; all
/// canonicals near but a set-valued MAP or stray maximizers give
/// limit_point_is_MAP; no canonical near gives diverges_from_MAP. A single
/// rung is inconclusive. The verdict speaks only for the ladder used.
inline SweepTrace sweep(const Density& d, const std::vector<double>& ladder, const SearchBox& box,
                        const MaximizeOptions& opt = {}) {
  if (ladder.empty()) throw InvalidInput("ladder must be nonempty");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] > 0.0) || !std::isfinite(ladder[i])) throw InvalidInput("ladder values must be positive");
    if (i > 0 && !(ladder[i] > ladder[i - 1])) throw InvalidInput("ladder must be strictly increasing");
  }
  SweepTrace t;
  t.ladder = ladder;
  t.map = map_estimate(d, box, opt);
  for (double c : ladder) {
    SweepRow row;
    row.c = c;
    row.argmax = bayes_estimate(d, LossSpec(c), box, opt);
    row.dist_to_map = t.map.distance_to(row.argmax.canonical);
    for (const auto& m : row.argmax.maximizers)
      row.max_dist_to_map = std::max(row.max_dist_to_map, detail::far_distance(m, t.map.maximizers));
    row.threshold = near_map_threshold(c);
    t.rows.push_back(std::move(row));
  }

  const std::size_t n = t.rows.size();
  const std::size_t tail = std::max<std::size_t>(2, (n + 1) / 2);
  t.tail_start = n > tail ? n - tail : 0;
  std::vector<Point> tail_points;
  for (std::size_t i = t.tail_start; i < n; ++i) tail_points.push_back(t.rows[i].argmax.canonical);
  const double link = std::max(10.0 * t.rows.back().argmax.tol_value, t.rows.back().threshold);
  t.limit_points = detail::cluster_points(tail_points, link);
  for (auto& lp : t.limit_points) lp.dist_to_map = t.map.distance_to(lp.point);

  if (n < 2) return t;
  std::size_t near = 0;
  bool all_maximizers_near = true;
  for (std::size_t i = t.tail_start; i < n; ++i) {
    const auto& r = t.rows[i];
    if (r.dist_to_map <= r.threshold) ++near;
    if (r.max_dist_to_map > r.threshold) all_maximizers_near = false;
  }
  const std::size_t tail_rows = n - t.tail_start;
  const bool map_singleton = !t.map.sup_infinite && detail::diameter(t.map.maximizers) <= 1e-6;
  if (near == tail_rows)
    t.verdict = (all_maximizers_near && map_singleton) ? Verdict::converges_to_MAP : Verdict::limit_point_is_MAP;
  else if (near == 0)
    t.verdict = Verdict::diverges_from_MAP;
  else
    t.verdict = Verdict::inconclusive;
  return t;
}

}  // namespace bayesmap

#endif  // BAYESMAP_SWEEP_HPP
