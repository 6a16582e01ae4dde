#ifndef BAYESMAP_ARGMAX_HPP
#define BAYESMAP_ARGMAX_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "bayesmap/region.hpp"

namespace bayesmap {

/// Supremum of an objective over a search box together with its maximizers.
///
/// Maximizers are boxes: points, closed intervals (1D plateaus) or grid cells.
/// Every reported maximizer attains at least sup_value - tol_value. The
/// canonical representative is the smallest-norm point of the maximizer set,
/// ties broken lexicographically.
struct ArgmaxResult {
  double sup_value = 0.0;
  std::vector<Box> maximizers;
  Point canonical;
  double tol_value = 0.0;
  bool sup_infinite = false;

  /// Smallest box containing every maximizer.
  Box hull() const {
    if (maximizers.empty()) return {};
    Box h = maximizers.front();
    for (const auto& m : maximizers)
      for (std::size_t a = 0; a < h.dim(); ++a) {
        h.axis(a).lo = std::min(h.axis(a).lo, m.axis(a).lo);
        h.axis(a).hi = std::max(h.axis(a).hi, m.axis(a).hi);
      }
    return h;
  }

  double distance_to(const Point& p) const { return distance_to_union(p, maximizers); }
};

namespace detail {

struct Candidate {
  Box region;
  double value = 0.0;
  /// Found by scan refinement rather than an exact critical-point solve.
  bool scanned = false;
};

inline double merge_gap(double x) { return 1e-9 * std::max(1.0, std::abs(x)); }

/// Keeps candidates within tol of the best value, merges touching 1D pieces
/// and collapses clusters of nearby points to their best member.
///
/// With a 1D objective, neighbours closer than close_gap are also merged when
/// the objective at the middle of the gap is within tol of the supremum, so
/// scanned points next to an exact maximizer or plateau edge join it.
inline ArgmaxResult assemble_argmax(std::vector<Candidate> cands, double tol,
                                    const std::function<double(double)>& objective = {},
                                    double close_gap = 0.0) {
  ArgmaxResult out;
  out.tol_value = tol;
  if (cands.empty()) return out;
  double sup = -std::numeric_limits<double>::infinity();
  for (const auto& c : cands) sup = std::max(sup, c.value);
  out.sup_value = sup;
  std::erase_if(cands, [&](const Candidate& c) { return !(c.value >= sup - tol); });

  const std::size_t dim = cands.front().region.dim();
  if (dim == 1) {
    std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
      const auto& a = x.region.axis(0);
      const auto& b = y.region.axis(0);
      return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
    });
    std::vector<Candidate> merged;
    for (auto& c : cands) {
      if (!merged.empty()) {
        auto& last = merged.back();
        Interval& li = last.region.axis(0);
        const Interval& ci = c.region.axis(0);
        if (ci.lo <= li.hi + merge_gap(li.hi)) {
          if (last.region.is_point() && c.region.is_point()) {
            if (last.scanned != c.scanned ? last.scanned : c.value > last.value) last = c;
          } else {
            li.hi = std::max(li.hi, ci.hi);
            last.value = std::min(last.value, c.value);
          }
          continue;
        }
      }
      merged.push_back(std::move(c));
    }
    if (objective) {
      // A point bridged to an interval is dropped rather than stretching the
      // interval: the interval came from an exact flat segment.
      std::vector<Candidate> bridged;
      for (auto& c : merged) {
        if (!bridged.empty()) {
          auto& last = bridged.back();
          Interval& li = last.region.axis(0);
          const Interval& ci = c.region.axis(0);
          const bool lp = last.region.is_point(), cp = c.region.is_point();
          if (ci.lo - li.hi <= close_gap && objective(0.5 * (li.hi + ci.lo)) >= sup - tol) {
            if (lp && cp) {
              // Two points on one flat top: an exact solve beats a scanned point.
              if (last.scanned != c.scanned ? last.scanned : c.value > last.value) last = c;
            } else if (lp) {
              last = c;
            } else if (!cp) {
              li.hi = std::max(li.hi, ci.hi);
              last.value = std::min(last.value, c.value);
            }
            continue;
          }
        }
        bridged.push_back(std::move(c));
      }
      merged = std::move(bridged);
    }
    for (auto& c : merged) out.maximizers.push_back(std::move(c.region));
  } else {
    std::vector<Candidate> kept;
    std::sort(cands.begin(), cands.end(),
              [](const Candidate& x, const Candidate& y) { return x.value > y.value; });
    for (auto& c : cands) {
      bool dup = false;
      if (c.region.is_point())
        for (const auto& k : kept)
          if (k.region.is_point() &&
              distance(k.region.lower(), c.region.lower()) <= merge_gap(norm(c.region.lower())))
            dup = true;
      if (!dup) kept.push_back(std::move(c));
    }
    std::sort(kept.begin(), kept.end(), [](const Candidate& x, const Candidate& y) {
      return x.region.lower() < y.region.lower();
    });
    for (auto& c : kept) out.maximizers.push_back(std::move(c.region));
  }
  out.canonical = smallest_norm_point(out.maximizers);
  return out;
}

}  // namespace detail
}  // namespace bayesmap

#endif  // BAYESMAP_ARGMAX_HPP
