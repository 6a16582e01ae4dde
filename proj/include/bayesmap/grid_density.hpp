#ifndef BAYESMAP_GRID_DENSITY_HPP
#define BAYESMAP_GRID_DENSITY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "bayesmap/density.hpp"
#include "bayesmap/errors.hpp"
#include "bayesmap/region.hpp"

namespace bayesmap {

/// Histogram density on a regular 1D or 2D grid with cell-constant values.
///
/// Values are rescaled at construction so the Riemann mass is 1. A point on a
/// cell boundary takes the maximum over the adjacent cells (cells outside the
/// grid count as 0), which makes the histogram upper semicontinuous. A
/// coordinate within 1e-9 cell widths of a grid line is treated as lying on it.
///
/// 2D values are stored row-major with the first axis outermost:
/// values[i * shape[1] + j] is the cell [x_i, x_{i+1}) x [y_j, y_{j+1}).
class GridDensity {
 public:
  GridDensity() = default;

  GridDensity(std::size_t dim, std::array<double, 2> origin, std::array<double, 2> spacing,
              std::array<std::size_t, 2> shape, std::vector<double> values)
      : dim_(dim), origin_(origin), spacing_(spacing), shape_(shape), values_(std::move(values)) {
    if (dim_ != 1 && dim_ != 2) throw InvalidDensity("grid dimension must be 1 or 2");
    if (dim_ == 1) shape_[1] = 1;
    for (std::size_t a = 0; a < dim_; ++a) {
      if (!(spacing_[a] > 0.0) || !std::isfinite(spacing_[a]))
        throw InvalidDensity("grid spacing must be positive");
      if (!std::isfinite(origin_[a])) throw InvalidDensity("grid origin must be finite");
      if (shape_[a] == 0) throw InvalidDensity("grid must have at least one cell per axis");
    }
    if (values_.size() != shape_[0] * shape_[1])
      throw InvalidDensity("grid values do not match the grid shape");
    double sum = 0.0;
    for (double v : values_) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidDensity("grid values must be finite and >= 0");
      sum += v;
    }
    raw_mass_ = sum * cell_volume();
    if (!(raw_mass_ > 0.0) || !std::isfinite(raw_mass_))
      throw InvalidDensity("grid density has no positive mass");
    for (double& v : values_) v /= raw_mass_;
  }

  static GridDensity one_d(double origin, double spacing, std::vector<double> values) {
    const std::size_t n = values.size();
    return GridDensity(1, {origin, 0.0}, {spacing, 1.0}, {n, 1}, std::move(values));
  }

  static GridDensity two_d(std::array<double, 2> origin, std::array<double, 2> spacing,
                           std::size_t nx, std::size_t ny, std::vector<double> values) {
    return GridDensity(2, origin, spacing, {nx, ny}, std::move(values));
  }

  std::size_t dim() const { return dim_; }
  double origin(std::size_t axis) const { return origin_[axis]; }
  double spacing(std::size_t axis) const { return spacing_[axis]; }
  std::size_t shape(std::size_t axis) const { return shape_[axis]; }
  std::size_t cell_count() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  /// Mass of the values as given, before normalization.
  double raw_mass() const { return raw_mass_; }

  double cell_volume() const {
    return dim_ == 1 ? spacing_[0] : spacing_[0] * spacing_[1];
  }

  double riemann_mass() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s * cell_volume();
  }

  double value(std::size_t i, std::size_t j = 0) const { return values_[i * shape_[1] + j]; }

  double grid_line(std::size_t axis, std::size_t k) const {
    return origin_[axis] + static_cast<double>(k) * spacing_[axis];
  }

  Box cell_box(std::size_t i, std::size_t j = 0) const {
    std::vector<Interval> axes{{grid_line(0, i), grid_line(0, i + 1)}};
    if (dim_ == 2) axes.push_back({grid_line(1, j), grid_line(1, j + 1)});
    return Box(std::move(axes));
  }

  Box extent() const {
    std::vector<Interval> axes{{grid_line(0, 0), grid_line(0, shape_[0])}};
    if (dim_ == 2) axes.push_back({grid_line(1, 0), grid_line(1, shape_[1])});
    return Box(std::move(axes));
  }

  /// Usc value at a point of matching dimension.
  double evaluate(const Point& p) const {
    if (p.size() != dim_) throw InvalidInput("point dimension does not match grid");
    std::array<std::vector<long>, 2> cand;
    for (std::size_t a = 0; a < dim_; ++a) cand[a] = candidate_cells(a, p[a]);
    if (dim_ == 1) cand[1] = {0};
    double best = 0.0;
    for (long i : cand[0]) {
      if (i < 0 || i >= static_cast<long>(shape_[0])) continue;
      for (long j : cand[1]) {
        if (j < 0 || j >= static_cast<long>(shape_[1])) continue;
        best = std::max(best, value(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
      }
    }
    return best;
  }
  double evaluate(double t) const { return evaluate(Point{t}); }

  /// Exact piecewise-constant representation of a 1D grid.
  UscDensity1D to_usc_1d() const {
    if (dim_ != 1) throw InvalidInput("only 1D grids convert to a piecewise density");
    std::vector<Piece> pieces;
    pieces.reserve(shape_[0]);
    for (std::size_t i = 0; i < shape_[0]; ++i)
      pieces.push_back(Piece::constant(grid_line(0, i), grid_line(0, i + 1), values_[i]));
    DensityOptions o;
    o.mass_tolerance = kGridMassTolerance;
    return UscDensity1D(std::move(pieces), std::move(o));
  }

 private:
  std::vector<long> candidate_cells(std::size_t axis, double x) const {
    const double u = (x - origin_[axis]) / spacing_[axis];
    if (!(u > -2.0 && u < static_cast<double>(shape_[axis]) + 2.0)) return {-1};
    const double r = std::round(u);
    if (std::abs(u - r) <= 1e-9) {
      const long k = static_cast<long>(r);
      return {k - 1, k};
    }
    return {static_cast<long>(std::floor(u))};
  }

  std::size_t dim_ = 1;
  std::array<double, 2> origin_{0.0, 0.0};
  std::array<double, 2> spacing_{1.0, 1.0};
  std::array<std::size_t, 2> shape_{0, 1};
  std::vector<double> values_;
  double raw_mass_ = 0.0;
};

}  // namespace bayesmap

#endif  // BAYESMAP_GRID_DENSITY_HPP
