#ifndef BAYESMAP_ANY_DENSITY_HPP
#define BAYESMAP_ANY_DENSITY_HPP

#include <optional>
#include <variant>

#include "bayesmap/density.hpp"
#include "bayesmap/grid_density.hpp"
#include "bayesmap/region.hpp"

namespace bayesmap {

/// Either an exact piecewise density on the line or a 1D/2D histogram.
using Density = std::variant<UscDensity1D, GridDensity>;

inline std::size_t dimension(const Density& d) {
  return std::visit([](const auto& x) -> std::size_t {
    if constexpr (std::is_same_v<std::decay_t<decltype(x)>, UscDensity1D>) return 1;
    else return x.dim();
  }, d);
}

inline bool is_grid(const Density& d) { return std::holds_alternative<GridDensity>(d); }

inline double evaluate(const Density& d, const Point& p) {
  if (const auto* u = std::get_if<UscDensity1D>(&d)) return u->evaluate(p.at(0));
  return std::get<GridDensity>(d).evaluate(p);
}

/// Exact piecewise form of a 1D density (a 1D grid becomes constant pieces).
inline std::optional<UscDensity1D> as_piecewise_1d(const Density& d) {
  if (const auto* u = std::get_if<UscDensity1D>(&d)) return *u;
  const auto& g = std::get<GridDensity>(d);
  if (g.dim() == 1) return g.to_usc_1d();
  return std::nullopt;
}

/// Smallest box containing the support.
inline Box support_box(const Density& d) {
  if (const auto* u = std::get_if<UscDensity1D>(&d)) return Box(u->support_lo(), u->support_hi());
  return std::get<GridDensity>(d).extent();
}

}  // namespace bayesmap

#endif  // BAYESMAP_ANY_DENSITY_HPP
