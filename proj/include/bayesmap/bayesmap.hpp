// Umbrella header for the numerical core. io.hpp and config.hpp need
// nlohmann/json and are included separately.
#ifndef BAYESMAP_BAYESMAP_HPP
#define BAYESMAP_BAYESMAP_HPP

#include "bayesmap/any_density.hpp"
#include "bayesmap/argmax.hpp"
#include "bayesmap/conditions.hpp"
#include "bayesmap/counterexample.hpp"
#include "bayesmap/density.hpp"
#include "bayesmap/errors.hpp"
#include "bayesmap/estimators.hpp"
#include "bayesmap/geometry.hpp"
#include "bayesmap/grid_density.hpp"
#include "bayesmap/hypo.hpp"
#include "bayesmap/mollifier.hpp"
#include "bayesmap/posterior.hpp"
#include "bayesmap/region.hpp"
#include "bayesmap/sweep.hpp"

#endif  // BAYESMAP_BAYESMAP_HPP
