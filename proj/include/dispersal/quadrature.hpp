#pragma once

#include <span>
#include <vector>

#include "dispersal/field.hpp"
#include "dispersal/grid.hpp"

namespace dispersal {

/// rho(x) = integral of n over theta. Rectangle rule on a periodic trait
/// grid, trapezoid rule on a dirichlet one.
DensityProfile integrate_trait(const TraitSpaceDensity& n, const TraitGrid& trait);

/// Trait marginal: integral of n over x at each trait node (trapezoid in x).
std::vector<double> trait_marginal(const TraitSpaceDensity& n, const SpatialGrid& spatial);

/// Trapezoid rule over the spatial grid.
double integrate_space(std::span<const double> f, const SpatialGrid& grid);

/// Quadrature over the trait grid with the grid's weights.
double integrate_trait_values(std::span<const double> f, const TraitGrid& grid);

/// Discrete Dirichlet energy sum_i (f_{i+1} - f_i)^2 / h. Pairs with the
/// trapezoid weights so that <f, -Lap f> equals this value exactly.
double gradient_energy(std::span<const double> f, const SpatialGrid& grid);

struct TraitMoments {
    double mass = 0.0;
    double mean_trait = 0.0;
    double trait_stddev = 0.0;
    /// Length of the first trigonometric moment (periodic only). Near zero
    /// means the circular mean is not meaningful.
    double resultant_length = 1.0;
    bool mean_reliable = true;
};

/// Mass, mean and spread of the trait marginal. Periodic grids use the
/// circular mean and the circular standard deviation sqrt(-2 ln R) / (2 pi),
/// capped at its uniform-distribution value when R vanishes.
/// Throws std::domain_error on zero mass.
TraitMoments trait_moments(const TraitSpaceDensity& n, const SpatialGrid& spatial,
                           const TraitGrid& trait);

}  // namespace dispersal
