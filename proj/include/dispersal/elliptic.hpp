#pragma once

#include <vector>

#include "dispersal/config.hpp"
#include "dispersal/field.hpp"
#include "dispersal/grid.hpp"

namespace dispersal {

/// Principal eigenpair of -D Lap N = N (K - rho) + N H.
///
/// The eigenfunction is strictly positive on free nodes and normalized so
/// that the trapezoid integral of N^2 is one. eigenvalue is H(theta, rho).
struct EigenPair {
    DensityProfile eigenfunction;
    double eigenvalue = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

/// H(theta_j, rho) over the trait grid.
struct HamiltonianCurve {
    std::vector<double> values;
    int argmin_index = 0;
    /// Filled only when requested from hamiltonian_curve.
    std::vector<DensityProfile> eigenfunctions;

    double min() const { return values[argmin_index]; }
};

/// Principal eigenpair of -eps^2 W'' = W (-H + lambda) on the periodic trait grid.
struct TraitEigenPair {
    std::vector<double> eigenfunction;  // max W = 1
    double eigenvalue = 0.0;            // lambda_eps
    double residual = 0.0;
};

struct SlopeIdentity {
    double lhs = 0.0;  // D'(theta) * integral |grad N|^2
    double rhs = 0.0;  // centered difference of H over the trait grid
    double dispersal_slope = 0.0;
    double gradient_energy = 0.0;
};

/// Positive solution of -D Lap N = N (K - N) with the grid's boundary
/// condition. Damped Newton from N = K with pseudo-time fallback.
DensityProfile solve_fisher_kpp(double d_value, const DensityProfile& capacity,
                                const SpatialGrid& grid, const SolverSettings& settings = {});

/// Max-norm residual of -D Lap N - N (K - N) on the free nodes.
double fisher_kpp_residual(double d_value, const DensityProfile& n, const DensityProfile& capacity,
                           const SpatialGrid& grid);

/// Eigenpair at an explicit diffusivity. warm, when non-empty, seeds the iteration.
EigenPair principal_eigenpair_at(double d_value, const DensityProfile& rho,
                                 const DensityProfile& capacity, const SpatialGrid& grid,
                                 const SolverSettings& settings = {},
                                 const DensityProfile* warm = nullptr);

EigenPair principal_eigenpair(int theta_index, const DensityProfile& rho,
                              const std::vector<double>& dispersal_samples,
                              const DensityProfile& capacity, const SpatialGrid& grid,
                              const SolverSettings& settings = {});

/// D(theta) integral |grad N|^2 - integral N^2 (K - rho), with discrete
/// integrals that make it equal to the eigenvalue exactly at convergence.
double rayleigh_quotient(const DensityProfile& n, double d_value, const DensityProfile& rho,
                         const DensityProfile& capacity, const SpatialGrid& grid);

/// Sweeps principal_eigenpair over every trait node. Each node starts cold,
/// so the result does not depend on solver.threads. Errors carry the failing node index.
HamiltonianCurve hamiltonian_curve(const DensityProfile& rho, const ModelConfig& config,
                                   bool keep_eigenfunctions = false);

/// The two sides of D'(theta) int |grad N|^2 = H_theta, computed independently.
SlopeIdentity hamiltonian_slope_identity(int theta_index, const DensityProfile& rho,
                                         const ModelConfig& config);

/// Interval that every H(theta, rho) must lie in: [-max K, mean of rho over x].
struct HamiltonianBounds {
    double lower = 0.0;
    double upper = 0.0;

    bool contains(double h, double slack = 1e-6) const {
        return h >= lower - slack && h <= upper + slack;
    }
};

HamiltonianBounds hamiltonian_bounds(const DensityProfile& rho, const DensityProfile& capacity,
                                     const SpatialGrid& grid);

/// Principal trait eigenpair. Periodic trait grids only.
TraitEigenPair trait_eigenpair(const HamiltonianCurve& h, double epsilon, const TraitGrid& grid,
                               const SolverSettings& settings = {});

}  // namespace dispersal
