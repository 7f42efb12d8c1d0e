#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "dispersal/elliptic.hpp"
#include "dispersal/errors.hpp"
#include "dispersal/parallel.hpp"
#include "dispersal/quadrature.hpp"

namespace dispersal {

HamiltonianCurve hamiltonian_curve(const DensityProfile& rho, const ModelConfig& config,
                                   bool keep_eigenfunctions) {
    const auto d = config.dispersal_samples();
    const DensityProfile k(config.capacity_samples());
    const int n = config.trait.size();

    HamiltonianCurve curve;
    curve.values.assign(n, 0.0);
    std::vector<DensityProfile> functions(keep_eigenfunctions ? n : 0);

    parallel_for(n, config.solver.threads, [&](int j) {
        try {
            auto pair = principal_eigenpair_at(d[j], rho, k, config.spatial, config.solver);
            curve.values[j] = pair.eigenvalue;
            if (keep_eigenfunctions) functions[j] = std::move(pair.eigenfunction);
        } catch (const SolverError& e) {
            throw SolverError(fmt::format("trait node {}: {}", j, e.what()), e.residual());
        }
    });

    curve.argmin_index = static_cast<int>(
        std::min_element(curve.values.begin(), curve.values.end()) - curve.values.begin());
    curve.eigenfunctions = std::move(functions);
    return curve;
}

SlopeIdentity hamiltonian_slope_identity(int theta_index, const DensityProfile& rho,
                                         const ModelConfig& config) {
    const auto& grid = config.trait;
    const int lo = grid.neighbor(theta_index, -1);
    const int hi = grid.neighbor(theta_index, 1);
    if (lo < 0 || hi < 0)
        throw std::invalid_argument("slope identity: trait node must have two neighbors");

    const auto d = config.dispersal_samples();
    if (config.dispersal.kind() == TraitFunction::Kind::samples) {
        const bool increasing = d[lo] < d[theta_index] && d[theta_index] < d[hi];
        const bool decreasing = d[lo] > d[theta_index] && d[theta_index] > d[hi];
        if (!increasing && !decreasing)
            throw std::invalid_argument(
                "slope identity: sampled D needs a node inside a strictly monotone segment");
    }

    const DensityProfile k(config.capacity_samples());
    const auto center = principal_eigenpair_at(d[theta_index], rho, k, config.spatial, config.solver);
    const auto left = principal_eigenpair_at(d[lo], rho, k, config.spatial, config.solver,
                                             &center.eigenfunction);
    const auto right = principal_eigenpair_at(d[hi], rho, k, config.spatial, config.solver,
                                              &center.eigenfunction);

    SlopeIdentity out;
    out.dispersal_slope = config.dispersal_slope_at(grid.node(theta_index));
    out.gradient_energy = gradient_energy(center.eigenfunction.values, config.spatial);
    out.lhs = out.dispersal_slope * out.gradient_energy;
    out.rhs = (right.eigenvalue - left.eigenvalue) / (2.0 * grid.spacing());
    return out;
}

HamiltonianBounds hamiltonian_bounds(const DensityProfile& rho, const DensityProfile& capacity,
                                     const SpatialGrid& grid) {
    return {-capacity.max(), integrate_space(rho.values, grid) / grid.length()};
}

}  // namespace dispersal
