#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "dispersal/elliptic.hpp"
#include "dispersal/errors.hpp"
#include "dispersal/operators.hpp"
#include "dispersal/quadrature.hpp"
#include "dispersal/tridiagonal.hpp"

namespace dispersal {

namespace {

bool single_signed_positive(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
}

}  // namespace

EigenPair principal_eigenpair_at(double d_value, const DensityProfile& rho,
                                 const DensityProfile& capacity, const SpatialGrid& grid,
                                 const SolverSettings& settings, const DensityProfile* warm) {
    if (static_cast<int>(rho.size()) != grid.size() || static_cast<int>(capacity.size()) != grid.size())
        throw std::invalid_argument("eigenpair: profile sizes do not match the grid");
    if (!(d_value >= 0.0)) throw std::invalid_argument("eigenpair: D must be nonnegative");

    const int b = free_begin(grid);
    const int m = free_count(grid);
    auto rows = negative_laplacian(grid);
    for (int i = 0; i < m; ++i) {
        rows.lower[i] *= d_value;
        rows.upper[i] *= d_value;
        rows.diag[i] = d_value * rows.diag[i] - (capacity[b + i] - rho[b + i]);
    }
    // Gershgorin on the unsymmetrized rows: the Laplacian rows sum to zero,
    // so this is min (rho - K), far tighter than the bound on the symmetric form.
    double lower_bound = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i)
        lower_bound = std::min(lower_bound, rows.diag[i] - std::abs(rows.lower[i]) - std::abs(rows.upper[i]));
    // With D = 0 the off-diagonals vanish and symmetrize keeps them at zero.
    const auto sym = symmetrize(rows);

    std::vector<double> sqrt_w(m), inv_sqrt_w(m);
    for (int i = 0; i < m; ++i) {
        sqrt_w[i] = std::sqrt(grid.weight(b + i));
        inv_sqrt_w[i] = 1.0 / sqrt_w[i];
    }

    std::vector<double> start(m, 1.0);
    if (warm != nullptr && static_cast<int>(warm->size()) == grid.size()) {
        for (int i = 0; i < m; ++i) start[i] = sqrt_w[i] * std::max((*warm)[b + i], 1e-300);
    } else {
        for (int i = 0; i < m; ++i) start[i] = sqrt_w[i];
    }

    auto result = smallest_eigenpair(sym, start, settings.eigen_tol, settings.eigen_max_iter,
                                     inv_sqrt_w, 1e-3, lower_bound);
    if (!single_signed_positive(result.vector)) {
        // Rayleigh shifting drifted to a higher mode: redo with the fixed shift only.
        result = smallest_eigenpair(sym, std::vector<double>(sqrt_w), settings.eigen_tol,
                                    settings.eigen_max_iter, inv_sqrt_w, 0.0, lower_bound);
        if (!single_signed_positive(result.vector))
            throw SolverError("eigenpair: converged eigenfunction is not positive", result.residual);
    }

    EigenPair out;
    out.eigenfunction = DensityProfile(static_cast<std::size_t>(grid.size()), 0.0);
    for (int i = 0; i < m; ++i) out.eigenfunction[b + i] = result.vector[i] * inv_sqrt_w[i];
    out.eigenvalue = result.value;
    out.residual = result.residual;
    out.iterations = result.iterations;
    return out;
}

EigenPair principal_eigenpair(int theta_index, const DensityProfile& rho,
                              const std::vector<double>& dispersal_samples,
                              const DensityProfile& capacity, const SpatialGrid& grid,
                              const SolverSettings& settings) {
    if (theta_index < 0 || theta_index >= static_cast<int>(dispersal_samples.size()))
        throw std::out_of_range("eigenpair: trait index out of range");
    return principal_eigenpair_at(dispersal_samples[theta_index], rho, capacity, grid, settings);
}

double rayleigh_quotient(const DensityProfile& n, double d_value, const DensityProfile& rho,
                         const DensityProfile& capacity, const SpatialGrid& grid) {
    std::vector<double> potential(grid.size());
    for (int i = 0; i < grid.size(); ++i) potential[i] = n[i] * n[i] * (capacity[i] - rho[i]);
    return d_value * gradient_energy(n.values, grid) - integrate_space(potential, grid);
}

TraitEigenPair trait_eigenpair(const HamiltonianCurve& h, double epsilon, const TraitGrid& grid,
                               const SolverSettings& settings) {
    if (!grid.periodic()) throw std::invalid_argument("trait eigenpair: periodic trait grid required");
    if (static_cast<int>(h.values.size()) != grid.size())
        throw std::invalid_argument("trait eigenpair: curve does not match the trait grid");
    if (!(epsilon > 0.0)) throw std::invalid_argument("trait eigenpair: epsilon must be positive");
    for (double v : h.values)
        if (!std::isfinite(v)) throw std::invalid_argument("trait eigenpair: H must be finite");

    const int n = grid.size();
    const double c = epsilon * epsilon / (grid.spacing() * grid.spacing());
    SymmetricTridiagonal a;
    a.diag.resize(n);
    for (int j = 0; j < n; ++j) a.diag[j] = 2.0 * c + h.values[j];
    a.off.assign(n - 1, -c);
    a.corner = -c;
    a.cyclic = true;

    // Start from a bump at the minimum of H; the principal mode lives there.
    std::vector<double> start(n);
    const double theta_min = grid.node(h.argmin_index);
    for (int j = 0; j < n; ++j) {
        const double d = circle_distance(grid.node(j), theta_min);
        start[j] = std::exp(-d * d / 0.02) + 1e-3;
    }
    auto result = smallest_eigenpair(a, start, settings.eigen_tol, settings.eigen_max_iter);
    if (!single_signed_positive(result.vector)) {
        result = smallest_eigenpair(a, std::vector<double>(n, 1.0), settings.eigen_tol,
                                    settings.eigen_max_iter, {}, 0.0);
        if (!single_signed_positive(result.vector))
            throw SolverError("trait eigenpair: eigenfunction is not positive", result.residual);
    }

    TraitEigenPair out;
    const double top = *std::max_element(result.vector.begin(), result.vector.end());
    out.eigenfunction.resize(n);
    for (int j = 0; j < n; ++j) out.eigenfunction[j] = result.vector[j] / top;
    out.eigenvalue = result.value;
    out.residual = result.residual / top;
    return out;
}

}  // namespace dispersal
