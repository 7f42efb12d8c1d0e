#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "dispersal/errors.hpp"
#include "dispersal/hj.hpp"

namespace dispersal {

PotentialFunction solve_constrained_hj(const HamiltonianCurve& h, const TraitGrid& grid,
                                       double tol_ess) {
    const int n = grid.size();
    if (static_cast<int>(h.values.size()) != n)
        throw std::invalid_argument("constrained HJ: curve does not match the trait grid");

    const int m = static_cast<int>(std::min_element(h.values.begin(), h.values.end()) -
                                   h.values.begin());
    const double min_h = h.values[m];
    if (!(std::abs(min_h) < tol_ess))
        throw EssViolation(fmt::format("ESS constraint violated: min H = {:.6g}", min_h), min_h);

    // Converged eigenvalues dip a hair below zero; clip before the root.
    std::vector<double> root(n);
    for (int j = 0; j < n; ++j) root[j] = std::sqrt(std::max(h.values[j] - min_h, 0.0));

    const double step = grid.spacing();
    PotentialFunction u;
    u.values.assign(n, 0.0);
    u.argmax_index = m;

    if (grid.periodic()) {
        std::vector<double> forward(n, 0.0);
        std::vector<double> backward(n, 0.0);
        for (int k = 1; k < n; ++k) {
            const int j = (m + k) % n;
            const int prev = (m + k - 1) % n;
            forward[j] = forward[prev] + 0.5 * step * (root[prev] + root[j]);
        }
        for (int k = 1; k < n; ++k) {
            const int j = ((m - k) % n + n) % n;
            const int prev = ((m - k + 1) % n + n) % n;
            backward[j] = backward[prev] + 0.5 * step * (root[prev] + root[j]);
        }
        for (int j = 0; j < n; ++j) u.values[j] = -std::min(forward[j], backward[j]);
    } else {
        for (int j = m + 1; j < n; ++j)
            u.values[j] = u.values[j - 1] - 0.5 * step * (root[j - 1] + root[j]);
        for (int j = m - 1; j >= 0; --j)
            u.values[j] = u.values[j + 1] - 0.5 * step * (root[j + 1] + root[j]);
    }
    u.values[m] = 0.0;
    return u;
}

double trait_slope(const std::vector<double>& values, const TraitGrid& grid, int j) {
    const double step = grid.spacing();
    const int lo = grid.neighbor(j, -1);
    const int hi = grid.neighbor(j, 1);
    if (lo >= 0 && hi >= 0) return (values[hi] - values[lo]) / (2.0 * step);
    if (hi >= 0) return (values[hi] - values[j]) / step;
    return (values[j] - values[lo]) / step;
}

EssReport check_ess(const HamiltonianCurve& h, const TraitGrid& grid, int declared_index,
                    double tolerance) {
    EssReport r;
    r.tolerance = tolerance;
    r.argmin_index = static_cast<int>(std::min_element(h.values.begin(), h.values.end()) -
                                      h.values.begin());
    r.min_value = h.values[r.argmin_index];
    r.declared_index = declared_index;
    r.value_at_declared = std::abs(h.values[declared_index]);
    r.slope_at_declared = std::abs(trait_slope(h.values, grid, declared_index));
    const double gap = grid.distance(grid.node(r.argmin_index), grid.node(declared_index));
    r.argmin_matches = gap <= grid.spacing() * (1.0 + 1e-9);
    return r;
}

}  // namespace dispersal
