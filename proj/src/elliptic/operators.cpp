#include "dispersal/operators.hpp"

#include <cmath>

namespace dispersal {

int free_begin(const SpatialGrid& grid) noexcept {
    return grid.bc() == SpatialBc::neumann ? 0 : 1;
}

int free_count(const SpatialGrid& grid) noexcept {
    return grid.bc() == SpatialBc::neumann ? grid.size() : grid.size() - 2;
}

TridiagonalRows negative_laplacian(const SpatialGrid& grid) {
    const int m = free_count(grid);
    const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    TridiagonalRows rows{std::vector<double>(m, -inv_h2), std::vector<double>(m, 2.0 * inv_h2),
                         std::vector<double>(m, -inv_h2)};
    rows.lower[0] = 0.0;
    rows.upper[m - 1] = 0.0;
    if (grid.bc() == SpatialBc::neumann) {
        rows.upper[0] = -2.0 * inv_h2;
        rows.lower[m - 1] = -2.0 * inv_h2;
    }
    return rows;
}

SymmetricTridiagonal symmetrize(const TridiagonalRows& a) {
    const std::size_t m = a.diag.size();
    SymmetricTridiagonal s;
    s.diag = a.diag;
    s.off.resize(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double prod = a.upper[i] * a.lower[i + 1];
        const double mag = std::sqrt(std::abs(prod));
        s.off[i] = a.upper[i] < 0.0 ? -mag : mag;
    }
    return s;
}

std::vector<double> trait_laplacian(std::span<const double> v, const TraitGrid& grid) {
    const int n = grid.size();
    const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    std::vector<double> out(n, 0.0);
    for (int j = 0; j < n; ++j) {
        if (!grid.is_free(j)) continue;
        const int lo = grid.neighbor(j, -1);
        const int hi = grid.neighbor(j, 1);
        const double vl = grid.is_free(lo) ? v[lo] : 0.0;
        const double vh = grid.is_free(hi) ? v[hi] : 0.0;
        out[j] = (2.0 * v[j] - vl - vh) * inv_h2;
    }
    return out;
}

}  // namespace dispersal
