#pragma once

#include <span>
#include <vector>

#include "dispersal/grid.hpp"
#include "dispersal/tridiagonal.hpp"

namespace dispersal {

/// Rows of a tridiagonal matrix in the (lower, diag, upper) layout of solve_tridiagonal.
struct TridiagonalRows {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;
};

/// -Laplacian on the free nodes of the grid. Neumann rows use the mirrored
/// ghost node (first row 2/h^2, -2/h^2); dirichlet keeps the interior only.
TridiagonalRows negative_laplacian(const SpatialGrid& grid);

/// Indices of the free spatial nodes, in order.
int free_begin(const SpatialGrid& grid) noexcept;
int free_count(const SpatialGrid& grid) noexcept;

/// Symmetrize rows A (similar to a symmetric matrix through the trapezoid
/// weights) into S = W^{1/2} A W^{-1/2}. Off-diagonals of A must share sign.
SymmetricTridiagonal symmetrize(const TridiagonalRows& a);

/// -Laplacian on the periodic or dirichlet trait grid applied to v (pinned ends read as zero).
std::vector<double> trait_laplacian(std::span<const double> v, const TraitGrid& grid);

}  // namespace dispersal
