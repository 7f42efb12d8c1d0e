#pragma once

#include <vector>

namespace dispersal {

enum class SpatialBc { neumann, dirichlet };
enum class TraitBc { periodic, dirichlet };

/// Uniform grid on (0, length) including both endpoints.
///
/// Under neumann the boundary rows use a mirrored ghost node, so the
/// trapezoid weights make the discrete Laplacian symmetric. Under dirichlet
/// the two endpoint values are pinned to zero.
class SpatialGrid {
public:
    SpatialGrid() = default;
    SpatialGrid(double length, int n_x, SpatialBc bc);

    double length() const noexcept { return length_; }
    int size() const noexcept { return n_x_; }
    SpatialBc bc() const noexcept { return bc_; }
    double spacing() const noexcept { return length_ / (n_x_ - 1); }
    double node(int i) const noexcept { return i * spacing(); }
    std::vector<double> nodes() const;

    /// Trapezoid quadrature weight of node i.
    double weight(int i) const noexcept;

    /// True when node i carries an unknown (false for pinned dirichlet ends).
    bool is_free(int i) const noexcept {
        return bc_ == SpatialBc::neumann || (i > 0 && i < n_x_ - 1);
    }

private:
    double length_ = 1.0;
    int n_x_ = 3;
    SpatialBc bc_ = SpatialBc::neumann;
};

/// Uniform grid on the unit trait interval.
///
/// periodic: n nodes at j/n, the node at 1 is identified with 0.
/// dirichlet: n nodes at j/(n-1), endpoint values pinned to zero.
class TraitGrid {
public:
    TraitGrid() = default;
    TraitGrid(int n_theta, TraitBc bc);

    int size() const noexcept { return n_; }
    TraitBc bc() const noexcept { return bc_; }
    bool periodic() const noexcept { return bc_ == TraitBc::periodic; }
    double spacing() const noexcept {
        return periodic() ? 1.0 / n_ : 1.0 / (n_ - 1);
    }
    double node(int j) const noexcept { return j * spacing(); }
    std::vector<double> nodes() const;

    /// Rectangle weight (periodic) or trapezoid weight (dirichlet).
    double weight(int j) const noexcept;

    bool is_free(int j) const noexcept {
        return periodic() || (j > 0 && j < n_ - 1);
    }

    /// Index of the node closest to theta (circular distance when periodic).
    int nearest(double theta) const noexcept;

    /// Neighbor index with periodic wrap; -1 off the end of a dirichlet grid.
    int neighbor(int j, int offset) const noexcept;

    /// Distance between two traits, measured around the circle when periodic.
    double distance(double a, double b) const noexcept;

private:
    int n_ = 3;
    TraitBc bc_ = TraitBc::periodic;
};

/// Circular distance on the unit circle.
double circle_distance(double a, double b) noexcept;

/// Reduce theta to [0, 1).
double wrap_unit(double theta) noexcept;

}  // namespace dispersal
