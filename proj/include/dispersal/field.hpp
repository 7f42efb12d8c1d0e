#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dispersal/grid.hpp"

namespace dispersal {

/// A field over the spatial nodes: rho(x), N_m(x), K(x) or an eigenfunction slice.
struct DensityProfile {
    std::vector<double> values;

    DensityProfile() = default;
    explicit DensityProfile(std::vector<double> v) : values(std::move(v)) {}
    DensityProfile(std::size_t n, double fill) : values(n, fill) {}

    std::size_t size() const noexcept { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    double min() const;
    double max() const;
};

/// n(x, theta) on SpatialGrid x TraitGrid.
///
/// Stored trait-major: each trait node owns a contiguous spatial column, so
/// the per-trait implicit solves in x work on contiguous memory.
class TraitSpaceDensity {
public:
    TraitSpaceDensity() = default;
    TraitSpaceDensity(int n_x, int n_theta, double fill = 0.0);

    int n_x() const noexcept { return n_x_; }
    int n_theta() const noexcept { return n_theta_; }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(j) * n_x_ + i]; }
    double operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(j) * n_x_ + i];
    }

    std::span<double> column(int j) {
        return {data_.data() + static_cast<std::size_t>(j) * n_x_, static_cast<std::size_t>(n_x_)};
    }
    std::span<const double> column(int j) const {
        return {data_.data() + static_cast<std::size_t>(j) * n_x_, static_cast<std::size_t>(n_x_)};
    }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    bool operator==(const TraitSpaceDensity&) const = default;

private:
    int n_x_ = 0;
    int n_theta_ = 0;
    std::vector<double> data_;
};

/// Smallest value over nodes that carry unknowns (pinned dirichlet ends excluded).
double min_free_value(const TraitSpaceDensity& n, const SpatialGrid& sg, const TraitGrid& tg);

/// Zero the pinned dirichlet boundary nodes in place.
void apply_boundary(TraitSpaceDensity& n, const SpatialGrid& sg, const TraitGrid& tg);

}  // namespace dispersal
