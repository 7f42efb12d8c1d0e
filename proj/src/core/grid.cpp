#include <algorithm>
#include "dispersal/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace dispersal {

SpatialGrid::SpatialGrid(double length, int n_x, SpatialBc bc)
    : length_(length), n_x_(n_x), bc_(bc) {
    if (!(length > 0.0) || !std::isfinite(length))
        throw std::invalid_argument("spatial grid: length must be positive");
    if (n_x < 3) throw std::invalid_argument("spatial grid: n_x must be >= 3");
}

std::vector<double> SpatialGrid::nodes() const {
    std::vector<double> x(n_x_);
    for (int i = 0; i < n_x_; ++i) x[i] = node(i);
    return x;
}

double SpatialGrid::weight(int i) const noexcept {
    const double h = spacing();
    return (i == 0 || i == n_x_ - 1) ? 0.5 * h : h;
}

TraitGrid::TraitGrid(int n_theta, TraitBc bc) : n_(n_theta), bc_(bc) {
    if (n_theta < 3) throw std::invalid_argument("trait grid: n_theta must be >= 3");
}

std::vector<double> TraitGrid::nodes() const {
    std::vector<double> t(n_);
    for (int j = 0; j < n_; ++j) t[j] = node(j);
    return t;
}

double TraitGrid::weight(int j) const noexcept {
    const double h = spacing();
    if (periodic()) return h;
    return (j == 0 || j == n_ - 1) ? 0.5 * h : h;
}

int TraitGrid::nearest(double theta) const noexcept {
    if (periodic()) {
        const auto j = static_cast<long>(std::lround(wrap_unit(theta) * n_));
        return static_cast<int>(j % n_);
    }
    const double clamped = std::min(1.0, std::max(0.0, theta));
    return static_cast<int>(std::lround(clamped * (n_ - 1)));
}

int TraitGrid::neighbor(int j, int offset) const noexcept {
    const int k = j + offset;
    if (periodic()) return ((k % n_) + n_) % n_;
    return (k < 0 || k >= n_) ? -1 : k;
}

double TraitGrid::distance(double a, double b) const noexcept {
    return periodic() ? circle_distance(a, b) : std::abs(a - b);
}

double wrap_unit(double theta) noexcept {
    double r = theta - std::floor(theta);
    return r >= 1.0 ? 0.0 : r;
}

double circle_distance(double a, double b) noexcept {
    const double d = wrap_unit(a - b);
    return std::min(d, 1.0 - d);
}

}  // namespace dispersal
