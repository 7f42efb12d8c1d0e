#include "dispersal/field.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace dispersal {

double DensityProfile::min() const {
    if (values.empty()) throw std::logic_error("empty profile");
    return *std::min_element(values.begin(), values.end());
}

double DensityProfile::max() const {
    if (values.empty()) throw std::logic_error("empty profile");
    return *std::max_element(values.begin(), values.end());
}

TraitSpaceDensity::TraitSpaceDensity(int n_x, int n_theta, double fill)
    : n_x_(n_x), n_theta_(n_theta),
      data_(static_cast<std::size_t>(n_x) * static_cast<std::size_t>(n_theta), fill) {
    if (n_x < 1 || n_theta < 1) throw std::invalid_argument("density: empty grid");
}

double min_free_value(const TraitSpaceDensity& n, const SpatialGrid& sg, const TraitGrid& tg) {
    double lo = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n.n_theta(); ++j) {
        if (!tg.is_free(j)) continue;
        for (int i = 0; i < n.n_x(); ++i)
            if (sg.is_free(i)) lo = std::min(lo, n(i, j));
    }
    return lo;
}

void apply_boundary(TraitSpaceDensity& n, const SpatialGrid& sg, const TraitGrid& tg) {
    for (int j = 0; j < n.n_theta(); ++j) {
        for (int i = 0; i < n.n_x(); ++i)
            if (!tg.is_free(j) || !sg.is_free(i)) n(i, j) = 0.0;
    }
}

}  // namespace dispersal
