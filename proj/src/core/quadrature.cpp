#include "dispersal/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dispersal {

DensityProfile integrate_trait(const TraitSpaceDensity& n, const TraitGrid& trait) {
    DensityProfile rho(static_cast<std::size_t>(n.n_x()), 0.0);
    for (int j = 0; j < n.n_theta(); ++j) {
        const double w = trait.weight(j);
        const auto col = n.column(j);
        for (int i = 0; i < n.n_x(); ++i) rho[i] += w * col[i];
    }
    return rho;
}

std::vector<double> trait_marginal(const TraitSpaceDensity& n, const SpatialGrid& spatial) {
    std::vector<double> m(n.n_theta());
    for (int j = 0; j < n.n_theta(); ++j) m[j] = integrate_space(n.column(j), spatial);
    return m;
}

double integrate_space(std::span<const double> f, const SpatialGrid& grid) {
    double s = 0.0;
    for (int i = 0; i < grid.size(); ++i) s += grid.weight(i) * f[i];
    return s;
}

double integrate_trait_values(std::span<const double> f, const TraitGrid& grid) {
    double s = 0.0;
    for (int j = 0; j < grid.size(); ++j) s += grid.weight(j) * f[j];
    return s;
}

double gradient_energy(std::span<const double> f, const SpatialGrid& grid) {
    const double h = grid.spacing();
    double s = 0.0;
    for (int i = 0; i + 1 < grid.size(); ++i) {
        const double d = f[i + 1] - f[i];
        s += d * d;
    }
    return s / h;
}

TraitMoments trait_moments(const TraitSpaceDensity& n, const SpatialGrid& spatial,
                           const TraitGrid& trait) {
    const auto marginal = trait_marginal(n, spatial);
    TraitMoments m;
    m.mass = integrate_trait_values(marginal, trait);
    if (!(m.mass > 0.0) || !std::isfinite(m.mass))
        throw std::domain_error("degenerate density: total mass is not positive");

    if (!trait.periodic()) {
        double first = 0.0;
        for (int j = 0; j < trait.size(); ++j) first += trait.weight(j) * marginal[j] * trait.node(j);
        m.mean_trait = first / m.mass;
        double second = 0.0;
        for (int j = 0; j < trait.size(); ++j) {
            const double d = trait.node(j) - m.mean_trait;
            second += trait.weight(j) * marginal[j] * d * d;
        }
        m.trait_stddev = std::sqrt(second / m.mass);
        return m;
    }

    constexpr double two_pi = 2.0 * std::numbers::pi;
    double c = 0.0;
    double s = 0.0;
    for (int j = 0; j < trait.size(); ++j) {
        const double w = trait.weight(j) * marginal[j];
        c += w * std::cos(two_pi * trait.node(j));
        s += w * std::sin(two_pi * trait.node(j));
    }
    m.resultant_length = std::hypot(c, s) / m.mass;
    if (m.resultant_length < 1e-8) {
        m.mean_reliable = false;
        m.mean_trait = 0.0;
        m.trait_stddev = 1.0 / std::sqrt(12.0);  // uniform on the circle
        return m;
    }
    m.mean_trait = wrap_unit(std::atan2(s, c) / two_pi);
    // RMS circular distance about the circular mean.
    double second = 0.0;
    for (int j = 0; j < trait.size(); ++j) {
        const double d = circle_distance(trait.node(j), m.mean_trait);
        second += trait.weight(j) * marginal[j] * d * d;
    }
    m.trait_stddev = std::sqrt(second / m.mass);
    return m;
}

}  // namespace dispersal
