#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dispersal/quadrature.hpp"
#include "dispersal/verify.hpp"

namespace dispersal {

TraitSpaceDensity u_eps(const TraitSpaceDensity& n, double epsilon, const SpatialGrid& sg,
                        const TraitGrid& tg) {
    TraitSpaceDensity u(n.n_x(), n.n_theta(), 0.0);
    for (int j = 0; j < n.n_theta(); ++j) {
        if (!tg.is_free(j)) continue;
        for (int i = 0; i < n.n_x(); ++i)
            if (sg.is_free(i)) u(i, j) = epsilon * std::log(n(i, j));
    }
    return u;
}

std::vector<double> x_average(const TraitSpaceDensity& field, const SpatialGrid& sg) {
    std::vector<double> out(field.n_theta());
    for (int j = 0; j < field.n_theta(); ++j)
        out[j] = integrate_space(field.column(j), sg) / sg.length();
    return out;
}

RhoReport check_rho_identities(const SimState& steady, const ModelConfig& config, double margin,
                               double identity_rel_tol) {
    const auto& sg = config.spatial;
    const auto rho = integrate_trait(steady.n, config.trait);
    const auto k = config.capacity_samples();
    std::vector<double> rk(sg.size()), r2(sg.size());
    for (int i = 0; i < sg.size(); ++i) {
        rk[i] = rho[i] * k[i];
        r2[i] = rho[i] * rho[i];
    }
    RhoReport r;
    r.min_rho = rho.min();
    r.max_rho = rho.max();
    r.ceiling = *std::max_element(k.begin(), k.end()) * (1.0 + margin);
    r.integral_rho = integrate_space(rho.values, sg);
    r.integral_rho_k = integrate_space(rk, sg);
    r.integral_rho_sq = integrate_space(r2, sg);
    r.identity_defect = std::abs(r.integral_rho_k - r.integral_rho_sq);
    r.nonnegative = r.min_rho >= 0.0;
    r.below_ceiling = r.max_rho <= r.ceiling;
    r.identity_holds = r.identity_defect < identity_rel_tol * r.integral_rho_sq;
    r.positive_mass = r.integral_rho > 0.0;
    return r;
}

CorrectorReport fit_corrector(const TraitSpaceDensity& n, const std::vector<double>& trait_weight,
                              const std::vector<DensityProfile>& eigenfunctions,
                              const ModelConfig& config, double half_window) {
    const auto& sg = config.spatial;
    const auto& tg = config.trait;
    const double theta_m = config.theta_m ? *config.theta_m : tg.node(config.dispersal_argmin());

    CorrectorReport r;
    r.v_max = 0.0;
    r.v_min = std::numeric_limits<double>::infinity();
    double vn = 0.0;
    double nn = 0.0;
    for (int j = 0; j < tg.size(); ++j) {
        if (!tg.is_free(j) || tg.distance(tg.node(j), theta_m) > half_window + 1e-12) continue;
        ++r.window_nodes;
        for (int i = 0; i < sg.size(); ++i) {
            if (!sg.is_free(i)) continue;
            const double v = n(i, j) / trait_weight[j];
            r.v_max = std::max(r.v_max, v);
            r.v_min = std::min(r.v_min, v);
            vn += sg.weight(i) * v * eigenfunctions[j][i];
            nn += sg.weight(i) * eigenfunctions[j][i] * eigenfunctions[j][i];
        }
    }
    if (r.window_nodes == 0) throw std::invalid_argument("corrector check: window holds no trait node");
    r.v_ratio = r.v_max / r.v_min;
    r.rho_bar = vn / nn;

    double resid = 0.0;
    double norm = 0.0;
    for (int j = 0; j < tg.size(); ++j) {
        if (!tg.is_free(j) || tg.distance(tg.node(j), theta_m) > half_window + 1e-12) continue;
        for (int i = 0; i < sg.size(); ++i) {
            if (!sg.is_free(i)) continue;
            const double v = n(i, j) / trait_weight[j];
            const double e = v - r.rho_bar * eigenfunctions[j][i];
            resid += sg.weight(i) * e * e;
            norm += sg.weight(i) * v * v;
        }
    }
    r.fit_residual = std::sqrt(resid / norm);
    return r;
}

CorrectorReport corrector_check(const SimState& steady, const ModelConfig& config, double window) {
    const auto rho = integrate_trait(steady.n, config.trait);
    const auto h = hamiltonian_curve(rho, config, true);
    const auto w = trait_eigenpair(h, config.epsilon, config.trait, config.solver);
    auto r = fit_corrector(steady.n, w.eigenfunction, h.eigenfunctions, config, 0.5 * window);
    r.lambda = w.eigenvalue;
    return r;
}

}  // namespace dispersal
