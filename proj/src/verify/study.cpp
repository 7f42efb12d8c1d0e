#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dispersal/elliptic.hpp"
#include "dispersal/hj.hpp"
#include "dispersal/parallel.hpp"
#include "dispersal/quadrature.hpp"
#include "dispersal/verify.hpp"

namespace dispersal {

namespace {

void fill_log_diagnostics(AsymptoticReport& r, const TraitSpaceDensity& n, const ModelConfig& cfg,
                          const PotentialFunction& limit) {
    const auto& sg = cfg.spatial;
    const auto& tg = cfg.trait;
    const auto u = u_eps(n, cfg.epsilon, sg, tg);
    const auto mean_u = x_average(u, sg);

    r.argmax_u_index = static_cast<int>(std::max_element(mean_u.begin(), mean_u.end()) - mean_u.begin());
    r.max_u_eps = mean_u[r.argmax_u_index];
    r.u_error = 0.0;
    for (int j = 0; j < tg.size(); ++j)
        r.u_error = std::max(r.u_error, std::abs(mean_u[j] - limit.values[j]));

    const double hx = sg.spacing();
    const double ht = tg.spacing();
    double lip_t = 0.0;
    double lip_x = 0.0;
    double osc = 0.0;
    for (int j = 0; j < tg.size(); ++j) {
        const int hi = tg.neighbor(j, 1);
        double lo_x = u(0, j);
        double hi_x = u(0, j);
        for (int i = 0; i < sg.size(); ++i) {
            if (hi >= 0) lip_t = std::max(lip_t, std::abs(u(i, hi) - u(i, j)) / ht);
            if (i + 1 < sg.size()) lip_x = std::max(lip_x, std::abs(u(i + 1, j) - u(i, j)) / hx);
            lo_x = std::min(lo_x, u(i, j));
            hi_x = std::max(hi_x, u(i, j));
        }
        osc = std::max(osc, hi_x - lo_x);
    }
    r.lipschitz_theta = lip_t;
    r.lipschitz_x_scaled = lip_x / std::sqrt(cfg.epsilon);
    r.x_oscillation = osc;
}

}  // namespace

std::vector<AsymptoticReport> convergence_study(const ModelConfig& config,
                                                const std::vector<double>& epsilons) {
    if (epsilons.empty()) throw std::invalid_argument("convergence study: empty epsilon list");

    // Limit objects do not depend on epsilon.
    const DensityProfile k(config.capacity_samples());
    const auto n_m = solve_fisher_kpp(config.dispersal_min(), k, config.spatial, config.solver);
    const auto h_limit = hamiltonian_curve(n_m, config);
    const auto u_limit = solve_constrained_hj(h_limit, config.trait, config.hj.tol_ess);

    const int count = static_cast<int>(epsilons.size());
    std::vector<AsymptoticReport> rows(count);
    const int workers = config.solver.threads;

    parallel_for(count, workers, [&](int e) {
        AsymptoticReport& r = rows[e];
        r.epsilon = epsilons[e];
        try {
            ModelConfig cfg = config;
            cfg.epsilon = epsilons[e];
            if (workers > 1) cfg.solver.threads = 1;
            const auto steady = run_to_steady(cfg, default_initial_density(cfg), cfg.solver.steady_tol);
            r.steady_time = steady.t;
            const auto rho = integrate_trait(steady.n, cfg.trait);
            r.rho_error = 0.0;
            for (int i = 0; i < cfg.spatial.size(); ++i)
                r.rho_error = std::max(r.rho_error, std::abs(rho[i] - n_m[i]));
            const auto m = trait_moments(steady.n, cfg.spatial, cfg.trait);
            r.trait_mean = m.mean_trait;
            r.trait_stddev = m.trait_stddev;
            fill_log_diagnostics(r, steady.n, cfg, u_limit);
        } catch (const std::exception& ex) {
            r.failed = true;
            r.failure = ex.what();
        }
    });

    // Sequential semantics: rows after the first failure are dropped.
    for (int e = 0; e < count; ++e) {
        if (rows[e].failed) {
            rows.resize(e + 1);
            break;
        }
    }
    return rows;
}

}  // namespace dispersal
