#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "dispersal/errors.hpp"
#include "dispersal/operators.hpp"
#include "dispersal/parabolic.hpp"
#include "dispersal/parallel.hpp"

namespace dispersal {

double stability_bound(const ModelConfig& config) {
    const double eps = config.epsilon;
    const double h = config.trait.spacing();
    const auto k = config.capacity_samples();
    const double k_max = *std::max_element(k.begin(), k.end());
    return 0.9 * std::min(h * h / (2.0 * eps), eps / (2.0 * k_max));
}

StepperConfig default_stepper(const ModelConfig& config) {
    StepperConfig s;
    s.dt = config.solver.dt > 0.0 ? config.solver.dt : stability_bound(config);
    s.reaction = config.solver.reaction;
    return s;
}

void implicit_x_solve(std::span<double> y, double c, const SpatialGrid& grid,
                      std::span<double> scratch, std::span<const double> extra_diag) {
    const int n = grid.size();
    const double r = c / (grid.spacing() * grid.spacing());
    const double diag = 1.0 + 2.0 * r;
    const int b = free_begin(grid);
    const int m = free_count(grid);
    double* x = y.data() + b;
    double* cp = scratch.data();

    // Neumann ghost rows carry -2r on their single off-diagonal.
    const bool neumann = grid.bc() == SpatialBc::neumann;
    auto upper = [&](int i) { return (neumann && i == 0) ? -2.0 * r : -r; };
    auto lower = [&](int i) { return (neumann && i == m - 1) ? -2.0 * r : -r; };

    auto diag_at = [&](int i) { return extra_diag.empty() ? diag : diag + extra_diag[b + i]; };

    cp[0] = upper(0) / diag_at(0);
    x[0] = x[0] / diag_at(0);
    for (int i = 1; i < m; ++i) {
        const double factor = 1.0 / (diag_at(i) - lower(i) * cp[i - 1]);
        cp[i] = (i + 1 < m ? upper(i) : 0.0) * factor;
        x[i] = (x[i] - lower(i) * x[i - 1]) * factor;
    }
    for (int i = m - 1; i > 0; --i) x[i - 1] -= cp[i - 1] * x[i];
    if (!neumann) {
        y[0] = 0.0;
        y[n - 1] = 0.0;
    }
}

Stepper::Stepper(const ModelConfig& config, StepperConfig stepper)
    : config_(config), stepper_(stepper), dispersal_(config.dispersal_samples()),
      capacity_(config.capacity_samples()) {
    if (!(stepper_.dt > 0.0)) throw std::invalid_argument("stepper: dt must be positive");
}

void Stepper::advance(SimState& state, double dt) const {
    if (dt <= 0.0) dt = stepper_.dt;
    const auto& sg = config_.spatial;
    const auto& tg = config_.trait;
    const int nx = sg.size();
    const int nt = tg.size();
    const double eps = config_.epsilon;
    const double theta_coeff = dt * eps / (tg.spacing() * tg.spacing());
    const double rate = dt / eps;
    const bool semi = stepper_.reaction == ReactionTreatment::semi_implicit;

    const TraitSpaceDensity& old = state.n;
    const auto rho = integrate_trait(old, tg);
    std::vector<double> loss;
    if (semi) {
        loss.resize(nx);
        for (int i = 0; i < nx; ++i) loss[i] = rate * rho[i];
    }
    TraitSpaceDensity next(nx, nt, 0.0);

    parallel_for(nt, config_.solver.threads, [&](int j) {
        if (!tg.is_free(j)) return;
        const int lo = tg.neighbor(j, -1);
        const int hi = tg.neighbor(j, 1);
        const bool lo_free = tg.is_free(lo);
        const bool hi_free = tg.is_free(hi);
        auto col = next.column(j);
        const auto here = old.column(j);
        for (int i = 0; i < nx; ++i) {
            if (!sg.is_free(i)) continue;
            const double left = lo_free ? old(i, lo) : 0.0;
            const double right = hi_free ? old(i, hi) : 0.0;
            const double diffusion = theta_coeff * (left - 2.0 * here[i] + right);
            if (semi) {
                col[i] = here[i] + diffusion + rate * here[i] * capacity_[i];
            } else {
                col[i] = here[i] + diffusion + rate * here[i] * (capacity_[i] - rho[i]);
            }
        }
        std::vector<double> scratch(nx);
        implicit_x_solve(col, dt * dispersal_[j] / eps, sg, scratch, loss);
    });

    const double lowest = min_free_value(next, sg, tg);
    bool finite = true;
    for (double v : next.data()) finite = finite && std::isfinite(v);
    if (!finite || !(lowest > 0.0))
        throw SolverError(fmt::format("positivity lost; reduce dt (t = {:.6g}, min n = {:.3e})",
                                      state.t, lowest),
                          lowest);

    state.n = std::move(next);
    state.t += dt;
    ++state.step_count;
}

SimState step(const SimState& state, const ModelConfig& config, const StepperConfig& stepper) {
    Stepper stepper_impl(config, stepper);
    SimState out = state;
    stepper_impl.advance(out);
    return out;
}

double steady_residual(const TraitSpaceDensity& n, const ModelConfig& config) {
    const auto& sg = config.spatial;
    const auto& tg = config.trait;
    const auto d = config.dispersal_samples();
    const auto k = config.capacity_samples();
    const auto rho = integrate_trait(n, tg);
    const double eps2 = config.epsilon * config.epsilon;
    const double inv_hx2 = 1.0 / (sg.spacing() * sg.spacing());
    const double inv_ht2 = 1.0 / (tg.spacing() * tg.spacing());
    const int nx = sg.size();
    const bool neumann = sg.bc() == SpatialBc::neumann;

    double worst = 0.0;
    double top = 0.0;
    for (int j = 0; j < tg.size(); ++j) {
        if (!tg.is_free(j)) continue;
        const int lo = tg.neighbor(j, -1);
        const int hi = tg.neighbor(j, 1);
        for (int i = 0; i < nx; ++i) {
            if (!sg.is_free(i)) continue;
            top = std::max(top, n(i, j));
            double left = i > 0 ? n(i - 1, j) : (neumann ? n(1, j) : 0.0);
            double right = i + 1 < nx ? n(i + 1, j) : (neumann ? n(nx - 2, j) : 0.0);
            const double lap_x = (left - 2.0 * n(i, j) + right) * inv_hx2;
            const double tl = tg.is_free(lo) ? n(i, lo) : 0.0;
            const double th = tg.is_free(hi) ? n(i, hi) : 0.0;
            const double lap_t = (tl - 2.0 * n(i, j) + th) * inv_ht2;
            const double r = -d[j] * lap_x - eps2 * lap_t - n(i, j) * (k[i] - rho[i]);
            worst = std::max(worst, std::abs(r));
        }
    }
    return top > 0.0 ? worst / top : worst;
}

}  // namespace dispersal
