#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include <fmt/format.h>

#include "dispersal/elliptic.hpp"
#include "dispersal/errors.hpp"
#include "dispersal/hj.hpp"

namespace dispersal {

namespace {

int argmax_of(const std::vector<double>& v) {
    return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

double hj_cfl_bound(const PotentialFunction& u, const std::vector<double>& gradient_coeff,
                    const TraitGrid& grid, double floor) {
    const int n = grid.size();
    const double step = grid.spacing();
    double max_slope = 0.0;
    for (int j = 0; j < n; ++j) {
        const int hi = grid.neighbor(j, 1);
        if (hi < 0) continue;
        max_slope = std::max(max_slope, std::abs(u.values[hi] - u.values[j]) / step);
    }
    const double max_coeff = *std::max_element(gradient_coeff.begin(), gradient_coeff.end());
    return step / (2.0 * max_coeff * max_slope + floor);
}

std::vector<double> transient_hj_update(const std::vector<double>& u, const HamiltonianCurve& h,
                                        const std::vector<double>& gradient_coeff, double dt,
                                        const TraitGrid& grid) {
    const int n = grid.size();
    const double step = grid.spacing();
    std::vector<double> next(n);
    for (int j = 0; j < n; ++j) {
        const int lo = grid.neighbor(j, -1);
        const int hi = grid.neighbor(j, 1);
        // Missing neighbors at dirichlet ends act as a zero-slope ghost.
        const double back = lo >= 0 ? (u[j] - u[lo]) / step : 0.0;
        const double fwd = hi >= 0 ? (u[hi] - u[j]) / step : 0.0;
        // Godunov flux for the concave Hamiltonian p -> G p^2 written for u.
        const double a = std::min(back, 0.0);
        const double b = std::max(fwd, 0.0);
        const double grad2 = std::max(a * a, b * b);
        next[j] = u[j] + dt * (gradient_coeff[j] * grad2 - h.values[j]);
    }
    return next;
}

PotentialFunction step_transient_hj(const PotentialFunction& u, const HamiltonianCurve& h,
                                    const std::vector<double>& gradient_coeff, double dt,
                                    const TraitGrid& grid) {
    if (static_cast<int>(u.values.size()) != grid.size() ||
        static_cast<int>(h.values.size()) != grid.size() ||
        static_cast<int>(gradient_coeff.size()) != grid.size())
        throw std::invalid_argument("transient HJ: sizes do not match the trait grid");
    const double bound = hj_cfl_bound(u, gradient_coeff, grid);
    if (!(dt > 0.0) || dt > bound * (1.0 + 1e-12))
        throw std::invalid_argument(
            fmt::format("transient HJ: dt = {:.4g} violates the CFL bound {:.4g}", dt, bound));

    PotentialFunction out;
    out.values = transient_hj_update(u.values, h, gradient_coeff, dt, grid);
    out.argmax_index = argmax_of(out.values);
    const double top = out.values[out.argmax_index];
    for (double& v : out.values) v -= top;
    return out;
}

std::vector<double> gradient_coefficients(const ModelConfig& config) {
    if (config.hj.gradient_factor == GradientFactor::dispersal) return config.dispersal_samples();
    return std::vector<double>(config.trait.size(), 1.0);
}

double canonical_rhs(double theta_bar, const PotentialFunction& u, const HamiltonianCurve& h,
                     double curvature_floor, const TraitGrid& grid) {
    const int j = grid.nearest(theta_bar);
    const double step = grid.spacing();
    int c = j;
    // Shift the stencil inward at dirichlet ends.
    if (grid.neighbor(c, -1) < 0) c = grid.neighbor(c, 1);
    if (grid.neighbor(c, 1) < 0) c = grid.neighbor(c, -1);
    const int lo = grid.neighbor(c, -1);
    const int hi = grid.neighbor(c, 1);
    const double second = (u.values[hi] - 2.0 * u.values[c] + u.values[lo]) / (step * step);
    const double curvature = std::max(-second, curvature_floor);
    return -trait_slope(h.values, grid, j) / curvature;
}

TraitTrajectory quasistatic_dynamics(double theta_0, double final_time, double dt,
                                     const ModelConfig& config, bool keep_profiles) {
    const auto& grid = config.trait;
    if (!(theta_0 >= 0.0 && theta_0 < 1.0))
        throw std::invalid_argument("quasistatic: theta_0 must lie in [0, 1)");
    const auto d = config.dispersal_samples();
    const DensityProfile k(config.capacity_samples());
    const auto coeff = gradient_coefficients(config);

    PotentialFunction u;
    u.values.resize(grid.size());
    for (int j = 0; j < grid.size(); ++j) {
        const double dist = grid.distance(grid.node(j), theta_0);
        u.values[j] = -config.hj.initial_curvature * dist * dist;
    }
    u.argmax_index = argmax_of(u.values);
    {
        const double top = u.values[u.argmax_index];
        for (double& v : u.values) v -= top;
    }

    TraitTrajectory traj;
    std::optional<int> cached_index;
    HamiltonianCurve h;
    DensityProfile weight;
    double t = 0.0;
    int stalled = 0;
    int last_index = u.argmax_index;

    for (;;) {
        const int jbar = u.argmax_index;
        if (!cached_index || *cached_index != jbar) {
            try {
                weight = solve_fisher_kpp(d[jbar], k, config.spatial, config.solver);
                h = hamiltonian_curve(weight, config);
            } catch (const SolverError& e) {
                throw SolverError(fmt::format("quasistatic step at t = {:.6g}: {}", t, e.what()),
                                  e.residual());
            }
            cached_index = jbar;
        }
        traj.times.push_back(t);
        traj.fittest_index.push_back(jbar);
        traj.fittest_trait.push_back(grid.node(jbar));
        traj.hamiltonian_at_fittest.push_back(h.values[jbar]);
        traj.hamiltonian_slope.push_back(trait_slope(h.values, grid, jbar));
        traj.canonical_rate.push_back(
            canonical_rhs(grid.node(jbar), u, h, config.hj.curvature_floor, grid));
        if (keep_profiles) traj.weight_profiles.push_back(weight);

        if (t >= final_time * (1.0 - 1e-12)) break;
        if (stalled >= config.hj.stall_steps) break;

        double step_dt = dt > 0.0 ? dt : 0.9 * hj_cfl_bound(u, coeff, grid);
        step_dt = std::min(step_dt, final_time - t);
        u = step_transient_hj(u, h, coeff, step_dt, grid);
        t += step_dt;

        const double move = grid.distance(grid.node(u.argmax_index), grid.node(last_index));
        stalled = move <= config.hj.stall_tol ? stalled + 1 : 0;
        last_index = u.argmax_index;
    }
    return traj;
}

}  // namespace dispersal
