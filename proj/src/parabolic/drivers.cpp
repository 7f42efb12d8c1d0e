#include <limits>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "dispersal/errors.hpp"
#include "dispersal/parabolic.hpp"

namespace dispersal {

TraitSpaceDensity default_initial_density(const ModelConfig& config) {
    const auto& sg = config.spatial;
    const auto& tg = config.trait;
    const auto k = config.capacity_samples();
    const double center = config.initial_center;
    const double width = config.initial_width;

    std::vector<double> bump(tg.size(), 0.0);
    for (int j = 0; j < tg.size(); ++j) {
        if (!tg.is_free(j)) continue;
        if (tg.periodic()) {
            // von Mises bump: locally Gaussian with standard deviation `width`.
            const double kappa = 1.0 / std::pow(2.0 * std::numbers::pi * width, 2);
            bump[j] = std::exp(kappa * (std::cos(2.0 * std::numbers::pi * (tg.node(j) - center)) - 1.0));
        } else {
            const double s = (tg.node(j) - center) / width;
            bump[j] = std::exp(-0.5 * s * s);
        }
    }
    double mass = 0.0;
    for (int j = 0; j < tg.size(); ++j) mass += tg.weight(j) * bump[j];
    for (double& g : bump) g /= mass;

    TraitSpaceDensity n(sg.size(), tg.size(), 0.0);
    for (int j = 0; j < tg.size(); ++j)
        for (int i = 0; i < sg.size(); ++i)
            if (sg.is_free(i) && tg.is_free(j)) n(i, j) = k[i] * bump[j];
    return n;
}

namespace {

Snapshot make_snapshot(const SimState& s, const ModelConfig& config, bool keep_state) {
    Snapshot snap;
    snap.t = s.t;
    snap.step_count = s.step_count;
    snap.moments = trait_moments(s.n, config.spatial, config.trait);
    snap.rho = integrate_trait(s.n, config.trait);
    snap.trait_marginal = trait_marginal(s.n, config.spatial);
    if (keep_state) snap.state = s;
    return snap;
}

}  // namespace

std::vector<Snapshot> run_transient(const ModelConfig& config, const TraitSpaceDensity& n0,
                                    double final_time, int sample_every,
                                    const std::vector<double>& snapshot_times) {
    if (!(final_time >= 0.0)) throw std::invalid_argument("transient: final_time must be >= 0");
    if (sample_every < 1) throw std::invalid_argument("transient: sample_every must be >= 1");
    auto targets = snapshot_times;
    std::sort(targets.begin(), targets.end());
    targets.erase(std::remove_if(targets.begin(), targets.end(),
                                 [&](double t) { return t <= 0.0 || t > final_time; }),
                  targets.end());

    const auto stepper_cfg = default_stepper(config);
    const Stepper stepper(config, stepper_cfg);
    SimState state{n0, 0.0, 0};
    std::vector<Snapshot> out;
    out.push_back(make_snapshot(state, config, false));

    std::size_t next_target = 0;
    const double tiny = 1e-12 * std::max(1.0, final_time);
    while (state.t < final_time - tiny) {
        double dt = stepper_cfg.dt;
        double landing = final_time;
        if (next_target < targets.size()) landing = std::min(landing, targets[next_target]);
        bool hits = false;
        if (state.t + dt >= landing - tiny) {
            dt = landing - state.t;
            hits = true;
        }
        try {
            stepper.advance(state, dt);
        } catch (const SolverError& e) {
            throw SolverError(fmt::format("transient run failed at t = {:.6g}: {}", state.t, e.what()),
                              e.residual());
        }
        bool at_target = false;
        if (hits) {
            state.t = landing;
            while (next_target < targets.size() && targets[next_target] <= state.t + tiny) {
                ++next_target;
                at_target = true;
            }
        }
        const bool at_end = state.t >= final_time - tiny;
        if (at_target || at_end || state.step_count % sample_every == 0)
            out.push_back(make_snapshot(state, config, at_target || at_end));
    }
    if (out.size() == 1) out.front().state = state;
    return out;
}

SimState run_to_steady(const ModelConfig& config, const TraitSpaceDensity& n0,
                       double residual_tol) {
    if (config.spatial.bc() != SpatialBc::neumann || !config.trait.periodic())
        throw std::invalid_argument("steady run: requires neumann in x and periodic in theta");
    const auto stepper_cfg = default_stepper(config);
    const Stepper stepper(config, stepper_cfg);
    SimState state{n0, 0.0, 0};
    double change = std::numeric_limits<double>::infinity();
    while (state.t < config.solver.max_time) {
        const TraitSpaceDensity before = state.n;
        stepper.advance(state);
        double diff = 0.0;
        double top = 0.0;
        const auto a = before.data();
        const auto b = state.n.data();
        for (std::size_t i = 0; i < a.size(); ++i) {
            diff = std::max(diff, std::abs(b[i] - a[i]));
            top = std::max(top, b[i]);
        }
        change = diff / (stepper_cfg.dt * top);
        if (change < residual_tol) return state;
    }
    throw SolverError(fmt::format("steady run: no steady state by t = {:.6g} (relative change {:.3e})",
                                  state.t, change),
                      change);
}

}  // namespace dispersal
