#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dispersal/config.hpp"
#include "dispersal/field.hpp"
#include "dispersal/quadrature.hpp"

namespace dispersal {

struct SimState {
    TraitSpaceDensity n;
    double t = 0.0;
    long step_count = 0;
};

struct StepperConfig {
    double dt = 0.0;
    ReactionTreatment reaction = ReactionTreatment::semi_implicit;
};

/// 0.9 * min(h_theta^2 / (2 eps), eps / (2 max K)).
double stability_bound(const ModelConfig& config);

/// solver.dt when set, the stability bound otherwise.
StepperConfig default_stepper(const ModelConfig& config);

/// Backward-Euler solve ((1 + extra_diag) I - c Lap_x) y = rhs in place on
/// one spatial column. extra_diag, when non-empty, is indexed by spatial node.
/// Pinned dirichlet ends are set to zero. scratch needs grid.size() entries.
void implicit_x_solve(std::span<double> column, double c, const SpatialGrid& grid,
                      std::span<double> scratch, std::span<const double> extra_diag = {});

/// Time stepper for eps n_t = D(theta) Lap_x n + eps^2 Lap_theta n + n (K - rho).
///
/// Trait diffusion and reaction are explicit at the old state, rho is frozen
/// for the step, and each trait column then takes a tridiagonal implicit
/// solve in x. semi_implicit moves the loss term -n rho onto the diagonal of
/// that solve, so positivity does not depend on the reaction.
class Stepper {
public:
    Stepper(const ModelConfig& config, StepperConfig stepper);

    /// Advances in place by dt (defaults to the configured step).
    /// Throws SolverError when a free node stops being positive.
    void advance(SimState& state, double dt = 0.0) const;

    double dt() const noexcept { return stepper_.dt; }

private:
    const ModelConfig& config_;
    StepperConfig stepper_;
    std::vector<double> dispersal_;
    std::vector<double> capacity_;
};

SimState step(const SimState& state, const ModelConfig& config, const StepperConfig& stepper);

/// K(x) G(theta) with G a bump of width config.initial_width centered at
/// config.initial_center, normalized so that rho(x) = K(x).
TraitSpaceDensity default_initial_density(const ModelConfig& config);

struct Snapshot {
    double t = 0.0;
    long step_count = 0;
    TraitMoments moments;
    DensityProfile rho;
    std::vector<double> trait_marginal;
    std::optional<SimState> state;  // kept at requested snapshot times and at the end
};

/// Integrates to final_time recording diagnostics at t = 0, every
/// sample_every steps, at each of snapshot_times (landing on them exactly)
/// and at the end.
std::vector<Snapshot> run_transient(const ModelConfig& config, const TraitSpaceDensity& n0,
                                    double final_time, int sample_every,
                                    const std::vector<double>& snapshot_times = {});

/// Integrates until max |n_new - n_old| / (dt max n) < residual_tol.
/// Requires neumann in x and periodic in theta.
SimState run_to_steady(const ModelConfig& config, const TraitSpaceDensity& n0,
                       double residual_tol);

/// Max-norm residual of the discrete stationary equation divided by max n.
double steady_residual(const TraitSpaceDensity& n, const ModelConfig& config);

}  // namespace dispersal
