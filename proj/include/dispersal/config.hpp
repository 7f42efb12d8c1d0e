#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dispersal/functions.hpp"
#include "dispersal/grid.hpp"

namespace dispersal {

enum class ReactionTreatment { explicit_euler, semi_implicit };

/// Which coefficient multiplies |u'|^2 in the transient trait equation.
enum class GradientFactor { one, dispersal };

struct SolverSettings {
    double eigen_tol = 1e-10;   // max-norm residual of linear eigen-iterations
    double newton_tol = 1e-8;   // max-norm residual of the Fisher-KPP solve
    int eigen_max_iter = 2000;
    int newton_max_iter = 60;
    double steady_tol = 1e-8;
    double max_time = 400.0;
    double dt = 0.0;  // 0 selects 0.9 x the stability bound
    ReactionTreatment reaction = ReactionTreatment::semi_implicit;
    int threads = 1;
};

struct HjSettings {
    GradientFactor gradient_factor = GradientFactor::dispersal;
    double curvature_floor = 1e-2;
    double tol_ess = 1e-6;
    double theta0 = 0.7;
    double final_time = 2.0;
    double dt = 0.0;  // 0 selects 0.9 x the CFL bound
    int stall_steps = 100;
    double stall_tol = 1e-12;
    double initial_curvature = 1.0;  // u0 = -a d(theta, theta0)^2
};

struct OutputSettings {
    double final_time = 1.0;
    std::vector<double> snapshot_times;
    int sample_every = 50;
};

struct ModelConfig {
    SpatialGrid spatial{1.0, 101, SpatialBc::neumann};
    TraitGrid trait{100, TraitBc::periodic};
    TraitFunction dispersal = TraitFunction::constant(1.0);
    SpatialFunction capacity = SpatialFunction::constant(1.0);
    double epsilon = 0.05;
    std::optional<double> theta_m;  // declared minimizer of D, derived from samples when absent
    double initial_center = 0.5;
    double initial_width = 0.1;
    std::vector<double> epsilons;  // convergence study list

    SolverSettings solver;
    HjSettings hj;
    OutputSettings output;

    std::vector<double> dispersal_samples() const { return dispersal.sample(trait); }
    std::vector<double> capacity_samples() const { return capacity.sample(spatial); }
    double dispersal_at(double theta) const { return dispersal.value(theta, trait); }
    double dispersal_slope_at(double theta) const { return dispersal.derivative(theta, trait); }

    /// Trait node of the smallest sampled D (first one on ties).
    int dispersal_argmin() const;
    /// D_m: the smallest sampled D over free trait nodes.
    double dispersal_min() const;
};

struct Violation {
    enum class Severity { warning, error };
    Severity severity = Severity::error;
    std::string code;
    std::string message;
};

/// Checks the standing assumptions on K and D and basic grid sanity.
/// Never throws; an empty error list means the configuration is usable.
std::vector<Violation> validate_config(const ModelConfig& config);

bool has_errors(const std::vector<Violation>& violations);

/// Trait nodes that are local minima of the sampled D, one index per minimal plateau.
std::vector<int> local_minima(const std::vector<double>& samples, const TraitGrid& grid);

}  // namespace dispersal
