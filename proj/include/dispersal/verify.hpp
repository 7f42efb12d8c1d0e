#pragma once

#include <string>
#include <vector>

#include "dispersal/config.hpp"
#include "dispersal/elliptic.hpp"
#include "dispersal/field.hpp"
#include "dispersal/parabolic.hpp"

namespace dispersal {

/// One row of an epsilon-convergence study.
struct AsymptoticReport {
    double epsilon = 0.0;
    double max_u_eps = 0.0;           // max over theta of the x-averaged eps ln n
    double lipschitz_theta = 0.0;     // max |d_theta u_eps|
    double lipschitz_x_scaled = 0.0;  // max |d_x u_eps| / sqrt(eps)
    double x_oscillation = 0.0;       // max over theta of (max_x - min_x) u_eps
    double rho_error = 0.0;           // ||rho_eps - N_m||_inf
    double u_error = 0.0;             // sup_theta |mean_x u_eps - u|
    double trait_mean = 0.0;
    double trait_stddev = 0.0;
    int argmax_u_index = 0;           // argmax over theta of mean_x u_eps
    double steady_time = 0.0;
    bool failed = false;
    std::string failure;
};

/// Literal checks around the a-priori bounds on rho at a steady state.
struct RhoReport {
    double min_rho = 0.0;
    double max_rho = 0.0;
    double ceiling = 0.0;           // max K (1 + margin)
    double integral_rho = 0.0;
    double integral_rho_k = 0.0;
    double integral_rho_sq = 0.0;
    double identity_defect = 0.0;   // |int rho K - int rho^2|
    bool nonnegative = false;
    bool below_ceiling = false;
    bool identity_holds = false;    // defect < identity_rel_tol * int rho^2
    bool positive_mass = false;
};

struct CorrectorReport {
    double v_max = 0.0;
    double v_min = 0.0;
    double v_ratio = 0.0;
    double rho_bar = 0.0;
    double fit_residual = 0.0;  // ||v - rho_bar N|| / ||v|| over the window
    int window_nodes = 0;
    double lambda = 0.0;        // trait eigenvalue at rho_eps
};

/// eps ln n at every node. Stored in a TraitSpaceDensity-shaped container;
/// values are logarithms and may be negative. Pinned nodes are left at zero.
TraitSpaceDensity u_eps(const TraitSpaceDensity& n, double epsilon, const SpatialGrid& sg,
                        const TraitGrid& tg);

/// (1/|Omega|) integral over x of a field, per trait node.
std::vector<double> x_average(const TraitSpaceDensity& field, const SpatialGrid& sg);

RhoReport check_rho_identities(const SimState& steady, const ModelConfig& config,
                               double margin = 0.01, double identity_rel_tol = 1e-6);

/// Steady states for each epsilon compared against the limit objects
/// (N_m and the constrained HJ solution at rho = N_m). A failing epsilon
/// ends the study; its row carries the failure message.
std::vector<AsymptoticReport> convergence_study(const ModelConfig& config,
                                                const std::vector<double>& epsilons);

/// Fits v = n / W against rho_bar N(x, theta) on the trait nodes within
/// half_window of theta_m. eigenfunctions holds N(., theta_j) for every node.
CorrectorReport fit_corrector(const TraitSpaceDensity& n, const std::vector<double>& trait_weight,
                              const std::vector<DensityProfile>& eigenfunctions,
                              const ModelConfig& config, double half_window);

/// Builds H at rho_eps, the trait eigenpair W_eps, and runs fit_corrector
/// over a window of total width `window` around theta_m.
CorrectorReport corrector_check(const SimState& steady, const ModelConfig& config,
                                double window = 0.2);

}  // namespace dispersal
