#pragma once

#include <cmath>
#include <vector>

#include "dispersal/config.hpp"
#include "dispersal/elliptic.hpp"
#include "dispersal/field.hpp"
#include "dispersal/grid.hpp"

namespace dispersal {

/// u(theta) on the trait grid with max u = u(argmax) = 0.
struct PotentialFunction {
    std::vector<double> values;
    int argmax_index = 0;
};

/// Fittest trait over time from the quasi-static loop.
struct TraitTrajectory {
    std::vector<double> times;
    std::vector<double> fittest_trait;
    std::vector<int> fittest_index;
    std::vector<double> hamiltonian_at_fittest;  // H(theta_bar, N_bar), zero up to solver tolerance
    std::vector<double> hamiltonian_slope;       // centered H_theta at theta_bar
    std::vector<double> canonical_rate;          // canonical_rhs at theta_bar
    std::vector<DensityProfile> weight_profiles;
};

struct EssReport {
    double min_value = 0.0;
    int argmin_index = 0;
    int declared_index = 0;
    double value_at_declared = 0.0;  // |H(theta_m)|
    double slope_at_declared = 0.0;  // |H_theta(theta_m)|
    double tolerance = 0.0;
    bool argmin_matches = true;      // argmin within one cell of the declared theta_m

    bool satisfied() const {
        return std::abs(min_value) < tolerance && value_at_declared < tolerance &&
               slope_at_declared < tolerance && argmin_matches;
    }
};

/// Viscosity solution of |u'|^2 = H with max u = 0: minus the sqrt(H)
/// geodesic distance from the zero of H, taken along the shorter of the
/// two arcs on a periodic grid.
///
/// |min H| below tol_ess is treated as round-off and shifted away;
/// anything larger throws EssViolation.
PotentialFunction solve_constrained_hj(const HamiltonianCurve& h, const TraitGrid& grid,
                                       double tol_ess = 1e-6);

/// Reports how closely min H = 0 = H(theta_m) = H_theta(theta_m) holds.
EssReport check_ess(const HamiltonianCurve& h, const TraitGrid& grid, int declared_index,
                    double tolerance);

/// Centered first difference of H at trait node j (one-sided at dirichlet ends).
double trait_slope(const std::vector<double>& values, const TraitGrid& grid, int j);

/// Largest stable dt for the upwind step: h / (2 max G max |u'| + floor).
double hj_cfl_bound(const PotentialFunction& u, const std::vector<double>& gradient_coeff,
                    const TraitGrid& grid, double floor = 1e-8);

/// One explicit Godunov step of u_t - G |u'|^2 = -H without touching the
/// constraint. Exposed for the monotonicity property.
std::vector<double> transient_hj_update(const std::vector<double>& u, const HamiltonianCurve& h,
                                        const std::vector<double>& gradient_coeff, double dt,
                                        const TraitGrid& grid);

/// transient_hj_update followed by subtraction of the new maximum.
/// Throws std::invalid_argument when dt exceeds hj_cfl_bound.
PotentialFunction step_transient_hj(const PotentialFunction& u, const HamiltonianCurve& h,
                                    const std::vector<double>& gradient_coeff, double dt,
                                    const TraitGrid& grid);

/// Gradient coefficient per trait node selected by hj.gradient_factor.
std::vector<double> gradient_coefficients(const ModelConfig& config);

/// Quasi-static limit dynamics: at each step solve the Fisher-KPP weight at
/// D(theta_bar), build H with rho = N_bar, advance u and move theta_bar to
/// argmax u. dt = 0 picks 0.9 x the CFL bound each step.
TraitTrajectory quasistatic_dynamics(double theta_0, double final_time, double dt,
                                     const ModelConfig& config, bool keep_profiles = false);

/// -(max(-u'', floor))^{-1} H_theta at the node nearest theta_bar.
double canonical_rhs(double theta_bar, const PotentialFunction& u, const HamiltonianCurve& h,
                     double curvature_floor, const TraitGrid& grid);

}  // namespace dispersal
