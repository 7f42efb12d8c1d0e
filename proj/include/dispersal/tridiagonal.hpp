#pragma once

#include <span>
#include <limits>
#include <vector>

namespace dispersal {

/// Thomas algorithm. Row i reads lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1];
/// lower[0] and upper[n-1] are ignored. No pivoting: intended for
/// diagonally dominant or M-matrix systems.
std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

/// Periodic variant: lower[0] couples x[n-1] into row 0 and upper[n-1]
/// couples x[0] into row n-1. Sherman-Morrison on top of the Thomas sweep.
std::vector<double> solve_cyclic_tridiagonal(std::span<const double> lower,
                                             std::span<const double> diag,
                                             std::span<const double> upper,
                                             std::span<const double> rhs);

/// Symmetric tridiagonal matrix, optionally with the periodic corner entries.
struct SymmetricTridiagonal {
    std::vector<double> diag;
    std::vector<double> off;  // off[i] couples i and i+1, size n-1
    double corner = 0.0;      // couples 0 and n-1 when cyclic
    bool cyclic = false;

    std::size_t size() const noexcept { return diag.size(); }
    std::vector<double> apply(std::span<const double> v) const;
    /// Solves (A - shift I) x = rhs.
    std::vector<double> solve_shifted(double shift, std::span<const double> rhs) const;
    /// Lower bound on the spectrum from Gershgorin discs.
    double gershgorin_lower() const;
};

struct EigenIteration {
    std::vector<double> vector;  // unit 2-norm, sign fixed so the sum is positive
    double value = 0.0;
    double residual = 0.0;  // max-norm of (A v - value v), scaled by residual_scale
    int iterations = 0;
};

/// Smallest eigenpair by shifted inverse iteration. The shift starts below
/// the Gershgorin bound and switches to the Rayleigh quotient once the
/// residual drops under switch_tol. Throws SolverError at the iteration cap.
///
/// residual_scale, when non-empty, multiplies the residual componentwise
/// before the norm is taken (used to report residuals in unsymmetrized
/// variables). lower_bound, when finite, is a known lower bound on the
/// spectrum that is tighter than Gershgorin (e.g. from a similar matrix).
EigenIteration smallest_eigenpair(const SymmetricTridiagonal& a, std::vector<double> start,
                                  double tol, int max_iter,
                                  std::span<const double> residual_scale = {},
                                  double switch_tol = 1e-3,
                                  double lower_bound = -std::numeric_limits<double>::infinity());

}  // namespace dispersal
