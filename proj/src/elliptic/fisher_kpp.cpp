#include <limits>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "dispersal/elliptic.hpp"
#include "dispersal/errors.hpp"
#include "dispersal/operators.hpp"
#include "dispersal/tridiagonal.hpp"

namespace dispersal {

namespace {

// F(N) = D L N - N (K - N) on free nodes.
std::vector<double> residual_vector(double d_value, const std::vector<double>& n,
                                    const std::vector<double>& k, const TridiagonalRows& lap) {
    const std::size_t m = n.size();
    std::vector<double> f(m);
    for (std::size_t i = 0; i < m; ++i) {
        double ln = lap.diag[i] * n[i];
        if (i > 0) ln += lap.lower[i] * n[i - 1];
        if (i + 1 < m) ln += lap.upper[i] * n[i + 1];
        f[i] = d_value * ln - n[i] * (k[i] - n[i]);
    }
    return f;
}

double max_abs(const std::vector<double>& v) {
    double r = 0.0;
    for (double x : v) r = std::max(r, std::abs(x));
    return std::isfinite(r) ? r : std::numeric_limits<double>::infinity();
}

// Linearly implicit pseudo-time march: positivity preserving for any tau.
bool pseudo_time(double d_value, std::vector<double>& n, const std::vector<double>& k,
                 const TridiagonalRows& lap, double tol, int max_steps) {
    const std::size_t m = n.size();
    double tau = 1e-2;
    double r = max_abs(residual_vector(d_value, n, k, lap));
    for (int step = 0; step < max_steps && r >= tol; ++step) {
        std::vector<double> lo(m), di(m), up(m), rhs(m);
        for (std::size_t i = 0; i < m; ++i) {
            lo[i] = d_value * lap.lower[i];
            up[i] = d_value * lap.upper[i];
            di[i] = 1.0 / tau + d_value * lap.diag[i] + n[i];
            rhs[i] = n[i] / tau + k[i] * n[i];
        }
        auto next = solve_tridiagonal(lo, di, up, rhs);
        const double r_next = max_abs(residual_vector(d_value, next, k, lap));
        n = std::move(next);
        tau = r_next < r ? std::min(tau * 1.5, 1e8) : std::max(tau * 0.5, 1e-6);
        r = r_next;
    }
    return r < tol;
}

}  // namespace

double fisher_kpp_residual(double d_value, const DensityProfile& n, const DensityProfile& capacity,
                           const SpatialGrid& grid) {
    const int b = free_begin(grid);
    const int m = free_count(grid);
    std::vector<double> nf(n.values.begin() + b, n.values.begin() + b + m);
    std::vector<double> kf(capacity.values.begin() + b, capacity.values.begin() + b + m);
    return max_abs(residual_vector(d_value, nf, kf, negative_laplacian(grid)));
}

DensityProfile solve_fisher_kpp(double d_value, const DensityProfile& capacity,
                                const SpatialGrid& grid, const SolverSettings& settings) {
    if (static_cast<int>(capacity.size()) != grid.size())
        throw std::invalid_argument("fisher-kpp: K does not match the spatial grid");
    if (!(d_value >= 0.0)) throw std::invalid_argument("fisher-kpp: D must be nonnegative");

    const int b = free_begin(grid);
    const int m = free_count(grid);
    const auto lap = negative_laplacian(grid);
    std::vector<double> k(capacity.values.begin() + b, capacity.values.begin() + b + m);
    std::vector<double> n = k;
    const double tol = settings.newton_tol;

    auto f = residual_vector(d_value, n, k, lap);
    double r = max_abs(f);
    bool newton_ok = true;
    for (int it = 0; it < settings.newton_max_iter && r >= tol; ++it) {
        std::vector<double> lo(m), di(m), up(m), rhs(m);
        for (int i = 0; i < m; ++i) {
            lo[i] = d_value * lap.lower[i];
            up[i] = d_value * lap.upper[i];
            di[i] = d_value * lap.diag[i] - k[i] + 2.0 * n[i];
            rhs[i] = -f[i];
        }
        const auto delta = solve_tridiagonal(lo, di, up, rhs);

        double lambda = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= 30; ++halving, lambda *= 0.5) {
            std::vector<double> trial(m);
            bool positive = true;
            for (int i = 0; i < m; ++i) {
                trial[i] = n[i] + lambda * delta[i];
                positive = positive && trial[i] > 0.0;
            }
            if (!positive) continue;
            auto f_trial = residual_vector(d_value, trial, k, lap);
            const double r_trial = max_abs(f_trial);
            if (r_trial < r) {
                n = std::move(trial);
                f = std::move(f_trial);
                r = r_trial;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            newton_ok = false;
            break;
        }
    }

    if (r >= tol && !newton_ok) {
        // Newton stalled; march in pseudo-time then polish with Newton steps.
        pseudo_time(d_value, n, k, lap, std::max(tol, 1e-3), 200000);
        f = residual_vector(d_value, n, k, lap);
        r = max_abs(f);
        for (int it = 0; it < settings.newton_max_iter && r >= tol; ++it) {
            std::vector<double> lo(m), di(m), up(m), rhs(m);
            for (int i = 0; i < m; ++i) {
                lo[i] = d_value * lap.lower[i];
                up[i] = d_value * lap.upper[i];
                di[i] = d_value * lap.diag[i] - k[i] + 2.0 * n[i];
                rhs[i] = -f[i];
            }
            const auto delta = solve_tridiagonal(lo, di, up, rhs);
            for (int i = 0; i < m; ++i) n[i] += delta[i];
            f = residual_vector(d_value, n, k, lap);
            r = max_abs(f);
        }
    }
    if (!(r < tol))
        throw SolverError(fmt::format("fisher-kpp solve did not converge (D = {}, residual {:.3e})",
                                      d_value, r),
                          r);
    const double k_max = *std::max_element(k.begin(), k.end());
    const double n_max = *std::max_element(n.begin(), n.end());
    const double n_min = *std::min_element(n.begin(), n.end());
    if (!(n_min > 0.0) || n_max < 1e-6 * k_max)
        throw SolverError(fmt::format("fisher-kpp: no positive solution at D = {} (max N = {:.3e})",
                                      d_value, n_max),
                          r);

    DensityProfile out(static_cast<std::size_t>(grid.size()), 0.0);
    std::copy(n.begin(), n.end(), out.values.begin() + b);
    return out;
}

}  // namespace dispersal
