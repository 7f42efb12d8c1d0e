#include "dispersal/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "dispersal/errors.hpp"

namespace dispersal {

std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs) {
    const std::size_t n = diag.size();
    if (lower.size() != n || upper.size() != n || rhs.size() != n)
        throw std::invalid_argument("tridiagonal: size mismatch");
    std::vector<double> c(n);
    std::vector<double> x(n);
    c[0] = upper[0] / diag[0];
    x[0] = rhs[0] / diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double factor = 1.0 / (diag[i] - lower[i] * c[i - 1]);
        c[i] = upper[i] * factor;
        x[i] = (rhs[i] - lower[i] * x[i - 1]) * factor;
    }
    for (std::size_t i = n - 1; i > 0; --i) x[i - 1] -= c[i - 1] * x[i];
    return x;
}

std::vector<double> solve_cyclic_tridiagonal(std::span<const double> lower,
                                             std::span<const double> diag,
                                             std::span<const double> upper,
                                             std::span<const double> rhs) {
    const std::size_t n = diag.size();
    if (n < 3) throw std::invalid_argument("cyclic tridiagonal: need n >= 3");
    const double alpha = upper[n - 1];  // row n-1, column 0
    const double beta = lower[0];       // row 0, column n-1
    const double gamma = -diag[0];

    std::vector<double> bb(diag.begin(), diag.end());
    bb[0] = diag[0] - gamma;
    bb[n - 1] = diag[n - 1] - alpha * beta / gamma;

    std::vector<double> lo(lower.begin(), lower.end());
    std::vector<double> up(upper.begin(), upper.end());
    lo[0] = 0.0;
    up[n - 1] = 0.0;

    auto x = solve_tridiagonal(lo, bb, up, rhs);
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = alpha;
    const auto z = solve_tridiagonal(lo, bb, up, u);
    const double fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
    return x;
}

std::vector<double> SymmetricTridiagonal::apply(std::span<const double> v) const {
    const std::size_t n = size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = diag[i] * v[i];
        if (i > 0) s += off[i - 1] * v[i - 1];
        if (i + 1 < n) s += off[i] * v[i + 1];
        out[i] = s;
    }
    if (cyclic) {
        out[0] += corner * v[n - 1];
        out[n - 1] += corner * v[0];
    }
    return out;
}

std::vector<double> SymmetricTridiagonal::solve_shifted(double shift,
                                                        std::span<const double> rhs) const {
    const std::size_t n = size();
    std::vector<double> lo(n, 0.0);
    std::vector<double> up(n, 0.0);
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = diag[i] - shift;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        up[i] = off[i];
        lo[i + 1] = off[i];
    }
    if (cyclic) {
        lo[0] = corner;
        up[n - 1] = corner;
        return solve_cyclic_tridiagonal(lo, d, up, rhs);
    }
    return solve_tridiagonal(lo, d, up, rhs);
}

double SymmetricTridiagonal::gershgorin_lower() const {
    const std::size_t n = size();
    double lo = diag[0];
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(off[i - 1]);
        if (i + 1 < n) r += std::abs(off[i]);
        if (cyclic && (i == 0 || i == n - 1)) r += std::abs(corner);
        lo = std::min(lo, diag[i] - r);
    }
    return lo;
}

namespace {

double normalize(std::vector<double>& v) {
    double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (!(norm > 0.0) || !std::isfinite(norm)) return norm;
    const double sum = std::accumulate(v.begin(), v.end(), 0.0);
    if (sum < 0.0) norm = -norm;
    for (double& x : v) x /= norm;
    return norm;
}

}  // namespace

EigenIteration smallest_eigenpair(const SymmetricTridiagonal& a, std::vector<double> start,
                                  double tol, int max_iter, std::span<const double> residual_scale,
                                  double switch_tol, double lower_bound) {
    const std::size_t n = a.size();
    if (start.size() != n) start.assign(n, 1.0);
    if (!(std::abs(normalize(start)) > 0.0)) {
        start.assign(n, 1.0);
        normalize(start);
    }

    const double base_shift = std::max(a.gershgorin_lower(), lower_bound) - 1.0;
    EigenIteration it;
    it.vector = std::move(start);
    double shift = base_shift;

    auto measure = [&](const std::vector<double>& v, double& value) {
        const auto av = a.apply(v);
        value = std::inner_product(v.begin(), v.end(), av.begin(), 0.0);
        double r = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double ri = av[i] - value * v[i];
            if (!residual_scale.empty()) ri *= residual_scale[i];
            r = std::max(r, std::abs(ri));
        }
        return r;
    };

    it.residual = measure(it.vector, it.value);
    for (it.iterations = 0; it.iterations < max_iter; ++it.iterations) {
        if (it.residual < tol) return it;
        if (it.residual < switch_tol) shift = it.value;

        auto next = a.solve_shifted(shift, it.vector);
        double norm = normalize(next);
        if (!std::isfinite(norm) || norm == 0.0) {
            // Shift landed on an eigenvalue to machine precision: nudge it down.
            shift -= 1e-10 * (1.0 + std::abs(shift));
            next = a.solve_shifted(shift, it.vector);
            norm = normalize(next);
            if (!std::isfinite(norm) || norm == 0.0)
                throw SolverError("inverse iteration produced a non-finite iterate", it.residual);
        }
        it.vector = std::move(next);
        it.residual = measure(it.vector, it.value);
    }
    if (it.residual < tol) return it;
    throw SolverError(fmt::format("inverse iteration did not converge in {} iterations "
                                  "(Rayleigh residual {:.3e})",
                                  max_iter, it.residual),
                      it.residual);
}

}  // namespace dispersal
