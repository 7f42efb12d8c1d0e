#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "dispersal/elliptic.hpp"
#include "dispersal/errors.hpp"
#include "dispersal/operators.hpp"
#include "dispersal/quadrature.hpp"

using namespace dispersal;

namespace {

constexpr double pi = std::numbers::pi;

DensityProfile figure1_capacity(const SpatialGrid& g) {
    return DensityProfile(SpatialFunction::hump(1.0, 20.0, 8.0).sample(g));
}

ModelConfig monotone_config(int n_x, int n_theta) {
    ModelConfig c;
    c.spatial = SpatialGrid(1.0, n_x, SpatialBc::neumann);
    c.trait = TraitGrid(n_theta, TraitBc::periodic);
    c.dispersal = TraitFunction::cosine(0.5, 0.4);
    c.capacity = SpatialFunction::hump(1.0, 20.0, 8.0);
    return c;
}

// Residual of -D Lap N - N (K - rho) - H N, written out independently of the solver.
double eigen_residual(const EigenPair& e, double d, const DensityProfile& rho,
                      const DensityProfile& k, const SpatialGrid& g) {
    const int n = g.size();
    const double h2 = g.spacing() * g.spacing();
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const double left = i > 0 ? e.eigenfunction[i - 1] : e.eigenfunction[1];
        const double right = i + 1 < n ? e.eigenfunction[i + 1] : e.eigenfunction[n - 2];
        const double lap = (left - 2 * e.eigenfunction[i] + right) / h2;
        const double r = -d * lap - e.eigenfunction[i] * (k[i] - rho[i]) - e.eigenvalue * e.eigenfunction[i];
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

}  // namespace

TEST_CASE("weighted discrete Laplacian is symmetric and pairs with the gradient energy") {
    const SpatialGrid g(1.0, 21, SpatialBc::neumann);
    const auto rows = negative_laplacian(g);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> f(21), q(21);
    for (auto& v : f) v = u(rng);
    for (auto& v : q) v = u(rng);
    auto apply = [&](const std::vector<double>& v) {
        std::vector<double> out(21);
        for (int i = 0; i < 21; ++i) {
            out[i] = rows.diag[i] * v[i];
            if (i > 0) out[i] += rows.lower[i] * v[i - 1];
            if (i < 20) out[i] += rows.upper[i] * v[i + 1];
        }
        return out;
    };
    const auto af = apply(f);
    const auto aq = apply(q);
    double fq = 0.0, qf = 0.0, ff = 0.0;
    for (int i = 0; i < 21; ++i) {
        fq += g.weight(i) * af[i] * q[i];
        qf += g.weight(i) * aq[i] * f[i];
        ff += g.weight(i) * af[i] * f[i];
    }
    CHECK(fq == doctest::Approx(qf).epsilon(1e-12));
    CHECK(ff == doctest::Approx(gradient_energy(f, g)).epsilon(1e-12));
}

TEST_CASE("Fisher-KPP: constant capacity gives the constant solution") {
    const SpatialGrid g(1.0, 51, SpatialBc::neumann);
    const DensityProfile k(51, 3.5);
    const auto n = solve_fisher_kpp(0.7, k, g);
    for (double v : n.values) CHECK(v == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("Fisher-KPP: integrated identity and residual with the hump capacity") {
    const SpatialGrid g(1.0, 201, SpatialBc::neumann);
    const auto k = figure1_capacity(g);
    for (double d : {0.05, 0.5, 3.0}) {
        const auto n = solve_fisher_kpp(d, k, g);
        CHECK(fisher_kpp_residual(d, n, k, g) < 1e-8);
        CHECK(n.min() > 0.0);
        // Trapezoid sum of N (K - N), accumulated here rather than through the library.
        double s = 0.0;
        double scale = 0.0;
        for (int i = 0; i < g.size(); ++i) {
            const double w = (i == 0 || i == g.size() - 1) ? 0.5 * g.spacing() : g.spacing();
            s += w * n[i] * (k[i] - n[i]);
            scale += w * n[i] * n[i];
        }
        CHECK(std::abs(s) < 1e-9 * scale);
    }
}

TEST_CASE("Fisher-KPP flattens as diffusion grows") {
    const SpatialGrid g(1.0, 201, SpatialBc::neumann);
    const auto k = figure1_capacity(g);
    double previous = std::numeric_limits<double>::infinity();
    for (double d : {0.1, 1.0, 10.0}) {
        const auto n = solve_fisher_kpp(d, k, g);
        const double osc = n.max() - n.min();
        CHECK(osc < previous);
        previous = osc;
    }
}

TEST_CASE("Fisher-KPP on a dirichlet domain stays positive inside") {
    const SpatialGrid g(1.0, 101, SpatialBc::dirichlet);
    const auto k = figure1_capacity(g);
    const auto n = solve_fisher_kpp(0.2, k, g);
    CHECK(n[0] == 0.0);
    CHECK(n[100] == 0.0);
    for (int i = 1; i < 100; ++i) CHECK(n[i] > 0.0);
    CHECK(fisher_kpp_residual(0.2, n, k, g) < 1e-8);
    // Fisher-KPP with killing at the boundary has no positive state once D is too large.
    CHECK_THROWS_AS(solve_fisher_kpp(50.0, DensityProfile(101, 1.0), g), SolverError);
}

TEST_CASE("principal eigenpair: zero and constant potentials") {
    const SpatialGrid g(2.0, 81, SpatialBc::neumann);
    const auto k = DensityProfile(SpatialFunction::cosine(3.0, 1.0).sample(g));
    const auto e0 = principal_eigenpair_at(0.8, k, k, g);
    CHECK(std::abs(e0.eigenvalue) < 1e-10);
    for (double v : e0.eigenfunction.values) CHECK(v == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));

    DensityProfile shifted = k;
    for (auto& v : shifted.values) v -= 0.6;
    const auto e1 = principal_eigenpair_at(0.8, shifted, k, g);
    CHECK(e1.eigenvalue == doctest::Approx(-0.6).epsilon(1e-10));
    for (double v : e1.eigenfunction.values) CHECK(v == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("principal eigenpair: bounds, normalization, positivity, Rayleigh quotient") {
    const SpatialGrid g(1.0, 201, SpatialBc::neumann);
    const auto k = figure1_capacity(g);
    const DensityProfile rho(201, 0.0);
    const auto e = principal_eigenpair_at(1.0, rho, k, g);
    CHECK(e.eigenvalue >= -21.0);
    CHECK(e.eigenvalue <= 0.0);
    CHECK(e.eigenfunction.min() > 0.0);
    std::vector<double> sq(201);
    for (int i = 0; i < 201; ++i) sq[i] = e.eigenfunction[i] * e.eigenfunction[i];
    CHECK(integrate_space(sq, g) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eigen_residual(e, 1.0, rho, k, g) < 1e-8);
    CHECK(rayleigh_quotient(e.eigenfunction, 1.0, rho, k, g) == doctest::Approx(e.eigenvalue).epsilon(1e-10));
}

TEST_CASE("principal eigenpair: random potentials stay within the bounds") {
    const SpatialGrid g(1.0, 101, SpatialBc::neumann);
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        DensityProfile k(101, 0.0), rho(101, 0.0);
        for (int i = 0; i < 101; ++i) {
            k[i] = 0.5 + 10 * u(rng);
            rho[i] = 10 * u(rng);
        }
        const double d = 0.01 + 2 * u(rng);
        const auto e = principal_eigenpair_at(d, rho, k, g);
        const auto b = hamiltonian_bounds(rho, k, g);
        CHECK(b.contains(e.eigenvalue));
        CHECK(e.eigenfunction.min() > 0.0);
        CHECK(eigen_residual(e, d, rho, k, g) < 1e-7);
    }
}

TEST_CASE("hamiltonian curve: constant D gives a flat curve") {
    auto c = monotone_config(101, 32);
    c.dispersal = TraitFunction::constant(0.7);
    const DensityProfile rho(101, 2.0);
    const auto h = hamiltonian_curve(rho, c);
    for (double v : h.values) CHECK(v == doctest::Approx(h.values[0]).epsilon(1e-10));
}

TEST_CASE("hamiltonian curve follows the monotonicity of D") {
    const auto c = monotone_config(201, 64);
    const auto k = DensityProfile(c.capacity_samples());
    const auto nm = solve_fisher_kpp(c.dispersal_min(), k, c.spatial);
    const auto h = hamiltonian_curve(nm, c);
    CHECK(std::abs(h.argmin_index - c.trait.nearest(0.5)) <= 1);
    const auto d = c.dispersal_samples();
    for (int j = 0; j + 1 < 64; ++j) {
        if (d[j + 1] > d[j]) CHECK(h.values[j + 1] >= h.values[j] - 1e-10);
        if (d[j + 1] < d[j]) CHECK(h.values[j + 1] <= h.values[j] + 1e-10);
    }
    const auto b = hamiltonian_bounds(nm, k, c.spatial);
    for (double v : h.values) CHECK(b.contains(v));
    CHECK(std::abs(h.min()) < 1e-9);
}

TEST_CASE("threaded hamiltonian curve agrees with the sequential sweep") {
    auto c = monotone_config(101, 40);
    const auto k = DensityProfile(c.capacity_samples());
    const auto a = hamiltonian_curve(k, c);
    c.solver.threads = 4;
    const auto b = hamiltonian_curve(k, c);
    for (int j = 0; j < 40; ++j) CHECK(b.values[j] == doctest::Approx(a.values[j]).epsilon(1e-9));
}

TEST_CASE("slope identity degenerates for constant D or constant K") {
    auto c = monotone_config(101, 64);
    c.dispersal = TraitFunction::constant(0.6);
    const DensityProfile rho(101, 1.0);
    auto s = hamiltonian_slope_identity(16, rho, c);
    CHECK(std::abs(s.lhs) < 1e-12);
    CHECK(std::abs(s.rhs) < 1e-8);

    c = monotone_config(101, 64);
    c.capacity = SpatialFunction::constant(4.0);
    s = hamiltonian_slope_identity(16, DensityProfile(101, 2.0), c);
    CHECK(std::abs(s.lhs) < 1e-10);
    CHECK(std::abs(s.rhs) < 1e-8);
}

TEST_CASE("slope identity at 200 x 200 against a Richardson-extrapolated difference") {
    const auto c200 = monotone_config(200, 200);
    const auto k = DensityProfile(c200.capacity_samples());
    const auto nm = solve_fisher_kpp(c200.dispersal_min(), k, c200.spatial);
    const auto coarse = hamiltonian_slope_identity(c200.trait.nearest(0.25), nm, c200);
    CHECK(std::abs(coarse.lhs - coarse.rhs) / std::abs(coarse.rhs) < 1e-3);

    const auto c400 = monotone_config(200, 400);
    const auto fine = hamiltonian_slope_identity(c400.trait.nearest(0.25), nm, c400);
    const double extrapolated = (4.0 * fine.rhs - coarse.rhs) / 3.0;
    CHECK(std::abs(coarse.lhs - extrapolated) / std::abs(extrapolated) < 1e-5);
    CHECK(fine.lhs == doctest::Approx(coarse.lhs).epsilon(1e-14));
}

TEST_CASE("trait eigenpair: zero, constant and concentrating potentials") {
    const TraitGrid g(128, TraitBc::periodic);
    HamiltonianCurve zero{std::vector<double>(128, 0.0), 0, {}};
    auto w = trait_eigenpair(zero, 0.05, g);
    CHECK(std::abs(w.eigenvalue) < 1e-12);
    for (double v : w.eigenfunction) CHECK(v == doctest::Approx(1.0).epsilon(1e-8));

    HamiltonianCurve flat{std::vector<double>(128, 0.37), 5, {}};
    w = trait_eigenpair(flat, 0.05, g);
    CHECK(w.eigenvalue == doctest::Approx(0.37).epsilon(1e-10));

    HamiltonianCurve well;
    for (int j = 0; j < 128; ++j) well.values.push_back(1.0 - std::cos(2 * pi * (g.node(j) - 0.5)));
    well.argmin_index = 64;
    double previous = std::numeric_limits<double>::infinity();
    for (double eps : {0.1, 0.05, 0.025}) {
        w = trait_eigenpair(well, eps, g);
        CHECK(std::abs(w.eigenvalue) < previous);
        previous = std::abs(w.eigenvalue);
        CHECK(*std::max_element(w.eigenfunction.begin(), w.eigenfunction.end()) == 1.0);
        CHECK(*std::min_element(w.eigenfunction.begin(), w.eigenfunction.end()) > 0.0);
        // Harmonic approximation: lambda ~ eps sqrt(H''/2) with H'' = 4 pi^2.
        CHECK(w.eigenvalue == doctest::Approx(eps * std::sqrt(2.0) * pi).epsilon(0.1));
    }
    CHECK_THROWS_AS(trait_eigenpair(well, 0.05, TraitGrid(128, TraitBc::dirichlet)), std::invalid_argument);
}
