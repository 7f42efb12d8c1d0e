#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <random>

#include "dispersal/elliptic.hpp"
#include "dispersal/errors.hpp"
#include "dispersal/hj.hpp"

using namespace dispersal;

namespace {

constexpr double pi = std::numbers::pi;

HamiltonianCurve curve_from(std::vector<double> values) {
    HamiltonianCurve h;
    h.values = std::move(values);
    h.argmin_index = static_cast<int>(std::min_element(h.values.begin(), h.values.end()) - h.values.begin());
    return h;
}

HamiltonianCurve sine_squared(const TraitGrid& g, double theta_m) {
    std::vector<double> v(g.size());
    for (int j = 0; j < g.size(); ++j) {
        const double s = std::sin(pi * (g.node(j) - theta_m));
        v[j] = 4 * pi * pi * s * s;
    }
    return curve_from(v);
}

// Dijkstra on the trait graph with trapezoid edge costs h (sqrt H_a + sqrt H_b) / 2.
std::vector<double> marching_distance(const HamiltonianCurve& h, const TraitGrid& g, int source) {
    const int n = g.size();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[source] = 0.0;
    queue.push({0.0, source});
    while (!queue.empty()) {
        const auto [d, j] = queue.top();
        queue.pop();
        if (d > dist[j]) continue;
        for (int off : {-1, 1}) {
            const int k = g.neighbor(j, off);
            if (k < 0) continue;
            const double cost = 0.5 * g.spacing() *
                                (std::sqrt(std::max(h.values[j], 0.0)) + std::sqrt(std::max(h.values[k], 0.0)));
            if (d + cost < dist[k]) {
                dist[k] = d + cost;
                queue.push({dist[k], k});
            }
        }
    }
    return dist;
}

ModelConfig periodic_config() {
    ModelConfig c;
    c.spatial = SpatialGrid(1.0, 61, SpatialBc::neumann);
    c.trait = TraitGrid(50, TraitBc::periodic);
    c.dispersal = TraitFunction::cosine(0.5, 0.4);
    c.capacity = SpatialFunction::hump(1.0, 20.0, 8.0);
    return c;
}

ModelConfig increasing_config() {
    ModelConfig c;
    c.spatial = SpatialGrid(1.0, 61, SpatialBc::neumann);
    c.trait = TraitGrid(51, TraitBc::dirichlet);
    c.dispersal = TraitFunction::linear(0.2, 1.5);
    c.capacity = SpatialFunction::hump(1.0, 20.0, 8.0);
    c.hj.initial_curvature = 5.0;
    c.hj.stall_steps = 1000;
    return c;
}

}  // namespace

TEST_CASE("zero Hamiltonian gives the zero potential") {
    const TraitGrid g(32, TraitBc::periodic);
    const auto u = solve_constrained_hj(curve_from(std::vector<double>(32, 0.0)), g);
    for (double v : u.values) CHECK(v == 0.0);
}

TEST_CASE("closed-form potential for a sine-squared Hamiltonian") {
    double previous = 0.0;
    for (int n : {64, 128, 256}) {
        const TraitGrid g(n, TraitBc::periodic);
        const double theta_m = 0.5;
        const auto u = solve_constrained_hj(sine_squared(g, theta_m), g);
        double err = 0.0;
        for (int j = 0; j < n; ++j) {
            const double exact = -2.0 * (1.0 - std::cos(pi * circle_distance(g.node(j), theta_m)));
            err = std::max(err, std::abs(u.values[j] - exact));
        }
        CHECK(err < 2.0 * g.spacing());
        if (previous > 0.0) CHECK(previous / err > 1.8);
        previous = err;
        CHECK(u.argmax_index == g.nearest(theta_m));
    }
}

TEST_CASE("two-arc formula agrees with shortest paths on the trait graph") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const TraitGrid g(40 + trial, TraitBc::periodic);
        std::vector<double> v(g.size());
        for (auto& x : v) x = 0.05 + u(rng);
        const int m = trial % g.size();
        v[m] = 0.0;
        const auto h = curve_from(v);
        const auto pot = solve_constrained_hj(h, g);
        const auto dist = marching_distance(h, g, m);
        for (int j = 0; j < g.size(); ++j) CHECK(pot.values[j] == doctest::Approx(-dist[j]).epsilon(1e-12));
        CHECK(pot.argmax_index == m);
        for (int j = 0; j < g.size(); ++j)
            if (j != m) CHECK(pot.values[j] < 0.0);
    }
}

TEST_CASE("dirichlet trait grid integrates inside the interval only") {
    const TraitGrid g(21, TraitBc::dirichlet);
    std::vector<double> v(21, 1.0);
    v[2] = 0.0;
    const auto h = curve_from(v);
    const auto pot = solve_constrained_hj(h, g);
    const auto dist = marching_distance(h, g, 2);
    for (int j = 0; j < 21; ++j) CHECK(pot.values[j] == doctest::Approx(-dist[j]).epsilon(1e-12));
}

TEST_CASE("upwind differences reproduce the eikonal relation to first order") {
    const TraitGrid g(200, TraitBc::periodic);
    const double theta_m = 0.3;
    const auto h = sine_squared(g, theta_m);
    const auto pot = solve_constrained_hj(h, g);
    const int m = pot.argmax_index;
    for (int j = 0; j < g.size(); ++j) {
        if (std::abs(j - m) <= 1 || std::abs(j - m) >= g.size() - 1) continue;
        // Characteristics leave theta_m, so the upwind neighbour is the one closer to it.
        const int back = g.distance(g.node(g.neighbor(j, -1)), theta_m) < g.distance(g.node(j), theta_m)
                             ? g.neighbor(j, -1)
                             : g.neighbor(j, 1);
        const double slope = std::abs(pot.values[j] - pot.values[back]) / g.spacing();
        if (std::abs(circle_distance(g.node(j), theta_m) - 0.5) < 2 * g.spacing()) continue;
        CHECK(std::abs(slope - std::sqrt(h.values[j])) < 10.0 * g.spacing());
    }
}

TEST_CASE("periodic closure: both arcs meet at the antipode") {
    const TraitGrid g(101, TraitBc::periodic);
    std::vector<double> v(101);
    for (int j = 0; j < 101; ++j) v[j] = 1.0 - std::cos(2 * pi * (g.node(j) - 0.2)) + 0.3 * std::sin(2 * pi * g.node(j));
    const double lo = *std::min_element(v.begin(), v.end());
    for (auto& x : v) x -= lo;
    const auto pot = solve_constrained_hj(curve_from(v), g);
    // Around the full circle the potential stays continuous: neighbouring values differ by O(h).
    double jump = 0.0;
    for (int j = 0; j < 101; ++j) jump = std::max(jump, std::abs(pot.values[g.neighbor(j, 1)] - pot.values[j]));
    CHECK(jump < 2.0 * g.spacing() * std::sqrt(*std::max_element(v.begin(), v.end())));
}

TEST_CASE("ESS constraint: tolerance shift and violation") {
    const TraitGrid g(64, TraitBc::periodic);
    auto h = sine_squared(g, 0.5);
    for (auto& v : h.values) v += 5e-7;
    const auto pot = solve_constrained_hj(h, g, 1e-6);
    CHECK(pot.values[pot.argmax_index] == 0.0);

    auto bad = sine_squared(g, 0.5);
    for (auto& v : bad.values) v += 0.3;
    CHECK_THROWS_WITH_AS(solve_constrained_hj(bad, g, 1e-6),
                         doctest::Contains("ESS constraint violated: min H = 0.3"), EssViolation);
}

TEST_CASE("check_ess reports the triple identity") {
    const TraitGrid g(64, TraitBc::periodic);
    const auto h = sine_squared(g, 0.5);
    const auto ok = check_ess(h, g, g.nearest(0.5), 1e-6);
    CHECK(ok.satisfied());

    auto shifted = h;
    for (auto& v : shifted.values) v += 0.3;
    const auto up = check_ess(shifted, g, g.nearest(0.5), 1e-6);
    CHECK(up.min_value == doctest::Approx(0.3));
    CHECK_FALSE(up.satisfied());

    const auto wrong = check_ess(h, g, g.nearest(0.2), 1e-6);
    CHECK_FALSE(wrong.argmin_matches);
    CHECK_FALSE(wrong.satisfied());
}

TEST_CASE("transient step: fixed point and flat start") {
    const TraitGrid g(64, TraitBc::periodic);
    const std::vector<double> ones(64, 1.0);
    PotentialFunction zero{std::vector<double>(64, 0.0), 0};
    const auto flat = curve_from(std::vector<double>(64, 0.0));
    const auto same = step_transient_hj(zero, flat, ones, 0.01, g);
    for (double v : same.values) CHECK(v == 0.0);

    const auto h = sine_squared(g, 0.5);
    const double dt = 0.003;
    const auto stepped = step_transient_hj(zero, h, ones, dt, g);
    for (int j = 0; j < 64; ++j) CHECK(stepped.values[j] == doctest::Approx(-dt * h.values[j]).epsilon(1e-13));
    CHECK(stepped.argmax_index == g.nearest(0.5));
}

TEST_CASE("transient step rejects a CFL violation") {
    const TraitGrid g(64, TraitBc::periodic);
    const std::vector<double> ones(64, 1.0);
    const auto h = sine_squared(g, 0.5);
    const auto u = solve_constrained_hj(h, g);
    const double bound = hj_cfl_bound(u, ones, g);
    CHECK_NOTHROW(step_transient_hj(u, h, ones, bound, g));
    CHECK_THROWS_AS(step_transient_hj(u, h, ones, 2.0 * bound, g), std::invalid_argument);
}

TEST_CASE("stationary potential is nearly fixed under the transient step") {
    std::vector<double> scaled;
    for (int n : {100, 200, 400}) {
        const TraitGrid g(n, TraitBc::periodic);
        const std::vector<double> ones(n, 1.0);
        const auto h = sine_squared(g, 0.5);
        const auto u = solve_constrained_hj(h, g);
        const double dt = 0.5 * hj_cfl_bound(u, ones, g);
        const auto next = step_transient_hj(u, h, ones, dt, g);
        double change = 0.0;
        for (int j = 0; j < n; ++j) change = std::max(change, std::abs(next.values[j] - u.values[j]));
        scaled.push_back(change / dt);
    }
    CHECK(scaled[1] < 0.6 * scaled[0]);
    CHECK(scaled[2] < 0.6 * scaled[1]);
}

TEST_CASE("transient update is monotone on random ordered pairs") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const TraitGrid g(48, TraitBc::periodic);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> u1(48), u2(48), hv(48), coeff(48);
        for (int j = 0; j < 48; ++j) {
            u1[j] = -2.0 * unit(rng);
            u2[j] = u1[j] + 0.5 * unit(rng);
            hv[j] = 4.0 * unit(rng) - 1.0;
            coeff[j] = 0.2 + unit(rng);
        }
        const auto h = curve_from(hv);
        const double dt = 0.9 * std::min(hj_cfl_bound({u1, 0}, coeff, g), hj_cfl_bound({u2, 0}, coeff, g));
        const auto a = transient_hj_update(u1, h, coeff, dt, g);
        const auto b = transient_hj_update(u2, h, coeff, dt, g);
        for (int j = 0; j < 48; ++j) CHECK(a[j] <= b[j] + 1e-14);
    }
}

TEST_CASE("gradient coefficient follows the config switch") {
    auto c = periodic_config();
    c.hj.gradient_factor = GradientFactor::one;
    for (double v : gradient_coefficients(c)) CHECK(v == 1.0);
    c.hj.gradient_factor = GradientFactor::dispersal;
    const auto d = c.dispersal_samples();
    CHECK(gradient_coefficients(c) == d);
}

TEST_CASE("canonical rhs for a quadratic potential and a linear Hamiltonian") {
    const TraitGrid g(100, TraitBc::periodic);
    const double a = 3.0;
    const double slope = 0.8;
    const double theta_bar = g.node(40);
    PotentialFunction u;
    std::vector<double> hv(100);
    for (int j = 0; j < 100; ++j) {
        const double d = g.node(j) - theta_bar;
        u.values.push_back(-a * d * d);
        hv[j] = 1.0 + slope * d;
    }
    u.argmax_index = 40;
    HamiltonianCurve h{hv, 0, {}};
    CHECK(canonical_rhs(theta_bar, u, h, 1e-2, g) == doctest::Approx(-slope / (2 * a)).epsilon(1e-10));

    // Flat potential: the floor takes over and keeps the sign.
    PotentialFunction flat{std::vector<double>(100, 0.0), 40};
    CHECK(canonical_rhs(theta_bar, flat, h, 1e-2, g) == doctest::Approx(-slope / 1e-2).epsilon(1e-8));
}

TEST_CASE("canonical rhs has the sign of minus the slope") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const TraitGrid g(64, TraitBc::periodic);
    for (int trial = 0; trial < 50; ++trial) {
        PotentialFunction u;
        std::vector<double> hv(64);
        const int bar = 10 + trial % 40;
        const double a = 0.5 + std::abs(unit(rng));
        for (int j = 0; j < 64; ++j) {
            const double d = g.distance(g.node(j), g.node(bar));
            u.values.push_back(-a * d * d + 0.01 * unit(rng) * d * d);
            hv[j] = unit(rng);
        }
        u.argmax_index = bar;
        HamiltonianCurve h{hv, 0, {}};
        const double rhs = canonical_rhs(g.node(bar), u, h, 1e-2, g);
        const double hs = trait_slope(hv, g, bar);
        if (hs != 0.0) CHECK((rhs > 0.0) == (hs < 0.0));
    }
}

TEST_CASE("quasi-static dynamics started at the minimiser stays there") {
    const auto c = periodic_config();
    const auto traj = quasistatic_dynamics(0.5, 1.0, 0.0, c);
    for (double th : traj.fittest_trait) CHECK(th == doctest::Approx(0.5));
    for (double hv : traj.hamiltonian_at_fittest) CHECK(std::abs(hv) < 1e-8);
}

TEST_CASE("quasi-static dynamics with increasing D moves down") {
    const auto c = increasing_config();
    const auto traj = quasistatic_dynamics(0.7, 0.5, 0.0, c, true);
    REQUIRE(traj.times.size() > 10);
    for (std::size_t s = 6; s < traj.fittest_trait.size(); ++s)
        CHECK(traj.fittest_trait[s] <= traj.fittest_trait[s - 1]);
    CHECK(traj.fittest_trait.back() < 0.7);
    for (std::size_t s = 1; s < traj.times.size(); ++s) CHECK(traj.times[s] > traj.times[s - 1]);
    for (double hv : traj.hamiltonian_at_fittest) CHECK(std::abs(hv) < 1e-8);
    CHECK(traj.weight_profiles.size() == traj.times.size());
    CHECK_THROWS_AS(quasistatic_dynamics(1.2, 0.5, 0.0, c), std::invalid_argument);
}
