#include "dispersal/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace dispersal {

namespace {

bool same(double a, double b, double scale) { return std::abs(a - b) <= 1e-12 * scale; }

Violation error(std::string code, std::string message) {
    return {Violation::Severity::error, std::move(code), std::move(message)};
}

Violation warning(std::string code, std::string message) {
    return {Violation::Severity::warning, std::move(code), std::move(message)};
}

}  // namespace

int ModelConfig::dispersal_argmin() const {
    const auto d = dispersal_samples();
    int best = -1;
    for (int j = 0; j < trait.size(); ++j) {
        if (!trait.is_free(j)) continue;
        if (best < 0 || d[j] < d[best]) best = j;
    }
    return best;
}

double ModelConfig::dispersal_min() const {
    return dispersal_samples()[dispersal_argmin()];
}

std::vector<int> local_minima(const std::vector<double>& v, const TraitGrid& grid) {
    std::vector<int> minima;
    if (v.empty()) return minima;
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    scale = std::max(scale, 1.0);

    if (grid.periodic()) {
        const int n = static_cast<int>(v.size());
        int start = -1;
        for (int j = 0; j < n; ++j)
            if (!same(v[j], v[(j + n - 1) % n], scale)) { start = j; break; }
        if (start < 0) {
            for (int j = 0; j < n; ++j) minima.push_back(j);
            return minima;
        }
        // Walk maximal plateaus beginning at a value change.
        int j = start;
        int visited = 0;
        while (visited < n) {
            int len = 1;
            while (len < n && same(v[(j + len) % n], v[j], scale)) ++len;
            const double left = v[(j + n - 1) % n];
            const double right = v[(j + len) % n];
            if (left > v[j] && right > v[j]) minima.push_back(j);
            visited += len;
            j = (j + len) % n;
        }
        std::sort(minima.begin(), minima.end());
        return minima;
    }

    // Non-periodic: only the free (interior) nodes take part.
    const int lo = 1;
    const int hi = static_cast<int>(v.size()) - 2;
    int j = lo;
    while (j <= hi) {
        int end = j;
        while (end + 1 <= hi && same(v[end + 1], v[j], scale)) ++end;
        const bool left_ok = (j == lo) || v[j - 1] > v[j];
        const bool right_ok = (end == hi) || v[end + 1] > v[j];
        if (left_ok && right_ok) minima.push_back(j);
        j = end + 1;
    }
    return minima;
}

std::vector<Violation> validate_config(const ModelConfig& config) {
    std::vector<Violation> out;

    if (!(config.epsilon > 0.0) || !std::isfinite(config.epsilon))
        out.push_back(error("epsilon", "epsilon must be a positive real"));
    if (config.spatial.size() < 3) out.push_back(error("grid", "n_x must be >= 3"));
    if (config.trait.size() < 3) out.push_back(error("grid", "n_theta must be >= 3"));

    std::vector<double> k;
    try {
        k = config.capacity_samples();
    } catch (const std::exception& e) {
        out.push_back(error("capacity", e.what()));
    }
    if (!k.empty()) {
        const double k_min = *std::min_element(k.begin(), k.end());
        const bool finite = std::all_of(k.begin(), k.end(), [](double x) { return std::isfinite(x); });
        if (!finite || !(k_min > 0.0))
            out.push_back(error("capacity_lower_bound",
                                fmt::format("K not bounded below by positive K_m (min K = {})", k_min)));
        const double k_max = *std::max_element(k.begin(), k.end());
        if (config.capacity.is_constant() || k_max - k_min <= 1e-14 * std::max(1.0, k_max))
            out.push_back(warning("capacity_constant",
                                  "K is constant: selection on dispersal degenerates"));
    }

    std::vector<double> d;
    try {
        d = config.dispersal_samples();
    } catch (const std::exception& e) {
        out.push_back(error("dispersal", e.what()));
    }
    if (!d.empty()) {
        double d_min = std::numeric_limits<double>::infinity();
        bool finite = true;
        for (int j = 0; j < config.trait.size(); ++j) {
            if (!config.trait.is_free(j)) continue;
            d_min = std::min(d_min, d[j]);
            finite = finite && std::isfinite(d[j]);
        }
        if (!finite || !(d_min > 0.0))
            out.push_back(error("dispersal_positive",
                                fmt::format("D must be positive on free trait nodes (min D = {})", d_min)));

        const auto minima = local_minima(d, config.trait);
        if (minima.size() != 1) {
            out.push_back(error("dispersal_minimizer",
                                fmt::format("non-unique minimizer: D has {} local minima on the trait grid",
                                            minima.size())));
        } else if (config.theta_m) {
            const double tm = *config.theta_m;
            const double found = config.trait.node(minima.front());
            if (!(tm >= 0.0 && tm < 1.0)) {
                out.push_back(error("theta_m", "theta_m must lie in [0, 1)"));
            } else if (config.trait.distance(tm, found) > config.trait.spacing() * (1.0 + 1e-9)) {
                out.push_back(error("theta_m",
                                    fmt::format("declared theta_m = {} but sampled D is minimal at {}",
                                                tm, found)));
            }
        }
    }

    if (!(config.initial_width > 0.0))
        out.push_back(error("initial_width", "initial_width must be positive"));
    if (config.solver.dt < 0.0) out.push_back(error("dt", "solver.dt must be >= 0"));
    if (config.solver.threads < 1) out.push_back(error("threads", "threads must be >= 1"));
    for (double e : config.epsilons)
        if (!(e > 0.0)) out.push_back(error("epsilons", "every entry of epsilons must be positive"));
    return out;
}

bool has_errors(const std::vector<Violation>& violations) {
    return std::any_of(violations.begin(), violations.end(),
                       [](const Violation& v) { return v.severity == Violation::Severity::error; });
}

}  // namespace dispersal
