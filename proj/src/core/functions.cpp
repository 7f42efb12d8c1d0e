#include <algorithm>
#include "dispersal/functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace dispersal {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void require_params(const std::string& family, const std::vector<double>& p,
                    std::size_t lo, std::size_t hi) {
    if (p.size() < lo || p.size() > hi)
        throw std::invalid_argument(fmt::format(
            "{}: expected {} to {} parameters, got {}", family, lo, hi, p.size()));
}

}  // namespace

TraitFunction::TraitFunction(Kind kind, std::vector<double> params)
    : kind_(kind), params_(std::move(params)) {
    switch (kind_) {
    case Kind::constant: require_params("constant", params_, 1, 1); break;
    case Kind::cosine:
        require_params("cosine", params_, 2, 3);
        if (params_.size() == 2) params_.push_back(0.0);
        break;
    case Kind::linear: require_params("linear", params_, 2, 2); break;
    case Kind::samples:
        if (params_.size() < 3) throw std::invalid_argument("samples: need at least 3 values");
        break;
    }
}

TraitFunction TraitFunction::constant(double c) { return {Kind::constant, {c}}; }
TraitFunction TraitFunction::cosine(double mean, double amplitude, double phase) {
    return {Kind::cosine, {mean, amplitude, phase}};
}
TraitFunction TraitFunction::linear(double offset, double slope) {
    return {Kind::linear, {offset, slope}};
}
TraitFunction TraitFunction::samples(std::vector<double> values) {
    return {Kind::samples, std::move(values)};
}

TraitFunction TraitFunction::from_name(const std::string& name, std::vector<double> params) {
    if (name == "constant") return {Kind::constant, std::move(params)};
    if (name == "cosine") return {Kind::cosine, std::move(params)};
    if (name == "linear") return {Kind::linear, std::move(params)};
    if (name == "samples") return {Kind::samples, std::move(params)};
    throw std::invalid_argument(fmt::format("unknown dispersal family '{}'", name));
}

std::string TraitFunction::name() const {
    switch (kind_) {
    case Kind::constant: return "constant";
    case Kind::cosine: return "cosine";
    case Kind::linear: return "linear";
    case Kind::samples: return "samples";
    }
    return "?";
}

double TraitFunction::value(double theta, const TraitGrid& grid) const {
    const auto& p = params_;
    switch (kind_) {
    case Kind::constant: return p[0];
    case Kind::cosine: return p[0] + p[1] * std::cos(two_pi * (theta - p[2]));
    case Kind::linear: return p[0] + p[1] * theta;
    case Kind::samples: {
        if (static_cast<int>(p.size()) != grid.size())
            throw std::invalid_argument("dispersal samples do not match the trait grid");
        const double h = grid.spacing();
        double s = grid.periodic() ? wrap_unit(theta) : std::clamp(theta, 0.0, 1.0);
        int j = static_cast<int>(std::floor(s / h));
        if (!grid.periodic()) j = std::min(j, grid.size() - 2);
        const double frac = s / h - j;
        const int k = grid.neighbor(j, 1);
        return (1.0 - frac) * p[j % grid.size()] + frac * p[k];
    }
    }
    return 0.0;
}

double TraitFunction::derivative(double theta, const TraitGrid& grid) const {
    const auto& p = params_;
    switch (kind_) {
    case Kind::constant: return 0.0;
    case Kind::cosine: return -two_pi * p[1] * std::sin(two_pi * (theta - p[2]));
    case Kind::linear: return p[1];
    case Kind::samples: {
        const int j = grid.nearest(theta);
        const int lo = grid.neighbor(j, -1);
        const int hi = grid.neighbor(j, 1);
        if (lo < 0 || hi < 0)
            throw std::invalid_argument("sampled dispersal derivative needs an interior node");
        return (p[hi] - p[lo]) / (2.0 * grid.spacing());
    }
    }
    return 0.0;
}

std::vector<double> TraitFunction::sample(const TraitGrid& grid) const {
    if (kind_ == Kind::samples) {
        if (static_cast<int>(params_.size()) != grid.size())
            throw std::invalid_argument(fmt::format(
                "dispersal samples: {} values for {} trait nodes", params_.size(), grid.size()));
        return params_;
    }
    std::vector<double> out(grid.size());
    for (int j = 0; j < grid.size(); ++j) out[j] = value(grid.node(j), grid);
    return out;
}

SpatialFunction::SpatialFunction(Kind kind, std::vector<double> params)
    : kind_(kind), params_(std::move(params)) {
    switch (kind_) {
    case Kind::constant: require_params("constant", params_, 1, 1); break;
    case Kind::hump: require_params("hump", params_, 3, 3); break;
    case Kind::cosine: require_params("cosine", params_, 2, 2); break;
    case Kind::linear: require_params("linear", params_, 2, 2); break;
    case Kind::samples:
        if (params_.size() < 3) throw std::invalid_argument("samples: need at least 3 values");
        break;
    }
}

SpatialFunction SpatialFunction::constant(double k) { return {Kind::constant, {k}}; }
SpatialFunction SpatialFunction::hump(double base, double amplitude, double power) {
    return {Kind::hump, {base, amplitude, power}};
}
SpatialFunction SpatialFunction::cosine(double mean, double amplitude) {
    return {Kind::cosine, {mean, amplitude}};
}
SpatialFunction SpatialFunction::linear(double offset, double slope) {
    return {Kind::linear, {offset, slope}};
}
SpatialFunction SpatialFunction::samples(std::vector<double> values) {
    return {Kind::samples, std::move(values)};
}

SpatialFunction SpatialFunction::from_name(const std::string& name, std::vector<double> params) {
    if (name == "constant") return {Kind::constant, std::move(params)};
    if (name == "hump") return {Kind::hump, std::move(params)};
    if (name == "cosine") return {Kind::cosine, std::move(params)};
    if (name == "linear") return {Kind::linear, std::move(params)};
    if (name == "samples") return {Kind::samples, std::move(params)};
    throw std::invalid_argument(fmt::format("unknown capacity family '{}'", name));
}

std::string SpatialFunction::name() const {
    switch (kind_) {
    case Kind::constant: return "constant";
    case Kind::hump: return "hump";
    case Kind::cosine: return "cosine";
    case Kind::linear: return "linear";
    case Kind::samples: return "samples";
    }
    return "?";
}

std::vector<double> SpatialFunction::sample(const SpatialGrid& grid) const {
    if (kind_ == Kind::samples) {
        if (static_cast<int>(params_.size()) != grid.size())
            throw std::invalid_argument(fmt::format(
                "capacity samples: {} values for {} spatial nodes", params_.size(), grid.size()));
        return params_;
    }
    const auto& p = params_;
    const double L = grid.length();
    std::vector<double> out(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        const double x = grid.node(i);
        switch (kind_) {
        case Kind::constant: out[i] = p[0]; break;
        case Kind::hump: {
            const double s = x / L - 0.5;
            out[i] = p[0] + p[1] * std::pow(1.0 - 4.0 * s * s, p[2]);
            break;
        }
        case Kind::cosine: out[i] = p[0] + p[1] * std::cos(std::numbers::pi * x / L); break;
        case Kind::linear: out[i] = p[0] + p[1] * x; break;
        case Kind::samples: break;
        }
    }
    return out;
}

}  // namespace dispersal
