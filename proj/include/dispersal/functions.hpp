#pragma once

#include <string>
#include <vector>

#include "dispersal/grid.hpp"

namespace dispersal {

/// Dispersal rate D(theta): a named closed-form family or raw samples.
///
///   constant(c)            D = c
///   cosine(a, b[, phase])  D = a + b cos(2 pi (theta - phase))
///   linear(a, b)           D = a + b theta
///   samples(v_0..v_{n-1})  one value per trait node
///
/// Closed forms carry analytic derivatives. Sampled D is differentiated
/// with centered differences on the trait grid.
class TraitFunction {
public:
    enum class Kind { constant, cosine, linear, samples };

    TraitFunction() = default;
    TraitFunction(Kind kind, std::vector<double> params);

    static TraitFunction constant(double c);
    static TraitFunction cosine(double mean, double amplitude, double phase = 0.0);
    static TraitFunction linear(double offset, double slope);
    static TraitFunction samples(std::vector<double> values);
    static TraitFunction from_name(const std::string& name, std::vector<double> params);

    Kind kind() const noexcept { return kind_; }
    const std::vector<double>& params() const noexcept { return params_; }
    std::string name() const;

    /// Value at theta. Sampled functions need the grid and use linear interpolation.
    double value(double theta, const TraitGrid& grid) const;
    double derivative(double theta, const TraitGrid& grid) const;
    std::vector<double> sample(const TraitGrid& grid) const;

private:
    Kind kind_ = Kind::constant;
    std::vector<double> params_{1.0};
};

/// Carrying capacity K(x) on (0, L).
///
///   constant(k)                 K = k
///   hump(base, amp, power)      K = base + amp (1 - 4 (x/L - 1/2)^2)^power
///   cosine(a, b)                K = a + b cos(pi x / L)
///   linear(a, b)                K = a + b x
///   samples(v_0..v_{n-1})       one value per spatial node
class SpatialFunction {
public:
    enum class Kind { constant, hump, cosine, linear, samples };

    SpatialFunction() = default;
    SpatialFunction(Kind kind, std::vector<double> params);

    static SpatialFunction constant(double k);
    static SpatialFunction hump(double base, double amplitude, double power);
    static SpatialFunction cosine(double mean, double amplitude);
    static SpatialFunction linear(double offset, double slope);
    static SpatialFunction samples(std::vector<double> values);
    static SpatialFunction from_name(const std::string& name, std::vector<double> params);

    Kind kind() const noexcept { return kind_; }
    const std::vector<double>& params() const noexcept { return params_; }
    std::string name() const;
    bool is_constant() const noexcept { return kind_ == Kind::constant; }

    std::vector<double> sample(const SpatialGrid& grid) const;

private:
    Kind kind_ = Kind::constant;
    std::vector<double> params_{1.0};
};

}  // namespace dispersal
