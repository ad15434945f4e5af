#pragma once

#include "mdsample/multiindex.hpp"
#include "mdsample/taylor.hpp"

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace mdsample {

/// g(xi) = O(|xi|^{-N-d-epsilon}) for f = inverse transform of g. An
/// infinite epsilon means faster than any power; `epsilon_open` marks a
/// supremum that is approached but not attained.
struct FourierDecay
{
    int N = 0;
    double epsilon = std::numeric_limits<double>::infinity();
    bool epsilon_open = false;

    bool unbounded() const { return epsilon == std::numeric_limits<double>::infinity(); }
    /// Total algebraic exponent minus the dimension, N + epsilon.
    double smoothness() const { return N + epsilon; }
};

/// Real test signal with exact values and derivatives.
class Signal
{
public:
    using ValueFn = std::function<double(std::span<const double>)>;
    using DerivativeFn = std::function<double(const MultiIndex&, std::span<const double>)>;

    Signal(std::string name, std::size_t dimension, ValueFn value, DerivativeFn derivative, int derivOrder,
           FourierDecay decay, double supportHalfwidth, std::vector<double> kinks = {});

    const std::string& name() const { return name_; }
    std::size_t dimension() const { return dim_; }
    int derivOrder() const { return deriv_order_; }
    const FourierDecay& fourierDecay() const { return decay_; }
    /// T0 with |f| < 1e-12 outside [-T0, T0]^d.
    double supportHalfwidth() const { return support_halfwidth_; }
    /// Points (d = 1) where the signal is not smooth.
    const std::vector<double>& kinks() const { return kinks_; }

    double operator()(std::span<const double> x) const { return value_(x); }
    /// D^beta f(x). Throws std::domain_error when the derivative does not exist.
    double derivative(const MultiIndex& beta, std::span<const double> x) const;

private:
    std::string name_;
    std::size_t dim_;
    ValueFn value_;
    DerivativeFn derivative_;
    int deriv_order_;
    FourierDecay decay_;
    double support_halfwidth_;
    std::vector<double> kinks_;
};

namespace signals {

/// exp(-pi |x - offset|^2), offset applied to every coordinate.
Signal gaussian(std::size_t d, double offset = 0.0);
/// exp(-|x - offset|); kinked at the offset.
Signal laplace1d(double offset = 0.0);
/// (1 + |u|) e^{-|u|}, u = x - offset; third derivative jumps at the offset.
Signal matern1d(double offset = 0.0);
Signal polynomial(const Polynomial& p);
Signal constant(std::size_t d, double c);

/// Builds a catalog signal from its config name ("gaussian", "laplace", "matern32").
Signal byName(const std::string& kind, std::size_t d, double offset);

} // namespace signals
} // namespace mdsample
