#include "mdsample/signals.hpp"

#include <cmath>
#include <stdexcept>

namespace mdsample {

Signal::Signal(std::string name, std::size_t dimension, ValueFn value, DerivativeFn derivative, int derivOrder,
               FourierDecay decay, double supportHalfwidth, std::vector<double> kinks)
    : name_(std::move(name)), dim_(dimension), value_(std::move(value)), derivative_(std::move(derivative)),
      deriv_order_(derivOrder), decay_(decay), support_halfwidth_(supportHalfwidth), kinks_(std::move(kinks))
{
}

double Signal::derivative(const MultiIndex& beta, std::span<const double> x) const
{
    if (beta.dimension() != dim_ || x.size() != dim_)
        throw std::domain_error("Signal::derivative: dimension mismatch");
    if (beta.isZero())
        return value_(x);
    return derivative_(beta, x);
}

namespace signals {

namespace {

// Probabilists' Hermite polynomial He_n(u).
double hermite(int n, double u)
{
    double h0 = 1.0, h1 = u;
    if (n == 0)
        return h0;
    for (int k = 1; k < n; ++k) {
        const double h2 = u * h1 - k * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

constexpr int kGaussianMaxOrder = 6;

} // namespace

Signal gaussian(std::size_t d, double offset)
{
    auto value = [d, offset](std::span<const double> x) {
        double r2 = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            r2 += (x[i] - offset) * (x[i] - offset);
        return std::exp(-kPi * r2);
    };
    // d^n/dx^n exp(-pi x^2) = (-s)^n He_n(s x) exp(-pi x^2), s = sqrt(2 pi)
    auto deriv = [d, offset](const MultiIndex& beta, std::span<const double> x) {
        const double s = std::sqrt(2.0 * kPi);
        double v = 1.0;
        for (std::size_t i = 0; i < d; ++i) {
            if (beta[i] > kGaussianMaxOrder)
                throw std::domain_error("gaussian: derivative order above 6");
            const double u = x[i] - offset;
            v *= std::pow(-s, beta[i]) * hermite(beta[i], s * u) * std::exp(-kPi * u * u);
        }
        return v;
    };
    return Signal("gaussian", d, value, deriv, kGaussianMaxOrder, FourierDecay{}, 3.2 + std::abs(offset));
}

Signal laplace1d(double offset)
{
    auto value = [offset](std::span<const double> x) { return std::exp(-std::abs(x[0] - offset)); };
    auto deriv = [offset](const MultiIndex& beta, std::span<const double> x) {
        const double u = x[0] - offset;
        if (u == 0.0)
            throw std::domain_error("laplace: not differentiable at the kink");
        const double sign = u > 0 ? -1.0 : 1.0;
        return std::pow(sign, beta[0]) * std::exp(-std::abs(u));
    };
    return Signal("laplace", 1, value, deriv, 0, FourierDecay{0, 1.0, true}, 28.0 + std::abs(offset), {offset});
}

Signal matern1d(double offset)
{
    auto value = [offset](std::span<const double> x) {
        const double s = std::abs(x[0] - offset);
        return (1.0 + s) * std::exp(-s);
    };
    auto deriv = [offset](const MultiIndex& beta, std::span<const double> x) {
        const double u = x[0] - offset;
        const double s = std::abs(u);
        switch (beta[0]) {
        case 1: return (u >= 0 ? -1.0 : 1.0) * s * std::exp(-s);
        case 2: return (s - 1.0) * std::exp(-s);
        default: throw std::domain_error("matern32: derivatives of order >= 3 do not exist");
        }
    };
    return Signal("matern32", 1, value, deriv, 2, FourierDecay{2, 1.0, true}, 32.0 + std::abs(offset), {offset});
}

Signal polynomial(const Polynomial& p)
{
    auto value = [p](std::span<const double> x) { return p(x); };
    auto deriv = [p](const MultiIndex& beta, std::span<const double> x) { return p.derivative(beta)(x); };
    return Signal("polynomial", p.dimension(), value, deriv, std::numeric_limits<int>::max(), FourierDecay{0, 0.0},
                  std::numeric_limits<double>::infinity());
}

Signal constant(std::size_t d, double c)
{
    return polynomial(Polynomial::constant(d, c));
}

Signal byName(const std::string& kind, std::size_t d, double offset)
{
    if (kind == "gaussian")
        return gaussian(d, offset);
    if (kind == "laplace" || kind == "matern32") {
        if (d != 1)
            throw std::domain_error("signal '" + kind + "' is one-dimensional");
        return kind == "laplace" ? laplace1d(offset) : matern1d(offset);
    }
    throw std::domain_error("unknown signal kind '" + kind + "'");
}

} // namespace signals
} // namespace mdsample
