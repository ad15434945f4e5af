#include "mdsample/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

namespace mdsample {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x)
{
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

} // namespace

GaussLegendre gaussLegendre(int n)
{
    if (n < 1)
        throw std::domain_error("gaussLegendre: need at least one node");
    GaussLegendre rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, dp] = legendre(n, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        const double dp = legendre(n, x).second;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = -x;
        rule.nodes[hi] = x;
        rule.weights[lo] = w;
        rule.weights[hi] = w;
    }
    if (n % 2 == 1)
        rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

BallRule::BallRule(std::size_t dimension, double h, const QuadratureSpec& spec)
    : dim_(dimension), h_(h), spec_(spec)
{
    if (dim_ == 0 || !(h > 0.0))
        throw std::domain_error("BallRule: need d >= 1 and h > 0");
    if (spec.order < 1 || spec.angular < 3 || spec.mc_samples < 2)
        throw std::domain_error("BallRule: invalid quadrature spec");
    gl_ = gaussLegendre(spec.order);
    if (dim_ == 2) {
        // r = h (1 + x) / 2; area element r dr dtheta, normalized by pi h^2
        for (std::size_t i = 0; i < gl_.nodes.size(); ++i) {
            const double r = 0.5 * h * (1.0 + gl_.nodes[i]);
            const double wr = gl_.weights[i] * 0.5 * h * r;
            for (int k = 0; k < spec.angular; ++k) {
                const double theta = 2.0 * kPi * k / spec.angular;
                const double w = wr * (2.0 * kPi / spec.angular) / (kPi * h * h);
                planar_.push_back({r * std::cos(theta), r * std::sin(theta), w});
            }
        }
    }
}

AverageEstimate BallRule::pullbackAverage(const Signal& f, std::span<const double> center, const RealMatrix& a,
                                          std::uint64_t stream) const
{
    if (f.dimension() != dim_ || center.size() != dim_ || static_cast<std::size_t>(a.rows()) != dim_)
        throw std::domain_error("pullbackAverage: dimension mismatch");

    if (dim_ == 1) {
        const double c = center[0];
        const double scale = a(0, 0);
        // Breakpoints in t where f(c + scale t) has a kink.
        std::vector<double> breaks{-h_, h_};
        for (double kink : f.kinks()) {
            const double t = (kink - c) / scale;
            if (t > -h_ && t < h_)
                breaks.push_back(t);
        }
        std::sort(breaks.begin(), breaks.end());
        double total = 0.0;
        double x[1];
        for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
            const double lo = breaks[s], hi = breaks[s + 1];
            const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            for (std::size_t i = 0; i < gl_.nodes.size(); ++i) {
                x[0] = c + scale * (mid + half * gl_.nodes[i]);
                total += gl_.weights[i] * half * f(std::span<const double>(x, 1));
            }
        }
        return {total / (2.0 * h_), 0.0};
    }

    if (dim_ == 2) {
        double total = 0.0;
        double x[2];
        for (const auto& node : planar_) {
            x[0] = center[0] + a(0, 0) * node[0] + a(0, 1) * node[1];
            x[1] = center[1] + a(1, 0) * node[0] + a(1, 1) * node[1];
            total += node[2] * f(std::span<const double>(x, 2));
        }
        return {total, 0.0};
    }

    std::mt19937_64 rng(splitmix64(spec_.seed ^ splitmix64(stream)));
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    RealVector t(static_cast<Eigen::Index>(dim_));
    RealVector c(static_cast<Eigen::Index>(dim_));
    for (std::size_t i = 0; i < dim_; ++i)
        c(static_cast<Eigen::Index>(i)) = center[i];
    double sum = 0.0, sumSq = 0.0;
    for (int s = 0; s < spec_.mc_samples; ++s) {
        for (Eigen::Index i = 0; i < t.size(); ++i)
            t(i) = normal(rng);
        const double r = h_ * std::pow(uniform(rng), 1.0 / static_cast<double>(dim_));
        t *= r / t.norm();
        const RealVector x = c + a * t;
        const double v = f(std::span<const double>(x.data(), dim_));
        sum += v;
        sumSq += v * v;
    }
    const double n = spec_.mc_samples;
    const double mean = sum / n;
    const double var = std::max(0.0, (sumSq / n - mean * mean) * n / (n - 1.0));
    return {mean, std::sqrt(var / n)};
}

} // namespace mdsample
