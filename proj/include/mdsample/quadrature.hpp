#pragma once

#include "mdsample/dilation.hpp"
#include "mdsample/signals.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace mdsample {

struct QuadratureSpec
{
    int order = 16;
    int angular = 32;
    int mc_samples = 20000;
    std::uint64_t seed = 1;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre
{
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussLegendre gaussLegendre(int n);

struct AverageEstimate
{
    double value = 0.0;
    /// Zero for deterministic rules.
    double std_error = 0.0;
};

/// Averaging rule over the ball B_h in t-space. d = 1: Gauss-Legendre,
/// split at signal kinks; d = 2: Gauss-Legendre in r (weight r) times a
/// trapezoid in angle; d >= 3: Monte Carlo with one stream per call.
class BallRule
{
public:
    BallRule(std::size_t dimension, double h, const QuadratureSpec& spec);

    std::size_t dimension() const { return dim_; }
    double radius() const { return h_; }

    /// (1/V_h) int_{B_h} f(center + A t) dt. `stream` selects the Monte
    /// Carlo substream and is ignored by deterministic rules.
    AverageEstimate pullbackAverage(const Signal& f, std::span<const double> center, const RealMatrix& a,
                                    std::uint64_t stream = 0) const;

private:
    std::size_t dim_;
    double h_;
    QuadratureSpec spec_;
    GaussLegendre gl_;
    // Tensor nodes for d = 2, as (t1, t2, weight) with weights summing to one.
    std::vector<std::array<double, 3>> planar_;
};

/// SplitMix64 finalizer, used to derive per-point seeds.
std::uint64_t splitmix64(std::uint64_t x);

} // namespace mdsample
