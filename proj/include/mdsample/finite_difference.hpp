#pragma once

#include "mdsample/multiindex.hpp"
#include "mdsample/types.hpp"

#include <array>
#include <functional>
#include <span>

namespace mdsample {

using ComplexField = std::function<Complex(std::span<const double>)>;

namespace fd {

inline constexpr int kStencilHalfWidth = 3;
inline constexpr int kMaxDerivativeOrder = 6;

/// Weights of the 7-point central stencil (offsets -3..3) for the n-th
/// derivative at unit spacing.
const std::array<double, 7>& centralWeights(int n);

/// Leading truncation exponent of the 7-point stencil for the n-th derivative.
int accuracyOrder(int n);

/// D^beta F at xi on a single step size h (no extrapolation).
Complex partial(const ComplexField& f, std::span<const double> xi, const MultiIndex& beta, double h);

/// D^beta F at xi: 7-point tensor stencils at steps s, s/2, s/4 with
/// s = baseStep * max(1, |xi|), combined by two Richardson passes.
Complex derivative(const ComplexField& f, std::span<const double> xi, const MultiIndex& beta,
                   double baseStep = 1e-2);

} // namespace fd
} // namespace mdsample
