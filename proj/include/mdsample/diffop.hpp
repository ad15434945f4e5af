#pragma once

#include "mdsample/dilation.hpp"
#include "mdsample/multiindex.hpp"
#include "mdsample/signals.hpp"
#include "mdsample/types.hpp"

#include <map>
#include <span>
#include <utility>
#include <vector>

namespace mdsample {

/// Constant-coefficient operator Lf = sum_beta a_beta D^beta f over
/// [beta] <= N.
class DiffOperator
{
public:
    /// Throws std::domain_error if a_0 is missing or zero, or if an index
    /// has the wrong dimension or order above N.
    DiffOperator(std::size_t dimension, int orderBound, std::map<MultiIndex, Complex> coeffs);

    std::size_t dimension() const { return dim_; }
    int orderBound() const { return order_bound_; }
    const std::map<MultiIndex, Complex>& coeffs() const { return coeffs_; }
    /// a_beta, zero when absent.
    Complex coefficient(const MultiIndex& beta) const;
    bool isIdentity() const;

private:
    std::size_t dim_;
    int order_bound_;
    std::map<MultiIndex, Complex> coeffs_;
};

DiffOperator deltaOperator(std::size_t d);

/// a_beta = (1 / (beta! V_h)) int_{B_h} t^beta dt for [beta] <= N.
DiffOperator ballMoments(std::size_t d, int N, double h);

/// int_{B_h} t^beta dt over the Euclidean ball (zero for odd components).
double ballMonomialIntegral(const MultiIndex& beta, double h);

/// sum_beta conj(a_beta) (-2 pi i xi)^beta.
Complex symbol(const DiffOperator& op, std::span<const double> xi);

/// L[f(A.)](k) with A = M^{-j}; inner derivatives through the chain rule.
Complex applyToSignal(const DiffOperator& op, const Signal& f, const DilationMatrix& m, int j,
                      std::span<const int> k);

/// The operator x -> L[f(A.)](x) regrouped as sum_alpha w_alpha D^alpha f(Ax),
/// so the S matrices are built once per level.
class ScaledOperator
{
public:
    ScaledOperator(const DiffOperator& op, const RealMatrix& a);

    const RealMatrix& matrix() const { return a_; }
    const std::vector<std::pair<MultiIndex, Complex>>& weights() const { return weights_; }
    Complex apply(const Signal& f, std::span<const int> k) const;

private:
    RealMatrix a_;
    std::vector<std::pair<MultiIndex, Complex>> weights_;
};

} // namespace mdsample
