#include "mdsample/diffop.hpp"

#include "mdsample/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mdsample {

DiffOperator::DiffOperator(std::size_t dimension, int orderBound, std::map<MultiIndex, Complex> coeffs)
    : dim_(dimension), order_bound_(orderBound), coeffs_(std::move(coeffs))
{
    if (dim_ == 0 || order_bound_ < 0)
        throw std::domain_error("DiffOperator: invalid dimension or order bound");
    for (const auto& [beta, a] : coeffs_) {
        if (beta.dimension() != dim_)
            throw std::domain_error("DiffOperator: index " + beta.str() + " has wrong dimension");
        if (beta.order() > order_bound_)
            throw std::domain_error("DiffOperator: index " + beta.str() + " exceeds the order bound");
    }
    if (coefficient(MultiIndex::zero(dim_)) == Complex(0.0))
        throw std::domain_error("DiffOperator: a_0 must be nonzero");
}

Complex DiffOperator::coefficient(const MultiIndex& beta) const
{
    auto it = coeffs_.find(beta);
    return it == coeffs_.end() ? Complex(0.0) : it->second;
}

bool DiffOperator::isIdentity() const
{
    for (const auto& [beta, a] : coeffs_) {
        if (beta.isZero() ? a != Complex(1.0) : a != Complex(0.0))
            return false;
    }
    return true;
}

DiffOperator deltaOperator(std::size_t d)
{
    return DiffOperator(d, 0, {{MultiIndex::zero(d), Complex(1.0)}});
}

double ballMonomialIntegral(const MultiIndex& beta, double h)
{
    if (beta.hasOddComponent())
        return 0.0;
    const double d = static_cast<double>(beta.dimension());
    const double order = beta.order();
    double logGammas = 0.0;
    for (int b : beta.exponents())
        logGammas += std::lgamma((b + 1) / 2.0);
    return std::pow(h, order + d) * std::exp(logGammas - std::lgamma((order + d) / 2.0 + 1.0));
}

DiffOperator ballMoments(std::size_t d, int N, double h)
{
    if (N < 0 || !(h > 0.0))
        throw std::domain_error("ballMoments: need N >= 0 and h > 0");
    const double volume = ballMonomialIntegral(MultiIndex::zero(d), h);
    std::map<MultiIndex, Complex> coeffs;
    for (const auto& beta : enumerateDelta(N + 1, d)) {
        const double integral = ballMonomialIntegral(beta, h);
        if (integral != 0.0 || beta.isZero())
            coeffs[beta] = integral / (static_cast<double>(factorial(beta)) * volume);
    }
    coeffs[MultiIndex::zero(d)] = 1.0;
    return DiffOperator(d, N, std::move(coeffs));
}

Complex symbol(const DiffOperator& op, std::span<const double> xi)
{
    if (xi.size() != op.dimension())
        throw std::domain_error("symbol: dimension mismatch");
    Complex total = 0.0;
    for (const auto& [beta, a] : op.coeffs()) {
        Complex term = std::conj(a);
        for (std::size_t i = 0; i < xi.size(); ++i)
            term *= std::pow(Complex(0.0, -2.0 * kPi * xi[i]), beta[i]);
        total += term;
    }
    return total;
}

namespace {

Point latticeImage(const RealMatrix& a, std::span<const int> k)
{
    RealVector kv(static_cast<Eigen::Index>(k.size()));
    for (std::size_t i = 0; i < k.size(); ++i)
        kv(static_cast<Eigen::Index>(i)) = k[i];
    const RealVector x = a * kv;
    return Point(x.data(), x.data() + x.size());
}

} // namespace

Complex applyToSignal(const DiffOperator& op, const Signal& f, const DilationMatrix& m, int j,
                      std::span<const int> k)
{
    const std::size_t d = op.dimension();
    if (f.dimension() != d || m.dimension() != d || k.size() != d)
        throw std::domain_error("applyToSignal: dimension mismatch");
    const RealMatrix a = m.power(-j);
    const Point x = latticeImage(a, k);
    if (op.isIdentity())
        return f(x);

    int n = 0;
    for (const auto& [beta, coeff] : op.coeffs())
        if (coeff != Complex(0.0))
            n = std::max(n, beta.order());
    if (f.derivOrder() < n)
        throw std::domain_error("applyToSignal: signal '" + f.name() + "' lacks derivatives of order " +
                                std::to_string(n));
    DerivativeTable outer;
    for (const auto& alpha : enumerateDelta(n + 1, d))
        outer[alpha] = f.derivative(alpha, x);
    const DerivativeTable inner = chainRuleDerivatives(outer, a, n);

    Complex total = 0.0;
    for (const auto& [beta, coeff] : op.coeffs())
        total += coeff * inner.at(beta);
    return total;
}

// D^beta[f(A.)](x) = sum_{[alpha] = [beta]} D^alpha f(Ax) (beta!/alpha!) S(A^T)[beta, alpha]
ScaledOperator::ScaledOperator(const DiffOperator& op, const RealMatrix& a) : a_(a)
{
    const std::size_t d = op.dimension();
    if (static_cast<std::size_t>(a.rows()) != d || a.rows() != a.cols())
        throw std::domain_error("ScaledOperator: matrix dimension mismatch");
    std::map<MultiIndex, Complex> acc;
    const RealMatrix at = a.transpose();
    for (int p = 0; p <= op.orderBound(); ++p) {
        const SMatrix s = buildS(at, p);
        for (const auto& beta : enumerateOrder(p, d)) {
            const Complex coeff = op.coefficient(beta);
            if (coeff == Complex(0.0))
                continue;
            for (const auto& alpha : s.indices) {
                const double ratio =
                    static_cast<double>(factorial(beta)) / static_cast<double>(factorial(alpha));
                acc[alpha] += coeff * ratio * s(beta, alpha);
            }
        }
    }
    for (auto& [alpha, w] : acc) {
        if (w != Complex(0.0))
            weights_.emplace_back(alpha, w);
    }
}

Complex ScaledOperator::apply(const Signal& f, std::span<const int> k) const
{
    const Point x = latticeImage(a_, k);
    if (weights_.size() == 1 && weights_.front().first.isZero() && weights_.front().second == Complex(1.0))
        return f(x);
    Complex total = 0.0;
    for (const auto& [alpha, w] : weights_)
        total += w * f.derivative(alpha, x);
    return total;
}

} // namespace mdsample
