#pragma once

#include "mdsample/dilation.hpp"
#include "mdsample/multiindex.hpp"
#include "mdsample/types.hpp"

#include <map>
#include <random>
#include <span>

namespace mdsample {

/// Matrix S(A, p) indexed by O_p x O_p (lexicographic), defined by
///   (A t)^alpha / alpha! = sum_beta S[alpha, beta] t^beta / beta!.
struct SMatrix
{
    int p = 0;
    std::vector<MultiIndex> indices;
    RealMatrix entries;

    std::size_t position(const MultiIndex& alpha) const;
    double operator()(const MultiIndex& alpha, const MultiIndex& beta) const
    {
        return entries(static_cast<Eigen::Index>(position(alpha)), static_cast<Eigen::Index>(position(beta)));
    }
};

SMatrix buildS(const RealMatrix& a, int p);

using DerivativeTable = std::map<MultiIndex, Complex>;

/// Maps {D^alpha f(Ax)} for [alpha] <= maxOrder to {D^beta [f(A.)](x)}.
/// Throws std::domain_error when an order is missing from `outer`.
DerivativeTable chainRuleDerivatives(const DerivativeTable& outer, const RealMatrix& a, int maxOrder);

/// Real polynomial in d variables with exact derivatives.
class Polynomial
{
public:
    explicit Polynomial(std::size_t dimension) : dim_(dimension) {}
    Polynomial(std::size_t dimension, std::map<MultiIndex, double> terms);

    static Polynomial constant(std::size_t dimension, double c);
    static Polynomial monomial(const MultiIndex& alpha, double coefficient = 1.0);
    /// Integer coefficients in [-3, 3] on every exponent of order <= degree.
    static Polynomial random(std::size_t dimension, int degree, std::mt19937_64& rng);

    std::size_t dimension() const { return dim_; }
    int degree() const;
    const std::map<MultiIndex, double>& terms() const { return terms_; }

    double operator()(std::span<const double> x) const;
    Polynomial derivative(const MultiIndex& beta) const;
    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator*(const Polynomial& other) const;
    /// The polynomial x -> f(Ax), expanded symbolically.
    Polynomial compose(const RealMatrix& a) const;

private:
    void add(const MultiIndex& alpha, double c);

    std::size_t dim_;
    std::map<MultiIndex, double> terms_;
};

/// Normalized residual of the Taylor-sum identity under the substitution
/// x -> Ax:
///   |sum D^b f(Ax)(At)^b/b! - sum D^b[f(A.)](x) t^b/b!| / (1 + sum |terms|)
/// over b in Delta_{N+1}. The right side goes through chainRuleDerivatives.
double verifyLemma10(const Polynomial& f, const RealMatrix& a, std::span<const double> x, std::span<const double> t,
                     int maxOrder);

} // namespace mdsample
