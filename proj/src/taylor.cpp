#include "mdsample/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mdsample {

std::size_t SMatrix::position(const MultiIndex& alpha) const
{
    auto it = std::lower_bound(indices.begin(), indices.end(), alpha, MultiIndex::lexLess);
    if (it == indices.end() || !(*it == alpha))
        throw std::domain_error("SMatrix: index " + alpha.str() + " not in O_p");
    return static_cast<std::size_t>(it - indices.begin());
}

SMatrix buildS(const RealMatrix& a, int p)
{
    if (a.rows() != a.cols())
        throw std::domain_error("buildS: matrix must be square");
    if (p < 0)
        throw std::domain_error("buildS: order must be non-negative");
    const std::size_t d = static_cast<std::size_t>(a.rows());

    SMatrix s;
    s.p = p;
    s.indices = enumerateOrder(p, d);
    const auto n = static_cast<Eigen::Index>(s.indices.size());
    s.entries = RealMatrix::Zero(n, n);

    // (At)^alpha / alpha! = prod_i (sum_j A_ij t_j)^{alpha_i} / alpha_i!
    //                     = prod_i sum_{|g_i| = alpha_i} prod_j A_ij^{g_ij} t^{g_i} / g_i!
    // Choosing one g_i per row i contributes to beta = sum_i g_i.
    for (Eigen::Index row = 0; row < n; ++row) {
        const MultiIndex& alpha = s.indices[static_cast<std::size_t>(row)];
        std::vector<std::vector<MultiIndex>> choices(d);
        for (std::size_t i = 0; i < d; ++i)
            choices[i] = enumerateOrder(alpha[i], d);

        std::vector<int> beta(d, 0);
        auto recurse = [&](auto&& self, std::size_t i, double weight) -> void {
            if (weight == 0.0)
                return;
            if (i == d) {
                MultiIndex b(beta);
                const auto col = static_cast<Eigen::Index>(s.position(b));
                s.entries(row, col) += weight * static_cast<double>(factorial(b));
                return;
            }
            for (const MultiIndex& g : choices[i]) {
                double w = weight / static_cast<double>(factorial(g));
                for (std::size_t j = 0; j < d; ++j) {
                    w *= std::pow(a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), g[j]);
                    beta[j] += g[j];
                }
                self(self, i + 1, w);
                for (std::size_t j = 0; j < d; ++j)
                    beta[j] -= g[j];
            }
        };
        recurse(recurse, 0, 1.0);
    }
    return s;
}

DerivativeTable chainRuleDerivatives(const DerivativeTable& outer, const RealMatrix& a, int maxOrder)
{
    if (a.rows() != a.cols())
        throw std::domain_error("chainRuleDerivatives: matrix must be square");
    const std::size_t d = static_cast<std::size_t>(a.rows());
    for (const MultiIndex& alpha : enumerateDelta(maxOrder + 1, d))
        if (outer.find(alpha) == outer.end())
            throw std::domain_error("chainRuleDerivatives: missing outer derivative " + alpha.str());

    // D^beta[f(A.)](x) = sum_{alpha in O_[beta]} D^alpha f(Ax) (beta!/alpha!) S(A^T, [beta])[beta, alpha]
    DerivativeTable inner;
    const RealMatrix at = a.transpose();
    for (int p = 0; p <= maxOrder; ++p) {
        const SMatrix s = buildS(at, p);
        for (const MultiIndex& beta : s.indices) {
            const double beta_fact = static_cast<double>(factorial(beta));
            Complex acc = 0.0;
            for (const MultiIndex& alpha : s.indices) {
                const double c = s(beta, alpha);
                if (c != 0.0)
                    acc += outer.at(alpha) * (beta_fact / static_cast<double>(factorial(alpha)) * c);
            }
            inner.emplace(beta, acc);
        }
    }
    return inner;
}

Polynomial::Polynomial(std::size_t dimension, std::map<MultiIndex, double> terms) : dim_(dimension)
{
    for (auto& [alpha, c] : terms) {
        if (alpha.dimension() != dim_)
            throw std::domain_error("Polynomial: term dimension mismatch");
        add(alpha, c);
    }
}

Polynomial Polynomial::constant(std::size_t dimension, double c)
{
    Polynomial p(dimension);
    p.add(MultiIndex::zero(dimension), c);
    return p;
}

Polynomial Polynomial::monomial(const MultiIndex& alpha, double coefficient)
{
    Polynomial p(alpha.dimension());
    p.add(alpha, coefficient);
    return p;
}

Polynomial Polynomial::random(std::size_t dimension, int degree, std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> coef(-3, 3);
    Polynomial p(dimension);
    for (const MultiIndex& alpha : enumerateDelta(degree + 1, dimension))
        p.add(alpha, static_cast<double>(coef(rng)));
    return p;
}

void Polynomial::add(const MultiIndex& alpha, double c)
{
    if (c == 0.0)
        return;
    auto [it, inserted] = terms_.emplace(alpha, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0)
            terms_.erase(it);
    }
}

int Polynomial::degree() const
{
    int deg = 0;
    for (const auto& [alpha, c] : terms_)
        deg = std::max(deg, alpha.order());
    return deg;
}

double Polynomial::operator()(std::span<const double> x) const
{
    double sum = 0.0;
    for (const auto& [alpha, c] : terms_)
        sum += c * mdsample::monomial(x, alpha);
    return sum;
}

Polynomial Polynomial::derivative(const MultiIndex& beta) const
{
    Polynomial out(dim_);
    for (const auto& [alpha, c] : terms_) {
        double factor = c;
        std::vector<int> e(alpha.exponents());
        bool vanishes = false;
        for (std::size_t i = 0; i < dim_ && !vanishes; ++i) {
            if (beta[i] > e[i]) {
                vanishes = true;
                break;
            }
            for (int k = 0; k < beta[i]; ++k)
                factor *= e[i] - k;
            e[i] -= beta[i];
        }
        if (!vanishes)
            out.add(MultiIndex(e), factor);
    }
    return out;
}

Polynomial Polynomial::operator+(const Polynomial& other) const
{
    Polynomial out(*this);
    for (const auto& [alpha, c] : other.terms_)
        out.add(alpha, c);
    return out;
}

Polynomial Polynomial::operator*(const Polynomial& other) const
{
    Polynomial out(dim_);
    for (const auto& [a, ca] : terms_)
        for (const auto& [b, cb] : other.terms_)
            out.add(a + b, ca * cb);
    return out;
}

Polynomial Polynomial::compose(const RealMatrix& a) const
{
    // Linear forms y_i = sum_j A_ij x_j, then f(y) by repeated multiplication.
    std::vector<Polynomial> linear;
    for (std::size_t i = 0; i < dim_; ++i) {
        Polynomial li(dim_);
        for (std::size_t j = 0; j < dim_; ++j)
            li.add(MultiIndex::unit(dim_, j), a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        linear.push_back(std::move(li));
    }
    Polynomial out(dim_);
    for (const auto& [alpha, c] : terms_) {
        Polynomial term = constant(dim_, c);
        for (std::size_t i = 0; i < dim_; ++i)
            for (int k = 0; k < alpha[i]; ++k)
                term = term * linear[i];
        out = out + term;
    }
    return out;
}

double verifyLemma10(const Polynomial& f, const RealMatrix& a, std::span<const double> x, std::span<const double> t,
                     int maxOrder)
{
    const std::size_t d = f.dimension();
    if (x.size() != d || t.size() != d || static_cast<std::size_t>(a.rows()) != d)
        throw std::domain_error("verifyLemma10: dimension mismatch");
    const Eigen::Map<const RealVector> xv(x.data(), static_cast<Eigen::Index>(d));
    const Eigen::Map<const RealVector> tv(t.data(), static_cast<Eigen::Index>(d));
    const RealVector ax = a * xv;
    const RealVector atv = a * tv;

    DerivativeTable outer;
    const auto indices = enumerateDelta(maxOrder + 1, d);
    for (const MultiIndex& alpha : indices)
        outer.emplace(alpha, f.derivative(alpha)(std::span<const double>(ax.data(), d)));
    const DerivativeTable inner = chainRuleDerivatives(outer, a, maxOrder);

    double lhs = 0.0, rhs = 0.0, magnitude = 0.0;
    for (const MultiIndex& beta : indices) {
        const double bf = static_cast<double>(factorial(beta));
        const double l = outer.at(beta).real() * monomial(std::span<const double>(atv.data(), d), beta) / bf;
        const double r = inner.at(beta).real() * monomial(t, beta) / bf;
        lhs += l;
        rhs += r;
        magnitude += std::abs(l) + std::abs(r);
    }
    return std::abs(lhs - rhs) / (1.0 + magnitude);
}

} // namespace mdsample
