#include "mdsample/finite_difference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace mdsample::fd {

namespace {

// Fornberg's recursion for weights at nodes -3..3, evaluation point 0.
std::array<std::array<double, 7>, kMaxDerivativeOrder + 1> buildWeights()
{
    constexpr int n = 2 * kStencilHalfWidth + 1;
    constexpr int m = kMaxDerivativeOrder;
    double x[n];
    for (int i = 0; i < n; ++i)
        x[i] = static_cast<double>(i - kStencilHalfWidth);

    // c[k][j]: weight of node j for the k-th derivative.
    std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
    c[0][0] = 1.0;
    double c1 = 1.0;
    for (int i = 1; i < n; ++i) {
        double c2 = 1.0;
        const int mn = std::min(i, m);
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            for (int k = mn; k >= 0; --k) {
                const double prev_i = k > 0 ? c[k - 1][i - 1] : 0.0;
                c[k][i] = c1 * (k * prev_i - x[i - 1] * c[k][i - 1]) / c2;
            }
            for (int k = mn; k >= 0; --k) {
                const double prev_j = k > 0 ? c[k - 1][j] : 0.0;
                c[k][j] = (x[i] * c[k][j] - k * prev_j) / c3;
            }
        }
        c1 = c2;
    }
    std::array<std::array<double, 7>, m + 1> out{};
    for (int k = 0; k <= m; ++k)
        for (int j = 0; j < n; ++j)
            out[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = c[k][j];
    return out;
}

} // namespace

const std::array<double, 7>& centralWeights(int n)
{
    static const auto table = buildWeights();
    if (n < 0 || n > kMaxDerivativeOrder)
        throw std::domain_error("centralWeights: derivative order out of range");
    return table[static_cast<std::size_t>(n)];
}

int accuracyOrder(int n)
{
    // 7 symmetric nodes: error exponent is 7 - n rounded down to even.
    int p = 2 * kStencilHalfWidth + 1 - n;
    if (p % 2 != 0)
        --p;
    return std::max(p, 2);
}

Complex partial(const ComplexField& f, std::span<const double> xi, const MultiIndex& beta, double h)
{
    const std::size_t d = xi.size();
    if (beta.dimension() != d)
        throw std::domain_error("fd::partial: dimension mismatch");
    for (std::size_t i = 0; i < d; ++i)
        if (beta[i] > kMaxDerivativeOrder)
            throw std::domain_error("fd::partial: derivative order too high");

    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < d; ++i)
        if (beta[i] > 0)
            active.push_back(i);
    if (active.empty())
        return f(xi);

    std::vector<double> point(xi.begin(), xi.end());
    Complex sum = 0.0;
    auto recurse = [&](auto&& self, std::size_t level, double weight) -> void {
        if (level == active.size()) {
            sum += weight * f(point);
            return;
        }
        const std::size_t axis = active[level];
        const auto& w = centralWeights(beta[axis]);
        for (int o = -kStencilHalfWidth; o <= kStencilHalfWidth; ++o) {
            const double wo = w[static_cast<std::size_t>(o + kStencilHalfWidth)];
            if (wo == 0.0)
                continue;
            point[axis] = xi[axis] + o * h;
            self(self, level + 1, weight * wo);
        }
        point[axis] = xi[axis];
    };
    recurse(recurse, 0, 1.0);
    return sum / std::pow(h, beta.order());
}

Complex derivative(const ComplexField& f, std::span<const double> xi, const MultiIndex& beta, double baseStep)
{
    if (beta.order() == 0)
        return f(xi);
    double norm = 0.0;
    for (double v : xi)
        norm += v * v;
    const double step = baseStep * std::max(1.0, std::sqrt(norm));

    int p = 100;
    for (std::size_t i = 0; i < beta.dimension(); ++i)
        if (beta[i] > 0)
            p = std::min(p, accuracyOrder(beta[i]));

    const Complex d0 = partial(f, xi, beta, step);
    const Complex d1 = partial(f, xi, beta, step / 2);
    const Complex d2 = partial(f, xi, beta, step / 4);
    const double r1 = std::pow(2.0, p);
    const Complex e0 = (r1 * d1 - d0) / (r1 - 1.0);
    const Complex e1 = (r1 * d2 - d1) / (r1 - 1.0);
    const double r2 = std::pow(2.0, p + 2);
    return (r2 * e1 - e0) / (r2 - 1.0);
}

} // namespace mdsample::fd
