#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mdsample/diffop.hpp"
#include "mdsample/quadrature.hpp"

#include <cmath>
#include <random>

using namespace mdsample;

TEST_CASE("delta operator")
{
    const DiffOperator delta = deltaOperator(1);
    REQUIRE(delta.coeffs().size() == 1);
    CHECK(delta.coefficient(MultiIndex{0}) == Complex(1.0));
    CHECK(delta.isIdentity());
    for (double xi : {-2.0, 0.0, 0.3})
        CHECK(symbol(delta, Point{xi}) == Complex(1.0));
    const Signal f = signals::gaussian(1);
    const auto m = catalog::scalar(2);
    const int k[] = {3};
    CHECK(applyToSignal(delta, f, m, 2, k) == Complex(std::exp(-kPi * 0.75 * 0.75)));
}

TEST_CASE("ball moments closed form")
{
    for (double h : {0.25, 0.5, 1.0, 2.0}) {
        const DiffOperator l1 = ballMoments(1, 3, h);
        CHECK(l1.coefficient(MultiIndex{0}) == Complex(1.0));
        CHECK(l1.coefficient(MultiIndex{1}) == Complex(0.0));
        CHECK(l1.coefficient(MultiIndex{2}).real() == doctest::Approx(h * h / 6.0).epsilon(1e-12));
        CHECK(l1.coefficient(MultiIndex{3}) == Complex(0.0));

        const DiffOperator l2 = ballMoments(2, 2, h);
        CHECK(l2.coefficient(MultiIndex{2, 0}).real() == doctest::Approx(h * h / 8.0).epsilon(1e-12));
        CHECK(l2.coefficient(MultiIndex{0, 2}).real() == doctest::Approx(h * h / 8.0).epsilon(1e-12));
        CHECK(l2.coefficient(MultiIndex{1, 1}) == Complex(0.0));
    }
    CHECK(ballMoments(3, 1, 0.5).isIdentity());
    CHECK_THROWS_AS(ballMoments(1, 2, 0.0), std::domain_error);
    CHECK_THROWS_AS(ballMoments(1, -1, 1.0), std::domain_error);
    // Unit ball volumes.
    CHECK(ballMonomialIntegral(MultiIndex{0}, 1.0) == doctest::Approx(2.0));
    CHECK(ballMonomialIntegral(MultiIndex{0, 0}, 1.0) == doctest::Approx(kPi));
    CHECK(ballMonomialIntegral(MultiIndex{0, 0, 0}, 1.0) == doctest::Approx(4.0 * kPi / 3.0));
}

TEST_CASE("ball moments agree with Monte Carlo integration")
{
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    const double h = 0.8;
    const int samples = 1000000;
    for (std::size_t d = 1; d <= 3; ++d) {
        const auto betas = enumerateDelta(5, d);
        std::vector<double> sums(betas.size(), 0.0);
        std::vector<double> t(d);
        for (int s = 0; s < samples; ++s) {
            double norm = 0.0;
            for (auto& v : t) {
                v = normal(rng);
                norm += v * v;
            }
            const double r = h * std::pow(uniform(rng), 1.0 / static_cast<double>(d)) / std::sqrt(norm);
            for (auto& v : t)
                v *= r;
            for (std::size_t b = 0; b < betas.size(); ++b)
                sums[b] += monomial(t, betas[b]);
        }
        const DiffOperator op = ballMoments(d, 4, h);
        for (std::size_t b = 0; b < betas.size(); ++b) {
            const double mc = sums[b] / samples / static_cast<double>(factorial(betas[b]));
            const double exact = op.coefficient(betas[b]).real();
            if (exact == 0.0)
                CHECK(std::abs(mc) < 2e-3);
            else
                CHECK(mc == doctest::Approx(exact).epsilon(5e-3));
        }
    }
}

TEST_CASE("symbol")
{
    const double a1 = 0.3, a2 = -0.7, xi = 0.45;
    const DiffOperator l2(1, 2, {{MultiIndex{0}, 1.0}, {MultiIndex{2}, a2}});
    CHECK(std::abs(symbol(l2, Point{xi}) - (1.0 - 4.0 * kPi * kPi * a2 * xi * xi)) < 1e-13);
    const DiffOperator l1(1, 1, {{MultiIndex{0}, 1.0}, {MultiIndex{1}, a1}});
    CHECK(std::abs(symbol(l1, Point{xi}) - Complex(1.0, -2.0 * kPi * a1 * xi)) < 1e-13);
    // Complex coefficients enter conjugated.
    const Complex a3(0.2, 0.5);
    const DiffOperator l3(1, 3, {{MultiIndex{0}, 1.0}, {MultiIndex{3}, a3}});
    const Complex expected = 1.0 + std::conj(a3) * 8.0 * std::pow(kPi, 3) * Complex(0.0, 1.0) * std::pow(xi, 3);
    CHECK(std::abs(symbol(l3, Point{xi}) - expected) < 1e-12);
    CHECK(symbol(ballMoments(2, 3, 0.5), Point{0.0, 0.0}) == Complex(1.0));
}

TEST_CASE("operator validation")
{
    CHECK_THROWS_AS(DiffOperator(1, 1, {{MultiIndex{1}, 1.0}}), std::domain_error);
    CHECK_THROWS_AS(DiffOperator(1, 1, {{MultiIndex{0}, 1.0}, {MultiIndex{2}, 1.0}}), std::domain_error);
    CHECK_THROWS_AS(DiffOperator(2, 1, {{MultiIndex{0}, 1.0}}), std::domain_error);
}

TEST_CASE("applyToSignal examples")
{
    const auto m = catalog::scalar(2);
    const double h = 0.5;
    const Signal square = signals::polynomial(Polynomial::monomial(MultiIndex{2}));
    const int k1[] = {1};
    const DiffOperator l(1, 2, {{MultiIndex{0}, 1.0}, {MultiIndex{2}, h * h / 6.0}});
    CHECK(std::abs(applyToSignal(l, square, m, 1, k1) - (0.25 + h * h / 12.0)) < 1e-15);

    const Signal linear = signals::polynomial(Polynomial(1, {{MultiIndex{0}, 0.5}, {MultiIndex{1}, -2.0}}));
    for (int j = 0; j < 4; ++j) {
        const int k[] = {j - 2};
        const double x = std::ldexp(static_cast<double>(j - 2), -j);
        CHECK(std::abs(applyToSignal(ballMoments(1, 3, 0.7), linear, m, j, k) - (0.5 - 2.0 * x)) < 1e-14);
    }

    const Signal rough = signals::laplace1d(0.25);
    CHECK_THROWS_AS(applyToSignal(ballMoments(1, 2, 0.5), rough, m, 1, k1), std::domain_error);
}

TEST_CASE("ball-moment operator reproduces ball averages of polynomials")
{
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> kd(-3, 3);
    const QuadratureSpec quad;
    for (std::size_t d = 1; d <= 2; ++d) {
        const auto m = d == 1 ? catalog::scalar(2) : catalog::quincunx();
        for (int N = 0; N <= 4; ++N) {
            const double h = 0.6;
            const DiffOperator op = ballMoments(d, N, h);
            const Signal f = signals::polynomial(Polynomial::random(d, N, rng));
            for (int j = 0; j <= 3; ++j) {
                std::vector<int> k(d);
                for (auto& v : k)
                    v = kd(rng);
                const RealMatrix a = m.power(-j);
                RealVector kv(static_cast<Eigen::Index>(d));
                for (std::size_t i = 0; i < d; ++i)
                    kv(static_cast<Eigen::Index>(i)) = k[i];
                const RealVector x = a * kv;
                const BallRule rule(d, h, quad);
                const double average = rule.pullbackAverage(f, std::span<const double>(x.data(), d), a).value;
                const Complex applied = applyToSignal(op, f, m, j, k);
                CHECK(std::abs(applied - average) < 1e-12 * (1.0 + std::abs(average)));
            }
        }
    }
}

TEST_CASE("scaled operator matches the chain-rule route")
{
    const auto m = catalog::quincunx();
    const Signal f = signals::gaussian(2, 0.2);
    const DiffOperator op = ballMoments(2, 4, 0.5);
    for (int j = 0; j <= 4; ++j) {
        const ScaledOperator scaled(op, m.power(-j));
        for (int k1 = -2; k1 <= 2; ++k1)
            for (int k2 = -2; k2 <= 2; ++k2) {
                const int k[] = {k1, k2};
                CHECK(std::abs(scaled.apply(f, k) - applyToSignal(op, f, m, j, k)) < 1e-13);
            }
    }
}
