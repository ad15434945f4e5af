#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mdsample/calibrate.hpp"
#include "mdsample/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace mdsample;

namespace {

Signal linear1d()
{
    return signals::polynomial(Polynomial::monomial(MultiIndex{1}));
}

Signal square1d()
{
    return signals::polynomial(Polynomial::monomial(MultiIndex{2}));
}

std::size_t supportSize(const Generator& g, const DilationMatrix& m, int j, const Box& box, double tol = 1e-10)
{
    return latticeSupport(g, m, j, box, tol).size();
}

} // namespace

TEST_CASE("hat lattice on the unit interval")
{
    const Generator hat = makeExample(Family::ExampleIII, 1);
    const auto lattice = latticeSupport(hat, catalog::scalar(2), 0, Box{{0.0}, {1.0}});
    CHECK(lattice.size() == 3);
    // Brute-force oracle: k whose support (k - 1, k + 1] meets [0, 1].
    for (int j = 0; j <= 4; ++j) {
        const double scale = std::pow(2.0, j);
        std::size_t expected = 0;
        for (int k = -100; k <= 100; ++k)
            if (k - 1 < scale * 1.0 && k + 1 >= 0.0)
                ++expected;
        CHECK(supportSize(hat, catalog::scalar(2), j, Box{{0.0}, {1.0}}) == expected);
    }
}

TEST_CASE("lattice support grows with the domain")
{
    const Generator g = makeExample(Family::ExampleIII, 2);
    for (const auto& m : {catalog::twiceIdentity(2), catalog::quincunx()}) {
        for (int j = 0; j <= 3; ++j) {
            const auto small = latticeSupport(g, m, j, Box{{-0.5, -0.2}, {0.3, 0.4}});
            const auto large = latticeSupport(g, m, j, Box{{-0.7, -0.3}, {0.5, 0.9}});
            for (const auto& k : small)
                CHECK(std::find(large.begin(), large.end(), k) != large.end());
        }
    }
}

TEST_CASE("quincunx lattice covers every term that touches the domain")
{
    // Sample points densely and check that every k with phi(M^j x - k) != 0
    // is in the support set.
    const Generator g = makeExample(Family::ExampleIII, 2);
    const DilationMatrix m = catalog::quincunx();
    const Box box{{-0.6, -0.4}, {0.5, 0.7}};
    for (int j = 1; j <= 4; ++j) {
        const auto lattice = latticeSupport(g, m, j, box);
        const CoefficientField field(lattice);
        const RealMatrix mj = m.power(j);
        std::mt19937_64 rng(static_cast<std::uint64_t>(j));
        std::uniform_real_distribution<double> ux(box.lo[0], box.hi[0]), uy(box.lo[1], box.hi[1]);
        for (int s = 0; s < 400; ++s) {
            const Eigen::Vector2d x(ux(rng), uy(rng));
            const Eigen::Vector2d y = mj * x;
            for (int k0 = static_cast<int>(std::floor(y(0))) - 1; k0 <= static_cast<int>(std::ceil(y(0))) + 1; ++k0)
                for (int k1 = static_cast<int>(std::floor(y(1))) - 1; k1 <= static_cast<int>(std::ceil(y(1))) + 1;
                     ++k1) {
                    const Point arg{y(0) - k0, y(1) - k1};
                    if (g.spatial(arg) != Complex(0.0))
                        CHECK(field.contains(std::vector<int>{k0, k1}));
                }
        }
    }
}

TEST_CASE("unbounded generators truncate at a tail radius")
{
    const Generator g = makeExample(Family::ExampleI, 1);
    const DilationMatrix m = catalog::scalar(2);
    const Box box{{0.0}, {0.0}};
    const double coarse = static_cast<double>(supportSize(g, m, 0, box, 1e-8));
    const double fine = static_cast<double>(supportSize(g, m, 0, box, 1e-10));
    // Squared-sinc tails: radius proportional to tol^{-1/2}.
    CHECK(fine / coarse == doctest::Approx(10.0).epsilon(0.01));
}

TEST_CASE("coefficient rules")
{
    const DilationMatrix m2 = catalog::scalar(2);
    const std::vector<LatticePoint> origin{{0}};

    const CoefficientField exact = coefficients(CoefficientRule::exact(), signals::gaussian(1), m2, 3, origin);
    CHECK(exact.at(std::vector<int>{0}) == Complex(1.0));

    const double h = 0.5;
    const CoefficientField avg = coefficients(CoefficientRule::falsified(h), square1d(), m2, 1, origin);
    CHECK(avg.at(std::vector<int>{0}).real() == doctest::Approx(std::pow(0.5 * h, 2) / 3.0).epsilon(1e-13));

    const CoefficientField diff =
        coefficients(CoefficientRule::differential(ballMoments(1, 3, h)), square1d(), m2, 1, origin);
    CHECK(diff.at(std::vector<int>{0}).real() == doctest::Approx(std::pow(0.5 * h, 2) / 3.0).epsilon(1e-13));
}

TEST_CASE("differential coefficients under the identity operator are samples")
{
    std::vector<LatticePoint> lattice;
    for (int k = -20; k <= 20; ++k)
        lattice.push_back({k});
    for (const Signal& f : {signals::gaussian(1, 0.2), signals::laplace1d(1.0 / 3.0), signals::matern1d()}) {
        for (int j = 0; j <= 6; ++j) {
            const auto a = coefficients(CoefficientRule::exact(), f, catalog::scalar(2), j, lattice);
            const auto b = coefficients(CoefficientRule::differential(deltaOperator(1)), f, catalog::scalar(2), j,
                                        lattice);
            for (const auto& k : lattice)
                CHECK(a.at(k) == b.at(k));
        }
    }
}

TEST_CASE("evaluation")
{
    const Generator hat = makeExample(Family::ExampleIII, 1);
    const DilationMatrix m2 = catalog::scalar(2);
    const std::vector<LatticePoint> lattice{{-1}, {0}, {1}, {2}};

    const CoefficientField zero(lattice);
    CHECK(evaluate(hat, m2, 0, zero, {Point{0.3}})[0] == Complex(0.0));

    const CoefficientField c = coefficients(CoefficientRule::exact(), linear1d(), m2, 0, lattice);
    CHECK(evaluate(hat, m2, 0, c, {Point{0.5}})[0].real() == doctest::Approx(0.5));

    const CoefficientField partial(std::vector<LatticePoint>{{0}});
    CHECK_THROWS_AS(evaluate(hat, m2, 0, partial, {Point{0.5}}), std::domain_error);
}

TEST_CASE("sinc-squared expansions interpolate on the lattice")
{
    const Generator g = makeExample(Family::ExampleI, 1);
    const DilationMatrix m2 = catalog::scalar(2);
    const Signal f = signals::gaussian(1, 0.1);
    const int j = 2;
    std::vector<Point> points;
    for (int k = -8; k <= 8; ++k)
        points.push_back({k / 4.0});
    const ExpansionResult r = expand(g, CoefficientRule::exact(), f, m2, j, Box::cube(1, 2.0), points, 1e-10);
    for (std::size_t i = 0; i < points.size(); ++i)
        CHECK(std::abs(r.values[i] - f(points[i])) < 1e-10);
}

TEST_CASE("hat expansions reproduce linear functions")
{
    const Generator hat = makeExample(Family::ExampleIII, 1);
    const Signal f = signals::polynomial(Polynomial(1, {{MultiIndex{0}, 0.7}, {MultiIndex{1}, -1.3}}));
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Point> points(50);
    for (auto& p : points)
        p = {u(rng)};
    for (int j = 0; j <= 6; ++j) {
        const ExpansionResult r =
            expand(hat, CoefficientRule::exact(), f, catalog::scalar(2), j, Box::cube(1, 1.0), points);
        for (std::size_t i = 0; i < points.size(); ++i)
            CHECK(std::abs(r.values[i] - f(points[i])) < 1e-10);
    }
}

TEST_CASE("deviation")
{
    const DilationMatrix m2 = catalog::scalar(2);
    const double h = 0.5;
    for (int j = 0; j <= 4; ++j) {
        for (int k : {-3, 0, 5}) {
            const std::vector<int> kk{k};
            CHECK(std::abs(deviation(linear1d(), ballMoments(1, 1, h), m2, j, kk, h)) < 1e-12);
            CHECK(std::abs(deviation(square1d(), ballMoments(1, 3, h), m2, j, kk, h)) < 1e-12);
        }
        const double a = std::pow(2.0, -j) * h;
        CHECK(deviation(square1d(), ballMoments(1, 1, h), m2, j, std::vector<int>{0}, h).real() ==
              doctest::Approx(a * a / 3.0).epsilon(1e-12));
    }
    // A linear function in 2D under an anisotropic dilation.
    const Signal lin2 = signals::polynomial(Polynomial(2, {{MultiIndex{1, 0}, 2.0}, {MultiIndex{0, 1}, -1.0}}));
    CHECK(std::abs(deviation(lin2, ballMoments(2, 2, h), catalog::anisotropic23(), 2, std::vector<int>{3, -1}, h)) <
          1e-12);
}

TEST_CASE("coefficient fields report missing points")
{
    CoefficientField f(std::vector<LatticePoint>{{0, 0}, {2, 1}});
    CHECK(f.size() == 2);
    CHECK(f.contains(std::vector<int>{2, 1}));
    CHECK_FALSE(f.contains(std::vector<int>{1, 1}));
    CHECK_THROWS_AS(f.at(std::vector<int>{1, 1}), std::domain_error);
    CHECK_THROWS_AS(f.set(std::vector<int>{5, 5}, 1.0), std::domain_error);
    f.set(std::vector<int>{2, 1}, Complex(0.0, 2.0));
    CHECK(f.at(std::vector<int>{2, 1}) == Complex(0.0, 2.0));
}
