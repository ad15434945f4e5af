#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mdsample/calibrate.hpp"

#include <cmath>

using namespace mdsample;

namespace {

double maxResidual(const std::map<MultiIndex, double>& r)
{
    double m = 0.0;
    for (const auto& [gamma, v] : r)
        m = std::max(m, v);
    return m;
}

} // namespace

TEST_CASE("flatness residuals")
{
    const auto r0 = flatnessResiduals(makeExample(Family::ExampleIII, 1), deltaOperator(1), 1);
    CHECK(r0.at(MultiIndex{0}) < 1e-15);

    const Generator calibrated = makeExample(Family::ExampleV, 1, {{"b2", 2.0 / 3.0}});
    CHECK(maxResidual(flatnessResiduals(calibrated, deltaOperator(1), 4)) <= 1e-8);

    const auto plain = flatnessResiduals(makeExample(Family::ExampleV, 1), deltaOperator(1), 4);
    CHECK(plain.at(MultiIndex{2}) == doctest::Approx(4.0 * kPi * kPi / 3.0).epsilon(1e-8));

    CHECK_THROWS_AS(flatnessResiduals(calibrated, deltaOperator(1), 6), std::domain_error);
}

TEST_CASE("one-dimensional calibration under point sampling")
{
    const CalibrationResult r = solveFreeParams(Family::ExampleV, 1, deltaOperator(1), 4);
    CHECK(std::abs(r.params.at("b1")) < 1e-9);
    CHECK(std::abs(r.params.at("b2") - 2.0 / 3.0) < 1e-9);
    CHECK(std::abs(r.params.at("b3")) < 1e-9);
    CHECK_FALSE(r.minimum_norm);
    CHECK(maxResidual(r.residuals) < kCalibrationTolerance);
}

TEST_CASE("one-dimensional calibration against ball moments")
{
    for (double h : {0.25, 0.5, 1.0}) {
        const CalibrationResult r = solveFreeParams(Family::ExampleV, 1, ballMoments(1, 3, h), 4);
        CHECK(std::abs(r.params.at("b1")) < 1e-9);
        CHECK(std::abs(r.params.at("b2") - (2.0 / 3.0 + 2.0 * h * h / 3.0)) < 1e-9);
        CHECK(std::abs(r.params.at("b3")) < 1e-9);
        CHECK(maxResidual(r.residuals) < kCalibrationTolerance);
    }
}

TEST_CASE("two-dimensional calibration")
{
    // D^(2,0) of phi_hat is pi^2 (2 b1 - 1); the symbol contributes -8 pi^2 a_(2,0).
    for (double h : {0.25, 0.5}) {
        const DiffOperator op = ballMoments(2, 2, h);
        const double a20 = op.coefficient(MultiIndex{2, 0}).real();
        const CalibrationResult r = solveFreeParams(Family::ExampleIV, 2, op, 3);
        CHECK(std::abs(r.params.at("b1") - (0.5 + 4.0 * a20)) < 1e-9);
        CHECK(std::abs(r.params.at("b2") - (0.5 + 4.0 * a20)) < 1e-9);
        CHECK(maxResidual(r.residuals) < kCalibrationTolerance);
    }
    const CalibrationResult r = solveFreeParams(Family::ExampleIV, 2, deltaOperator(2), 3);
    CHECK(std::abs(r.params.at("b1") - 0.5) < 1e-9);
}

TEST_CASE("round trip over catalog pairings")
{
    struct Case
    {
        Family family;
        std::size_t d;
        DiffOperator op;
        int n;
    };
    const std::vector<Case> cases{
        {Family::ExampleV, 1, deltaOperator(1), 4},        {Family::ExampleV, 1, ballMoments(1, 3, 0.5), 4},
        {Family::ExampleV, 1, ballMoments(1, 1, 0.5), 4},  {Family::ExampleV, 1, deltaOperator(1), 2},
        {Family::ExampleIV, 2, deltaOperator(2), 3},       {Family::ExampleIV, 2, ballMoments(2, 2, 0.5), 3},
        {Family::ExampleIII, 1, ballMoments(1, 1, 0.5), 2}, {Family::ExampleIII, 2, deltaOperator(2), 2},
    };
    for (const auto& c : cases) {
        const CalibrationResult r = solveFreeParams(c.family, c.d, c.op, c.n);
        const Generator g = makeExample(c.family, c.d, r.params);
        CHECK(maxResidual(flatnessResiduals(g, c.op, c.n)) < kCalibrationTolerance);
        CHECK(r.target_order == c.n);
    }
}

TEST_CASE("underdetermined systems take the minimum-norm solution")
{
    // Only the zeroth and first conditions: b1 is pinned, b2 and b3 are free.
    const CalibrationResult r = solveFreeParams(Family::ExampleV, 1, deltaOperator(1), 2);
    CHECK(r.minimum_norm);
    CHECK(std::abs(r.params.at("b2")) < 1e-12);
    CHECK(std::abs(r.params.at("b3")) < 1e-12);
}

TEST_CASE("unreachable conditions are reported")
{
    try {
        solveFreeParams(Family::ExampleIII, 1, deltaOperator(1), 3);
        FAIL("expected a calibration failure");
    } catch (const CalibrationError& e) {
        CHECK(e.offending() == MultiIndex{2});
    }
    CHECK_THROWS_AS(solveFreeParams(Family::ExampleV, 1, deltaOperator(1), 5), CalibrationError);
}

TEST_CASE("flatness order")
{
    CHECK(flatnessOrder(makeExample(Family::ExampleIII, 1), deltaOperator(1), 5) == 2);
    CHECK(flatnessOrder(makeExample(Family::ExampleV, 1), deltaOperator(1), 4) == 2);
    CHECK(flatnessOrder(makeExample(Family::ExampleV, 1, {{"b2", 2.0 / 3.0}}), deltaOperator(1), 4) == 4);
    CHECK(flatnessOrder(makeExample(Family::ExampleV, 1, {{"b2", 2.0 / 3.0}}), ballMoments(1, 3, 0.5), 4) == 2);
}
