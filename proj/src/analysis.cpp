#include "mdsample/analysis.hpp"

#include "mdsample/calibrate.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mdsample {

using detail::parallelFor;
using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kChunk = 4096;

} // namespace

Grid::Grid(const Box& domain, double targetSpacing, double anchor) : domain_(domain), anchor_(anchor)
{
    const std::size_t d = domain.dimension();
    if (d == 0 || domain.hi.size() != d)
        throw std::domain_error("Grid: empty or malformed domain");
    if (!(targetSpacing > 0.0))
        throw std::domain_error("Grid: spacing must be positive");
    for (std::size_t i = 0; i < d; ++i) {
        const double length = domain.hi[i] - domain.lo[i];
        if (!(length > 0.0))
            throw std::domain_error("Grid: empty domain");
        const auto n = static_cast<std::size_t>(std::max(1.0, std::round(length / targetSpacing)));
        counts_.push_back(n);
        spacing_.push_back(length / static_cast<double>(n));
        size_ *= n;
    }
}

double Grid::cellVolume() const
{
    double v = 1.0;
    for (double s : spacing_)
        v *= s;
    return v;
}

void Grid::point(std::size_t idx, std::span<double> out) const
{
    for (std::size_t i = counts_.size(); i-- > 0;) {
        const std::size_t c = idx % counts_[i];
        idx /= counts_[i];
        out[i] = domain_.lo[i] + (static_cast<double>(c) + anchor_) * spacing_[i];
    }
}

Point Grid::point(std::size_t idx) const
{
    Point x(counts_.size());
    point(idx, x);
    return x;
}

namespace {

double reduceError(const Signal& f, const Grid& grid, double p,
                   const std::function<Complex(std::size_t, std::span<const double>)>& approx)
{
    if (grid.size() == 0)
        throw std::domain_error("lpError: empty grid");
    if (!(p >= 1.0))
        throw std::domain_error("lpError: need p >= 1");
    const std::size_t chunks = (grid.size() + kChunk - 1) / kChunk;
    std::vector<double> partial(chunks, 0.0);
    const bool sup = std::isinf(p);
    parallelFor(chunks, [&](std::size_t c) {
        Point x(grid.dimension());
        const std::size_t end = std::min(grid.size(), (c + 1) * kChunk);
        double acc = 0.0;
        for (std::size_t i = c * kChunk; i < end; ++i) {
            grid.point(i, x);
            const double e = std::abs(Complex(f(x)) - approx(i, x));
            acc = sup ? std::max(acc, e) : acc + std::pow(e, p);
        }
        partial[c] = acc;
    });
    double total = 0.0;
    for (double v : partial)
        total = sup ? std::max(total, v) : total + v;
    return sup ? total : std::pow(total * grid.cellVolume(), 1.0 / p);
}

} // namespace

double lpError(const Signal& f, const Grid& grid, std::span<const Complex> approx, double p)
{
    if (approx.size() != grid.size())
        throw std::domain_error("lpError: value count does not match the grid");
    return reduceError(f, grid, p, [&](std::size_t i, std::span<const double>) { return approx[i]; });
}

double lpError(const Signal& f, const Grid& grid, const std::function<Complex(std::span<const double>)>& approx,
               double p)
{
    return reduceError(f, grid, p, [&](std::size_t, std::span<const double> x) { return approx(x); });
}

RateFit fitRate(std::span<const double> scales, std::span<const double> errors, int skip)
{
    if (scales.size() != errors.size())
        throw std::domain_error("fitRate: length mismatch");
    if (skip < 0)
        throw std::domain_error("fitRate: negative skip");
    std::vector<double> xs, ys;
    for (std::size_t i = static_cast<std::size_t>(skip); i < scales.size(); ++i) {
        if (!(errors[i] > 1e-13) || !(scales[i] > 0.0))
            throw std::domain_error("fitRate: errors must lie above the 1e-13 floor and scales be positive");
        xs.push_back(std::log(scales[i]));
        ys.push_back(std::log(errors[i]));
    }
    if (xs.size() < 3)
        throw std::domain_error("fitRate: need at least 3 points after skipping");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx <= 1e-14 * (1.0 + mx * mx))
        throw std::domain_error("fitRate: degenerate fit, all scales equal");
    RateFit fit;
    fit.slope = sxy / sxx;
    double ssRes = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (my + fit.slope * (xs[i] - mx));
        ssRes += r * r;
    }
    fit.r2 = syy > 0.0 ? 1.0 - ssRes / syy : 1.0;
    return fit;
}

std::string rateModeName(RateMode mode)
{
    switch (mode) {
    case RateMode::Sampling: return "sampling";
    case RateMode::Differential: return "differential";
    case RateMode::Falsified: return "falsified";
    case RateMode::Falsified1d: return "falsified1d";
    case RateMode::Flat: return "flat";
    }
    return "sampling";
}

RatePrediction predictedRate(int n, int N, double epsilon, std::size_t d, double p, RateMode mode)
{
    if (n < 0 || N < 0 || d == 0 || !(p >= 1.0))
        throw std::domain_error("predictedRate: invalid arguments");
    const double dp = std::isinf(p) ? 0.0 : static_cast<double>(d) / p;
    const double ni = n;
    switch (mode) {
    case RateMode::Sampling:
    case RateMode::Differential: {
        const double s = N + dp + epsilon;
        if (std::abs(ni - s) < 1e-12)
            return {ni, "log-factor"};
        if (ni < s)
            return {ni, "generator-limited"};
        return {s, "smoothness-limited"};
    }
    case RateMode::Falsified: {
        if (!(epsilon > 1.0))
            throw std::domain_error("predictedRate: falsified mode needs epsilon > 1");
        const double s = N + 1.0;
        return ni <= s ? RatePrediction{ni, "generator-limited"} : RatePrediction{s, "operator-limited"};
    }
    case RateMode::Falsified1d: {
        if (d != 1)
            throw std::domain_error("predictedRate: falsified1d mode is one-dimensional");
        const double s = N + 1.0 / p;
        return ni <= s ? RatePrediction{ni, "generator-limited"} : RatePrediction{s, "operator-limited"};
    }
    case RateMode::Flat: {
        const double s = N + dp + epsilon;
        return {s, std::isinf(s) ? "super-algebraic" : "band-limited"};
    }
    }
    return {ni, "generator-limited"};
}

ConvergenceReport convergenceStudy(const ExperimentConfig& cfg)
{
    const DilationMatrix m = buildDilation(cfg);
    const std::size_t d = m.dimension();
    const Signal f = buildSignal(cfg);
    ResolvedGenerator resolved = buildGenerator(cfg);
    const Generator& g = resolved.generator;
    const CoefficientRule rule = buildRule(cfg);
    const StudySpec& st = cfg.study;

    ConvergenceReport report;
    report.config_echo = toJson(cfg);
    report.calibration = resolved.calibration;
    report.slope_tolerance = st.slope_tolerance;

    // Operator the generator is matched against, and the rate regime.
    DiffOperator effective = deltaOperator(d);
    RateMode mode = RateMode::Sampling;
    if (rule.kind == RuleKind::Differential) {
        effective = *rule.op;
        mode = RateMode::Differential;
    } else if (rule.kind == RuleKind::Falsified) {
        effective = cfg.op.kind == OperatorSpec::Kind::Ball ? buildOperator(cfg) : ballMoments(d, 1, rule.h);
        mode = RateMode::Falsified;
    }
    if (g.flat_near_origin)
        mode = RateMode::Flat;

    const int cap = std::min(g.declared_sf_order, 5);
    const int n = std::min(g.declared_sf_order, flatnessOrder(g, effective, cap));
    report.generator_order = n;

    const FourierDecay decay = f.fourierDecay();
    const double smooth = decay.smoothness();
    RatePrediction prediction;
    if (mode == RateMode::Falsified) {
        const double epsEff = smooth - effective.orderBound();
        if (epsEff > 1.0)
            prediction = predictedRate(n, effective.orderBound(), epsEff, d, st.p, mode);
        else if (d == 1)
            prediction = predictedRate(n, effective.orderBound(), epsEff, d, st.p, mode = RateMode::Falsified1d);
        else
            throw std::domain_error("falsified study: signal too rough for the operator (epsilon <= 1)");
    } else {
        prediction = predictedRate(n, decay.N, decay.epsilon, d, st.p, mode);
    }
    report.predicted_rate = prediction.rate;
    report.predicted_case = prediction.case_label;
    report.rate_mode = rateModeName(mode);

    double halfwidth = f.supportHalfwidth();
    if (g.compact())
        halfwidth += *g.support_radius * operatorNorm(m.power(-st.j_min)) * std::sqrt(static_cast<double>(d));
    if (st.domain_halfwidth)
        halfwidth = *st.domain_halfwidth;
    if (!std::isfinite(halfwidth))
        throw std::domain_error("study: signal has no finite support box; set study.domain_halfwidth");
    report.domain_halfwidth = halfwidth;
    const Box domain = Box::cube(d, halfwidth);

    const bool iso = m.isIsotropic();
    report.scale_kind = iso ? "isotropic" : "min-eigen-modulus";
    const double base = iso ? m.lambdaAbs() : m.minEigenModulus();

    for (int j = st.j_min; j <= st.j_max; ++j) {
        const auto lattice = latticeSupport(g, m, j, domain, st.truncation_tol);
        const CoefficientField coeffs = coefficients(rule, f, m, j, lattice);
        const Evaluator eval(g, m, j, coeffs, st.truncation_tol);
        const Grid grid(domain, operatorNorm(m.power(-j)) / st.grid_per_scale);
        const double err = lpError(f, grid, [&](std::span<const double> x) { return eval(x); }, st.p);
        report.levels.push_back(j);
        report.scales.push_back(std::pow(base, -j));
        report.errors.push_back(err);
    }

    std::vector<double> fitScales, fitErrors;
    for (std::size_t i = 0; i < report.levels.size(); ++i) {
        if (report.errors[i] < kErrorFloor) {
            report.floor_levels.push_back(report.levels[i]);
            continue;
        }
        if (static_cast<int>(i) < st.fit_skip)
            continue;
        report.fit_levels.push_back(report.levels[i]);
        fitScales.push_back(report.scales[i]);
        fitErrors.push_back(report.errors[i]);
    }
    if (fitScales.size() >= 3) {
        const RateFit fit = fitRate(fitScales, fitErrors, 0);
        report.fitted_slope = fit.slope;
        report.fit_r2 = fit.r2;
    }
    if (!report.fitted_slope || !std::isfinite(report.predicted_rate))
        report.verdict = "inconclusive";
    else
        report.verdict = std::abs(*report.fitted_slope - report.predicted_rate) <= st.slope_tolerance ? "pass" : "fail";
    return report;
}

namespace {

std::string formatDouble(double v)
{
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out << std::setprecision(17) << v;
    return out.str();
}

} // namespace

std::string reportCsv(const ConvergenceReport& report)
{
    std::string out = "j,log_scale,error\n";
    for (std::size_t i = 0; i < report.levels.size(); ++i)
        out += std::to_string(report.levels[i]) + "," + formatDouble(std::log(report.scales[i])) + "," +
               formatDouble(report.errors[i]) + "\n";
    return out;
}

json calibrationJson(const CalibrationResult& cal)
{
    json params = json::object();
    for (const auto& [k, v] : cal.params)
        params[k] = v.imag() == 0.0 ? json(v.real()) : json::array({v.real(), v.imag()});
    json residuals = json::object();
    for (const auto& [gamma, r] : cal.residuals)
        residuals[gamma.str()] = r;
    json dropped = json::array();
    for (const auto& gamma : cal.dropped)
        dropped.push_back(gamma.str());
    return {{"params", params},
            {"residuals", residuals},
            {"target_order", cal.target_order},
            {"minimum_norm", cal.minimum_norm},
            {"dropped_conditions", dropped}};
}

json reportJson(const ConvergenceReport& report)
{
    json out;
    out["levels"] = report.levels;
    out["scales"] = report.scales;
    out["errors"] = report.errors;
    out["fitted_slope"] = report.fitted_slope ? json(*report.fitted_slope) : json(nullptr);
    out["fit_r2"] = report.fit_r2 ? json(*report.fit_r2) : json(nullptr);
    out["fit_levels"] = report.fit_levels;
    out["floor_levels"] = report.floor_levels;
    out["predicted_rate"] = std::isfinite(report.predicted_rate) ? json(report.predicted_rate) : json("infinity");
    out["predicted_case"] = report.predicted_case;
    out["rate_mode"] = report.rate_mode;
    out["generator_order"] = report.generator_order;
    out["scale_kind"] = report.scale_kind;
    out["domain_halfwidth"] = report.domain_halfwidth;
    out["slope_tolerance"] = report.slope_tolerance;
    out["verdict"] = report.verdict;
    if (report.calibration)
        out["calibration"] = calibrationJson(*report.calibration);
    out["config_echo"] = report.config_echo;
    return out;
}

std::vector<double> deviationMaxima(const Signal& f, const DiffOperator& op, const DilationMatrix& m, int jMin,
                                    int jMax, double h, const Box& domain, const QuadratureSpec& quad)
{
    const std::size_t d = m.dimension();
    std::vector<double> out;
    for (int j = jMin; j <= jMax; ++j) {
        const RealMatrix a = m.power(-j);
        // Lattice points whose image lies in the domain.
        Generator point;
        point.dimension = d;
        point.support_radius = 0.0;
        std::vector<LatticePoint> ks;
        for (auto& k : latticeSupport(point, m, j, domain)) {
            RealVector kv(static_cast<Eigen::Index>(d));
            for (std::size_t i = 0; i < d; ++i)
                kv(static_cast<Eigen::Index>(i)) = k[i];
            const RealVector x = a * kv;
            bool inside = true;
            for (std::size_t i = 0; i < d; ++i)
                inside = inside && x(static_cast<Eigen::Index>(i)) >= domain.lo[i] &&
                         x(static_cast<Eigen::Index>(i)) <= domain.hi[i];
            if (inside)
                ks.push_back(std::move(k));
        }
        std::vector<double> dev(ks.size());
        parallelFor(ks.size(), [&](std::size_t i) { dev[i] = std::abs(deviation(f, op, m, j, ks[i], h, quad)); });
        out.push_back(dev.empty() ? 0.0 : *std::max_element(dev.begin(), dev.end()));
    }
    return out;
}

} // namespace mdsample
