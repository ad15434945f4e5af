#include "mdsample/cli.hpp"

#include "mdsample/analysis.hpp"
#include "mdsample/calibrate.hpp"
#include "mdsample/config.hpp"
#include "mdsample/diffop.hpp"
#include "mdsample/expansion.hpp"
#include "mdsample/generators.hpp"
#include "mdsample/taylor.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace mdsample {

using nlohmann::json;

namespace {

std::string readFile(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config", "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void writeFile(const std::filesystem::path& path, const std::string& content)
{
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
}

std::string fmt17(double v)
{
    std::ostringstream s;
    s.imbue(std::locale::classic());
    s << std::setprecision(17) << v;
    return s.str();
}

int coeffsCommand(std::size_t dim, int order, double h, std::ostream& out)
{
    const DiffOperator op = ballMoments(dim, order, h);
    json coeffs = json::object();
    for (const auto& beta : enumerateDelta(order + 1, dim))
        coeffs[beta.str()] = op.coefficient(beta).real();
    out << json{{"dimension", dim}, {"N", order}, {"h", h}, {"coefficients", coeffs}}.dump(2) << "\n";
    return kExitPass;
}

DiffOperator operatorFromFlags(const std::string& kind, std::size_t dim, int N, double h)
{
    if (kind == "delta")
        return deltaOperator(dim);
    if (kind == "ball")
        return ballMoments(dim, N, h);
    throw ConfigError("operator", "expected delta or ball");
}

int calibrateCommand(const std::string& family, std::size_t dim, const std::string& opKind, int N, double h,
                     int order, std::ostream& out)
{
    const DiffOperator op = operatorFromFlags(opKind, dim, N, h);
    try {
        const CalibrationResult cal = solveFreeParams(parseFamily(family), dim, op, order);
        out << calibrationJson(cal).dump(2) << "\n";
        return kExitPass;
    } catch (const CalibrationError& e) {
        out << json{{"error", e.what()}, {"offending_condition", e.offending().str()}}.dump(2) << "\n";
        return kExitFail;
    }
}

int strangFixCommand(const std::string& family, std::size_t dim, const std::string& params, int nMax,
                     std::ostream& out)
{
    ParameterMap map;
    if (!params.empty()) {
        json p;
        try {
            p = json::parse(params);
        } catch (const json::parse_error&) {
            throw ConfigError("params", "expected a JSON object");
        }
        if (!p.is_object())
            throw ConfigError("params", "expected a JSON object");
        for (const auto& [k, v] : p.items()) {
            if (!v.is_number())
                throw ConfigError("params." + k, "expected a number");
            map[k] = v.get<double>();
        }
    }
    const Generator g = makeExample(parseFamily(family), dim, map);
    json entries = json::array();
    for (const auto& e : strangFixTable(g, nMax))
        entries.push_back({{"k", e.lattice_point}, {"beta", e.beta.str()}, {"magnitude", e.magnitude}});
    const int order = strangFixOrder(g, nMax);
    out << json{{"family", family},
                {"dimension", dim},
                {"order", order >= kUnboundedOrder ? json("unbounded") : json(order)},
                {"entries", entries}}
               .dump(2)
        << "\n";
    return kExitPass;
}

int lemma10Command(std::size_t dim, int trials, std::uint64_t seed, int degree, std::ostream& out)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> entry(-3, 3);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    double worst = 0.0;
    const auto n = static_cast<Eigen::Index>(dim);
    for (int t = 0; t < trials; ++t) {
        const Polynomial f = Polynomial::random(dim, degree, rng);
        RealMatrix a(n, n);
        do {
            for (Eigen::Index r = 0; r < n; ++r)
                for (Eigen::Index c = 0; c < n; ++c)
                    a(r, c) = entry(rng);
        } while (std::abs(a.determinant()) < 0.5);
        Point x(dim), s(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            x[i] = coord(rng);
            s[i] = coord(rng);
        }
        worst = std::max(worst, verifyLemma10(f, a, x, s, degree));
    }
    const bool pass = worst < 1e-10;
    out << json{{"dimension", dim}, {"trials", trials}, {"seed", seed}, {"max_residual", worst}, {"pass", pass}}.dump(2)
        << "\n";
    return pass ? kExitPass : kExitFail;
}

int expandCommand(const std::string& configPath, int level, int samples, const std::string& outDir,
                  std::ostream& out)
{
    const ExperimentConfig cfg = parseConfig(readFile(configPath));
    const DilationMatrix m = buildDilation(cfg);
    const std::size_t d = m.dimension();
    const Signal f = buildSignal(cfg);
    const ResolvedGenerator resolved = buildGenerator(cfg);
    const CoefficientRule rule = buildRule(cfg);
    const double halfwidth = cfg.study.domain_halfwidth.value_or(f.supportHalfwidth());
    const Box domain = Box::cube(d, halfwidth);
    const Grid grid(domain, 2.0 * halfwidth / samples);
    std::vector<Point> points;
    for (std::size_t i = 0; i < grid.size(); ++i)
        points.push_back(grid.point(i));
    const ExpansionResult result =
        expand(resolved.generator, rule, f, m, level, domain, points, cfg.study.truncation_tol);

    std::string csv;
    for (std::size_t i = 0; i < d; ++i)
        csv += d == 1 ? "x," : "x" + std::to_string(i + 1) + ",";
    csv += "re,im\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (double c : points[i])
            csv += fmt17(c) + ",";
        csv += fmt17(result.values[i].real()) + "," + fmt17(result.values[i].imag()) + "\n";
    }
    const auto path = std::filesystem::path(outDir) / "expand.csv";
    writeFile(path, csv);
    out << "wrote " << points.size() << " points (" << result.lattice.size() << " lattice terms) to "
        << path.string() << "\n";
    return kExitPass;
}

int studyCommand(const std::string& configPath, const std::string& outDir, std::ostream& out)
{
    const ExperimentConfig cfg = parseConfig(readFile(configPath));
    const ConvergenceReport report = convergenceStudy(cfg);
    const std::filesystem::path dir(outDir);
    writeFile(dir / "study.csv", reportCsv(report));
    writeFile(dir / "report.json", reportJson(report).dump(2) + "\n");
    out << reportCsv(report);
    out << "fitted_slope="
        << (report.fitted_slope ? fmt17(*report.fitted_slope) : std::string("n/a"))
        << " predicted_rate=" << report.predicted_rate << " (" << report.predicted_case << ")"
        << " verdict=" << report.verdict << "\n";
    return report.verdict == "pass" ? kExitPass : kExitFail;
}

} // namespace

int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Sampling expansions with matrix dilations"};
    // "-h" is taken by the ball radius.
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);

    std::size_t dim = 1;
    int order = 1;
    double h = 1.0;
    auto* coeffs = app.add_subcommand("coeffs", "Ball-moment operator coefficients as JSON");
    coeffs->add_option("--dim", dim)->required();
    coeffs->add_option("--order", order, "Largest derivative order N")->required();
    coeffs->add_option("--h", h, "Ball radius")->required();

    std::string family, opKind = "delta", params;
    int target = 4, N = 0;
    auto* calibrate = app.add_subcommand("calibrate", "Solve the flatness conditions for free parameters");
    calibrate->add_option("--family", family)->required();
    calibrate->add_option("--dim", dim)->required();
    calibrate->add_option("--operator", opKind, "delta or ball");
    calibrate->add_option("--N", N);
    calibrate->add_option("--h", h);
    calibrate->add_option("--order", target, "Number of flatness orders to enforce");

    int nMax = 5;
    auto* strangFix = app.add_subcommand("strang-fix", "Strang-Fix residual table and detected order");
    strangFix->add_option("--family", family)->required();
    strangFix->add_option("--dim", dim)->required();
    strangFix->add_option("--params", params, "JSON object of generator parameters");
    strangFix->add_option("--nmax", nMax);

    int trials = 20, degree = 4;
    std::uint64_t seed = 1;
    auto* lemma10 = app.add_subcommand("lemma10", "Randomized check of the Taylor chain-rule identity");
    lemma10->add_option("--dim", dim)->required();
    lemma10->add_option("--trials", trials);
    lemma10->add_option("--seed", seed);
    lemma10->add_option("--degree", degree);

    std::string configPath, outDir = "out";
    int level = 3, samples = 256;
    auto* expandCmd = app.add_subcommand("expand", "Evaluate one expansion level on a grid");
    expandCmd->add_option("config", configPath)->required();
    expandCmd->add_option("--level", level);
    expandCmd->add_option("--samples", samples, "Grid points per axis");
    expandCmd->add_option("--out", outDir);

    auto* study = app.add_subcommand("study", "Convergence-order study");
    study->add_option("config", configPath)->required();
    study->add_option("--out", outDir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitConfigError;
    }

    try {
        if (*coeffs)
            return coeffsCommand(dim, order, h, out);
        if (*calibrate)
            return calibrateCommand(family, dim, opKind, N, h, target, out);
        if (*strangFix)
            return strangFixCommand(family, dim, params, nMax, out);
        if (*lemma10)
            return lemma10Command(dim, trials, seed, degree, out);
        if (*expandCmd)
            return expandCommand(configPath, level, samples, outDir, out);
        if (*study)
            return studyCommand(configPath, outDir, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const CalibrationError& e) {
        err << "calibration failed: " << e.what() << "\n";
        return kExitFail;
    } catch (const std::domain_error& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitConfigError;
}

} // namespace mdsample
