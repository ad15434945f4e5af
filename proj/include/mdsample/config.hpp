#pragma once

#include "mdsample/calibrate.hpp"
#include "mdsample/diffop.hpp"
#include "mdsample/dilation.hpp"
#include "mdsample/expansion.hpp"
#include "mdsample/generators.hpp"
#include "mdsample/signals.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdsample {

/// Invalid configuration; `field` is a dotted path such as "study.j_max".
class ConfigError : public std::runtime_error
{
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field))
    {
    }
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct GeneratorSpec
{
    Family family = Family::ExampleIII;
    bool calibrate = false;
    ParameterMap params;
    /// Flatness order to calibrate for; defaults to the declared Strang-Fix order.
    std::optional<int> target_order;
};

struct OperatorSpec
{
    enum class Kind
    {
        Delta,
        Ball
    };
    Kind kind = Kind::Delta;
    int N = 0;
    double h = 0.0;
};

struct SignalSpec
{
    std::string kind = "gaussian";
    double offset = 0.0;
};

struct RuleSpec
{
    RuleKind kind = RuleKind::Exact;
    std::optional<double> h;
};

struct StudySpec
{
    int j_min = 1;
    int j_max = 6;
    /// 2 or infinity.
    double p = std::numeric_limits<double>::infinity();
    std::optional<double> domain_halfwidth;
    double grid_per_scale = 8.0;
    double truncation_tol = 1e-10;
    int quad_order = 16;
    int fit_skip = 2;
    double slope_tolerance = 0.25;
    std::uint64_t seed = 1;
};

struct ExperimentConfig
{
    std::vector<std::vector<std::int64_t>> dilation;
    GeneratorSpec generator;
    OperatorSpec op;
    SignalSpec signal;
    RuleSpec rule;
    StudySpec study;
};

/// Parses and validates a JSON document; missing optional fields take
/// their defaults. Throws ConfigError.
ExperimentConfig parseConfig(const std::string& text);

/// Fully resolved config, suitable for echoing in reports.
nlohmann::json toJson(const ExperimentConfig& cfg);

DilationMatrix buildDilation(const ExperimentConfig& cfg);
DiffOperator buildOperator(const ExperimentConfig& cfg);
Signal buildSignal(const ExperimentConfig& cfg);
QuadratureSpec buildQuadrature(const ExperimentConfig& cfg);
CoefficientRule buildRule(const ExperimentConfig& cfg);

struct ResolvedGenerator
{
    Generator generator;
    std::optional<CalibrationResult> calibration;
};

/// Builds the generator, calibrating against the configured operator when
/// requested.
ResolvedGenerator buildGenerator(const ExperimentConfig& cfg);

} // namespace mdsample
