#pragma once

#include "mdsample/config.hpp"
#include "mdsample/expansion.hpp"
#include "mdsample/signals.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mdsample {

/// Uniform tensor grid over a box with nodes at lo + (i + anchor) * spacing.
class Grid
{
public:
    /// Spacing is rounded per axis so that an integer number of cells fits.
    Grid(const Box& domain, double targetSpacing, double anchor = 0.70710678118654752440);

    std::size_t dimension() const { return counts_.size(); }
    std::size_t size() const { return size_; }
    const std::vector<std::size_t>& counts() const { return counts_; }
    const Point& spacing() const { return spacing_; }
    double cellVolume() const;
    /// Node with row-major linear index idx.
    Point point(std::size_t idx) const;
    void point(std::size_t idx, std::span<double> out) const;

private:
    Box domain_;
    Point spacing_;
    std::vector<std::size_t> counts_;
    double anchor_;
    std::size_t size_ = 1;
};

/// Discrete L_p norm of f - approx on the grid; p = infinity gives the max.
/// Complex approximants are measured by modulus.
double lpError(const Signal& f, const Grid& grid, std::span<const Complex> approx, double p);

/// Same, with the approximant evaluated on the fly; partial sums are reduced
/// in a fixed order so the result does not depend on the thread schedule.
double lpError(const Signal& f, const Grid& grid, const std::function<Complex(std::span<const double>)>& approx,
               double p);

struct RateFit
{
    double slope = 0.0;
    double r2 = 0.0;
};

/// Least-squares slope of log(error) against log(scale) after dropping the
/// first `skip` points. Needs at least 3 points with errors above 1e-13.
RateFit fitRate(std::span<const double> scales, std::span<const double> errors, int skip = 0);

enum class RateMode
{
    Sampling,
    Differential,
    Falsified,
    Falsified1d,
    Flat
};

std::string rateModeName(RateMode mode);

struct RatePrediction
{
    double rate = 0.0;
    std::string case_label;
};

/// Theoretical convergence order. `epsilon` may be infinite.
/// Falsified mode throws std::domain_error unless epsilon > 1.
RatePrediction predictedRate(int n, int N, double epsilon, std::size_t d, double p, RateMode mode);

inline constexpr double kErrorFloor = 1e-12;

struct ConvergenceReport
{
    std::vector<int> levels;
    std::vector<double> scales;
    std::vector<double> errors;
    std::optional<double> fitted_slope;
    std::optional<double> fit_r2;
    double predicted_rate = 0.0;
    std::string predicted_case;
    std::string rate_mode;
    /// "pass", "fail" or "inconclusive".
    std::string verdict;
    double slope_tolerance = 0.25;
    /// "isotropic" (|lambda|^-j) or "min-eigen-modulus" (theta^-j).
    std::string scale_kind;
    std::vector<int> fit_levels;
    std::vector<int> floor_levels;
    int generator_order = 0;
    double domain_halfwidth = 0.0;
    std::optional<CalibrationResult> calibration;
    nlohmann::json config_echo;
};

ConvergenceReport convergenceStudy(const ExperimentConfig& cfg);

/// CSV with header "j,log_scale,error", 17 significant digits.
std::string reportCsv(const ConvergenceReport& report);
nlohmann::json reportJson(const ConvergenceReport& report);
nlohmann::json calibrationJson(const CalibrationResult& cal);

/// max_k |deviation| over lattice points k with M^{-j}k in the domain, per level.
std::vector<double> deviationMaxima(const Signal& f, const DiffOperator& op, const DilationMatrix& m, int jMin,
                                    int jMax, double h, const Box& domain, const QuadratureSpec& quad = {});

} // namespace mdsample
