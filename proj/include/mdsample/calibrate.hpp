#pragma once

#include "mdsample/diffop.hpp"
#include "mdsample/generators.hpp"

#include <map>
#include <stdexcept>
#include <vector>

namespace mdsample {

inline constexpr double kCalibrationTolerance = 1e-8;

struct CalibrationResult
{
    ParameterMap params;
    /// |D^gamma(1 - phi_hat conj(symbol))(0)| on the calibrated generator.
    std::map<MultiIndex, double> residuals;
    int target_order = 0;
    /// Set when the reduced system was rank deficient.
    bool minimum_norm = false;
    /// Conditions found to hold for every parameter value.
    std::vector<MultiIndex> dropped;
};

class CalibrationError : public std::runtime_error
{
public:
    CalibrationError(const std::string& what, MultiIndex offending)
        : std::runtime_error(what), offending_(std::move(offending))
    {
    }
    const MultiIndex& offending() const { return offending_; }

private:
    MultiIndex offending_;
};

/// |D^gamma(1 - phi_hat conj(symbol(L)))(0)| for gamma in Delta_n, n <= 5.
std::map<MultiIndex, double> flatnessResiduals(const Generator& g, const DiffOperator& op, int n);

/// Largest n <= nMax with every flatness residual of order < n below tol.
int flatnessOrder(const Generator& g, const DiffOperator& op, int nMax, double tol = 1e-6);

/// Solves the flatness conditions of orders 0..n-1 for the affine
/// parameters of `family`. Parameters in `fixed` that are not affine (such as
/// a spline order) are passed through. Throws CalibrationError if a
/// condition cannot be met.
CalibrationResult solveFreeParams(Family family, std::size_t d, const DiffOperator& op, int n,
                                  const ParameterMap& fixed = {});

} // namespace mdsample
