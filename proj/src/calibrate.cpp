#include "mdsample/calibrate.hpp"

#include "mdsample/finite_difference.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace mdsample {

namespace {

// 1 - phi_hat(xi) conj(symbol(xi)).
ComplexField defect(const Generator& g, const DiffOperator& op)
{
    return [&g, &op](std::span<const double> xi) { return 1.0 - g.fourier(xi) * std::conj(symbol(op, xi)); };
}

// Contribution of one unit parameter to phi_hat conj(symbol).
ComplexField parameterColumn(const Generator& unit, const Generator& base, const DiffOperator& op)
{
    return [&unit, &base, &op](std::span<const double> xi) {
        return (unit.fourier(xi) - base.fourier(xi)) * std::conj(symbol(op, xi));
    };
}

void checkOrder(int n)
{
    if (n < 1 || n > 5)
        throw std::domain_error("flatness order must lie in [1, 5]");
}

} // namespace

std::map<MultiIndex, double> flatnessResiduals(const Generator& g, const DiffOperator& op, int n)
{
    checkOrder(n);
    if (g.dimension != op.dimension())
        throw std::domain_error("flatnessResiduals: dimension mismatch");
    const ComplexField r = defect(g, op);
    const Point origin(g.dimension, 0.0);
    std::map<MultiIndex, double> out;
    for (const auto& gamma : enumerateDelta(n, g.dimension))
        out[gamma] = std::abs(fd::derivative(r, origin, gamma));
    return out;
}

int flatnessOrder(const Generator& g, const DiffOperator& op, int nMax, double tol)
{
    checkOrder(nMax);
    const auto residuals = flatnessResiduals(g, op, nMax);
    int order = 0;
    for (int n = 1; n <= nMax; ++n) {
        bool ok = true;
        for (const auto& [gamma, value] : residuals)
            if (gamma.order() == n - 1 && value >= tol)
                ok = false;
        if (!ok)
            break;
        order = n;
    }
    return order;
}

CalibrationResult solveFreeParams(Family family, std::size_t d, const DiffOperator& op, int n,
                                  const ParameterMap& fixed)
{
    checkOrder(n);
    if (op.dimension() != d)
        throw std::domain_error("solveFreeParams: operator dimension mismatch");
    const std::vector<std::string> names = affineParameters(family);
    for (const auto& name : names)
        if (fixed.count(name))
            throw std::domain_error("solveFreeParams: parameter '" + name + "' is solved for, not fixed");

    ParameterMap baseParams = fixed;
    for (const auto& name : names)
        baseParams[name] = 0.0;
    const Generator base = makeExample(family, d, baseParams);
    std::vector<Generator> units;
    for (const auto& name : names) {
        ParameterMap p = baseParams;
        p[name] = 1.0;
        units.push_back(makeExample(family, d, p));
    }

    const Point origin(d, 0.0);
    const ComplexField r0 = defect(base, op);
    const double zeroTol = 1e-9;

    CalibrationResult result;
    result.target_order = n;
    std::vector<MultiIndex> rows;
    std::vector<std::vector<Complex>> lhs;
    std::vector<Complex> rhs;
    for (const auto& gamma : enumerateDelta(n, d)) {
        std::vector<Complex> row;
        double rowMax = 0.0;
        for (const auto& unit : units) {
            row.push_back(fd::derivative(parameterColumn(unit, base, op), origin, gamma));
            rowMax = std::max(rowMax, std::abs(row.back()));
        }
        const Complex target = fd::derivative(r0, origin, gamma);
        if (rowMax < zeroTol) {
            if (std::abs(target) >= kCalibrationTolerance)
                throw CalibrationError("condition " + gamma.str() + " does not depend on the free parameters "
                                       "and fails with residual " + std::to_string(std::abs(target)),
                                       gamma);
            result.dropped.push_back(gamma);
            continue;
        }
        rows.push_back(gamma);
        lhs.push_back(row);
        rhs.push_back(target);
    }

    ParameterMap params = fixed;
    for (const auto& name : names)
        params[name] = 0.0;
    if (!rows.empty()) {
        const auto nr = static_cast<Eigen::Index>(rows.size());
        const auto nc = static_cast<Eigen::Index>(names.size());
        Eigen::MatrixXcd a(nr, nc);
        Eigen::VectorXcd b(nr);
        for (Eigen::Index i = 0; i < nr; ++i) {
            for (Eigen::Index c = 0; c < nc; ++c)
                a(i, c) = lhs[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
            b(i) = rhs[static_cast<std::size_t>(i)];
        }
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(a);
        cod.setThreshold(1e-10);
        const Eigen::VectorXcd x = cod.solve(b);
        result.minimum_norm = cod.rank() < nc;
        for (Eigen::Index c = 0; c < nc; ++c) {
            Complex v = x(c);
            // Drop round-off noise so real solutions print as real.
            if (std::abs(v.imag()) < 1e-12)
                v.imag(0.0);
            if (std::abs(v.real()) < 1e-12)
                v.real(0.0);
            params[names[static_cast<std::size_t>(c)]] = v;
        }
    }
    result.params = params;

    const Generator calibrated = makeExample(family, d, params);
    result.residuals = flatnessResiduals(calibrated, op, n);
    for (const auto& [gamma, value] : result.residuals)
        if (!(value < kCalibrationTolerance))
            throw CalibrationError("calibration leaves residual " + std::to_string(value) + " at condition " +
                                       gamma.str(),
                                   gamma);
    return result;
}

} // namespace mdsample
