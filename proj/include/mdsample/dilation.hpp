#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace mdsample {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Integer expanding matrix M (all eigenvalues strictly outside the unit
/// circle). Immutable once built.
class DilationMatrix
{
public:
    /// Validates and computes spectral data. Throws std::domain_error for
    /// non-square, singular or non-expanding input.
    explicit DilationMatrix(IntMatrix entries);

    std::size_t dimension() const { return static_cast<std::size_t>(entries_.rows()); }
    const IntMatrix& entries() const { return entries_; }
    std::int64_t detAbs() const { return det_abs_; }
    const std::vector<double>& eigenModuli() const { return eigen_moduli_; }
    bool isIsotropic() const { return isotropic_; }
    /// Common eigenvalue modulus; only meaningful when isotropic.
    double lambdaAbs() const { return lambda_abs_; }
    double minEigenModulus() const;
    bool isDiagonal() const;

    /// M^j; exact integer product for j >= 0, repeated solves for j < 0.
    RealMatrix power(int j) const;
    /// M^j for j >= 0 without leaving integer arithmetic.
    IntMatrix integerPower(int j) const;
    /// M* (the transpose, entries are real).
    IntMatrix adjoint() const { return entries_.transpose(); }

private:
    IntMatrix entries_;
    std::int64_t det_abs_ = 0;
    std::vector<double> eigen_moduli_;
    bool isotropic_ = false;
    double lambda_abs_ = 0.0;
};

DilationMatrix newDilation(const std::vector<std::vector<std::int64_t>>& rows);

/// Spectral (2->2) norm.
double operatorNorm(const RealMatrix& a);

/// Exact determinant of an integer matrix (fraction-free elimination).
std::int64_t integerDeterminant(const IntMatrix& a);

namespace catalog {
DilationMatrix scalar(std::int64_t factor);
DilationMatrix twiceIdentity(std::size_t d);
DilationMatrix quincunx();
DilationMatrix anisotropic23();
} // namespace catalog

} // namespace mdsample
