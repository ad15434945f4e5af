#include "mdsample/dilation.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mdsample {

namespace {

constexpr double kIsotropyRelTol = 1e-9;
constexpr double kEigenvectorCondLimit = 1e6;

} // namespace

std::int64_t integerDeterminant(const IntMatrix& input)
{
    // Bareiss elimination; every division is exact.
    const Eigen::Index n = input.rows();
    if (n != input.cols())
        throw std::domain_error("integerDeterminant: matrix must be square");
    if (n == 0)
        return 1;
    Eigen::Matrix<__int128, Eigen::Dynamic, Eigen::Dynamic> a = input.cast<__int128>();
    __int128 prev = 1;
    int sign = 1;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            Eigen::Index swap = -1;
            for (Eigen::Index r = k + 1; r < n; ++r)
                if (a(r, k) != 0) {
                    swap = r;
                    break;
                }
            if (swap < 0)
                return 0;
            a.row(k).swap(a.row(swap));
            sign = -sign;
        }
        for (Eigen::Index i = k + 1; i < n; ++i) {
            for (Eigen::Index j = k + 1; j < n; ++j)
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        }
        prev = a(k, k);
    }
    return static_cast<std::int64_t>(sign * a(n - 1, n - 1));
}

DilationMatrix::DilationMatrix(IntMatrix entries) : entries_(std::move(entries))
{
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols())
        throw std::domain_error("dilation matrix must be square and non-empty");
    const std::int64_t det = integerDeterminant(entries_);
    if (det == 0)
        throw std::domain_error("dilation matrix is singular");
    det_abs_ = det < 0 ? -det : det;

    const RealMatrix real = entries_.cast<double>();
    Eigen::EigenSolver<RealMatrix> solver(real, true);
    if (solver.info() != Eigen::Success)
        throw std::domain_error("dilation matrix: eigen decomposition failed");
    const auto values = solver.eigenvalues();
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        const double mod = std::abs(values(i));
        if (!(mod > 1.0 + 1e-12))
            throw std::domain_error("dilation matrix is not expanding: eigenvalue modulus " + std::to_string(mod) +
                                    " <= 1");
        eigen_moduli_.push_back(mod);
    }

    const double lo = *std::min_element(eigen_moduli_.begin(), eigen_moduli_.end());
    const double hi = *std::max_element(eigen_moduli_.begin(), eigen_moduli_.end());
    bool equal_moduli = (hi - lo) <= kIsotropyRelTol * hi;
    bool diagonalizable = false;
    if (equal_moduli) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(solver.eigenvectors());
        const auto sv = svd.singularValues();
        const double cond = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
        diagonalizable = cond < kEigenvectorCondLimit;
    }
    isotropic_ = equal_moduli && diagonalizable;
    lambda_abs_ = isotropic_ ? std::pow(static_cast<double>(det_abs_), 1.0 / static_cast<double>(dimension())) : hi;
}

double DilationMatrix::minEigenModulus() const
{
    return *std::min_element(eigen_moduli_.begin(), eigen_moduli_.end());
}

bool DilationMatrix::isDiagonal() const
{
    for (Eigen::Index i = 0; i < entries_.rows(); ++i)
        for (Eigen::Index j = 0; j < entries_.cols(); ++j)
            if (i != j && entries_(i, j) != 0)
                return false;
    return true;
}

IntMatrix DilationMatrix::integerPower(int j) const
{
    if (j < 0)
        throw std::domain_error("integerPower: negative exponent");
    IntMatrix result = IntMatrix::Identity(entries_.rows(), entries_.cols());
    for (int i = 0; i < j; ++i)
        result = result * entries_;
    return result;
}

RealMatrix DilationMatrix::power(int j) const
{
    if (j >= 0)
        return integerPower(j).cast<double>();
    const RealMatrix real = entries_.cast<double>();
    Eigen::PartialPivLU<RealMatrix> lu(real);
    RealMatrix result = RealMatrix::Identity(real.rows(), real.cols());
    for (int i = 0; i < -j; ++i)
        result = lu.solve(result);
    return result;
}

DilationMatrix newDilation(const std::vector<std::vector<std::int64_t>>& rows)
{
    const std::size_t n = rows.size();
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n)
            throw std::domain_error("dilation matrix must be square");
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = rows[i][j];
    }
    return DilationMatrix(std::move(m));
}

double operatorNorm(const RealMatrix& a)
{
    if (a.size() == 0)
        return 0.0;
    Eigen::JacobiSVD<RealMatrix> svd(a);
    return svd.singularValues()(0);
}

namespace catalog {

DilationMatrix scalar(std::int64_t factor)
{
    return newDilation({{factor}});
}

DilationMatrix twiceIdentity(std::size_t d)
{
    return DilationMatrix(IntMatrix::Identity(d, d) * 2);
}

DilationMatrix quincunx()
{
    return newDilation({{1, 1}, {1, -1}});
}

DilationMatrix anisotropic23()
{
    return newDilation({{2, 0}, {0, 3}});
}

} // namespace catalog

} // namespace mdsample
