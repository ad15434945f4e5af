#pragma once

#include "mdsample/diffop.hpp"
#include "mdsample/dilation.hpp"
#include "mdsample/generators.hpp"
#include "mdsample/quadrature.hpp"
#include "mdsample/signals.hpp"

#include <optional>
#include <span>
#include <vector>

namespace mdsample {

using LatticePoint = std::vector<int>;

/// Axis-aligned box [lo, hi].
struct Box
{
    Point lo;
    Point hi;

    static Box cube(std::size_t d, double halfwidth);
    std::size_t dimension() const { return lo.size(); }
};

enum class RuleKind
{
    Exact,
    Differential,
    Falsified
};

struct CoefficientRule
{
    RuleKind kind = RuleKind::Exact;
    std::optional<DiffOperator> op;
    double h = 0.0;
    QuadratureSpec quad;

    static CoefficientRule exact();
    static CoefficientRule differential(DiffOperator op);
    static CoefficientRule falsified(double h, QuadratureSpec quad = {});
};

/// Coefficients on a finite lattice set, stored densely over its bounding box.
class CoefficientField
{
public:
    CoefficientField() = default;
    explicit CoefficientField(const std::vector<LatticePoint>& lattice);

    std::size_t dimension() const { return lo_.size(); }
    std::size_t size() const { return count_; }
    bool contains(std::span<const int> k) const;
    /// Throws std::domain_error when k is not in the set.
    Complex at(std::span<const int> k) const;
    void set(std::span<const int> k, Complex value);

private:
    std::optional<std::size_t> offset(std::span<const int> k) const;

    std::vector<int> lo_, extent_;
    std::vector<Complex> values_;
    std::vector<char> present_;
    std::size_t count_ = 0;
};

/// Lattice points whose term can be nonzero on M^{-j}-scaled copies of the
/// domain. Compact generators: support cube (k - r, k + r] against the image
/// M^j(domain), exact for diagonal M and d = 1, polygon test for d = 2,
/// bounding box otherwise. Unbounded generators: per-coordinate tail radius
/// (C / tol)^{1/decay_exponent}.
std::vector<LatticePoint> latticeSupport(const Generator& g, const DilationMatrix& m, int j, const Box& domain,
                                         double truncationTol = 1e-10);

/// (1/V_r) int_{B_r} f(center + u) du.
AverageEstimate ballAverage(const Signal& f, std::span<const double> center, double radius,
                            const QuadratureSpec& quad = {});

CoefficientField coefficients(const CoefficientRule& rule, const Signal& f, const DilationMatrix& m, int j,
                              const std::vector<LatticePoint>& lattice);

/// Evaluates sum_k c_k phi(M^j x - k) at one point.
class Evaluator
{
public:
    Evaluator(const Generator& g, const DilationMatrix& m, int j, const CoefficientField& coeffs,
              double truncationTol = 1e-10);

    Complex operator()(std::span<const double> x) const;

private:
    const Generator& g_;
    const CoefficientField& coeffs_;
    RealMatrix mj_;
    double reach_;
};

std::vector<Complex> evaluate(const Generator& g, const DilationMatrix& m, int j, const CoefficientField& coeffs,
                              const std::vector<Point>& points, double truncationTol = 1e-10);

/// Ball average over M^{-j}(k + B_h) minus L[f(M^{-j}.)](k).
Complex deviation(const Signal& f, const DiffOperator& op, const DilationMatrix& m, int j, std::span<const int> k,
                  double h, const QuadratureSpec& quad = {});

struct ExpansionResult
{
    int level = 0;
    std::vector<LatticePoint> lattice;
    CoefficientField coefficients;
    std::vector<Complex> values;
};

ExpansionResult expand(const Generator& g, const CoefficientRule& rule, const Signal& f, const DilationMatrix& m,
                       int j, const Box& domain, const std::vector<Point>& points, double truncationTol = 1e-10);

} // namespace mdsample
