#pragma once

#include "mdsample/finite_difference.hpp"
#include "mdsample/multiindex.hpp"
#include "mdsample/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mdsample {

/// Normalized sinc, sin(pi x) / (pi x).
double sinc(double x);

/// Centered cardinal B-spline of order m (support [-m/2, m/2], transform
/// (sin pi xi / (pi xi))^m). Evaluated from the truncated-power form.
double bspline(int m, double x);

struct ShiftTerm
{
    Point shift;
    Complex amplitude;
};

/// Finite combination sum_j a_j prod_i B_m(x_i - h_ji) of shifted tensor
/// B-splines with half-integer shifts.
class ShiftCombination
{
public:
    ShiftCombination(int splineOrder, std::size_t dimension) : order_(splineOrder), dim_(dimension) {}

    int splineOrder() const { return order_; }
    std::size_t dimension() const { return dim_; }
    const std::vector<ShiftTerm>& terms() const { return terms_; }

    /// Adds a term, merging with an existing term at the same shift.
    void addTerm(Point shift, Complex amplitude);
    void addScaled(const ShiftCombination& other, Complex scale);

    Complex operator()(std::span<const double> x) const;
    Complex fourier(std::span<const double> xi) const;
    /// Half-width of the smallest centered cube containing the support.
    double reach() const;

    /// Outer product: dimensions concatenate, shifts concatenate, amplitudes multiply.
    static ShiftCombination tensor(const ShiftCombination& a, const ShiftCombination& b);

private:
    int order_;
    std::size_t dim_;
    std::vector<ShiftTerm> terms_;
};

/// Spatial form of sum_s c_s sin^{m+s}(pi xi) / (pi xi)^m, one variable.
ShiftCombination trigPolyToShifts(int m, const std::vector<std::pair<int, Complex>>& powers);

enum class Family
{
    ExampleI,
    ExampleII,
    ExampleIII,
    ExampleIV,
    ExampleV,
    BSplineTensor
};

Family parseFamily(const std::string& name);
std::string familyName(Family family);
/// Names of the free parameters entering the transform affinely.
std::vector<std::string> affineParameters(Family family);

using ParameterMap = std::map<std::string, Complex>;

/// Sentinel Strang-Fix order for band-limited generators whose transform
/// vanishes near every nonzero lattice point.
inline constexpr int kUnboundedOrder = 1000;

struct Generator
{
    Family family = Family::ExampleIII;
    std::size_t dimension = 1;
    ComplexField fourier;
    ComplexField spatial;
    /// Half-width of the support cube; empty when the generator is not
    /// compactly supported.
    std::optional<double> support_radius;
    /// Per-coordinate algebraic decay |phi| <= decay_constant / |x_i|^decay_exponent
    /// for unbounded generators.
    double decay_exponent = 0.0;
    double decay_constant = 0.0;
    int declared_sf_order = 1;
    ParameterMap free_params;
    /// Transform has kinks on the integer lattice; only values are tested there.
    bool fourier_kinked_on_lattice = false;
    /// Transform equals one on a neighbourhood of the origin.
    bool flat_near_origin = false;
    /// Half-width of the transform support cube, if band-limited.
    std::optional<double> fourier_support;
    std::optional<ShiftCombination> shifts;

    bool compact() const { return support_radius.has_value(); }
};

/// Builds one of the catalog generators. Throws std::domain_error on a
/// dimension mismatch or invalid parameters.
Generator makeExample(Family which, std::size_t d, const ParameterMap& params = {});

/// D^beta of the transform at xi by Richardson-extrapolated central differences.
Complex fourierDerivative(const Generator& g, const MultiIndex& beta, std::span<const double> xi);

struct StrangFixEntry
{
    std::vector<int> lattice_point;
    MultiIndex beta;
    double magnitude;
};

/// |D^beta phi_hat(k)| for all tested k != 0 and beta in Delta_nMax
/// (only beta = 0 for transforms kinked on the lattice).
std::vector<StrangFixEntry> strangFixTable(const Generator& g, int nMax);

/// Largest n <= nMax with all tested |D^beta phi_hat(k)| < tol, beta in Delta_n.
int strangFixOrder(const Generator& g, int nMax, double tol = 1e-7);

/// Radius |k|_inf of the lattice neighbourhood used by strangFixOrder.
int strangFixTestRadius(const Generator& g);

} // namespace mdsample
