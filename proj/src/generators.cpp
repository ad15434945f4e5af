#include "mdsample/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mdsample {

double sinc(double x)
{
    const double y = kPi * x;
    if (std::abs(y) < 1e-5)
        return 1.0 - y * y / 6.0;
    return std::sin(y) / y;
}

double bspline(int m, double x)
{
    if (m < 1)
        throw std::domain_error("bspline: order must be >= 1");
    const double half = 0.5 * m;
    if (m == 1)
        return (x >= -0.5 && x < 0.5) ? 1.0 : 0.0;
    x = -std::abs(x);
    if (x <= -half)
        return 0.0;
    // Only knots left of x contribute once x <= 0.
    double sum = 0.0;
    double binom = 1.0;
    for (int k = 0; k <= m; ++k) {
        const double u = x + half - k;
        if (u <= 0.0)
            break;
        const double term = binom * std::pow(u, m - 1);
        sum += (k % 2 == 0) ? term : -term;
        binom = binom * (m - k) / (k + 1);
    }
    double fact = 1.0;
    for (int k = 2; k < m; ++k)
        fact *= k;
    return sum / fact;
}

void ShiftCombination::addTerm(Point shift, Complex amplitude)
{
    if (shift.size() != dim_)
        throw std::domain_error("ShiftCombination: shift dimension mismatch");
    if (amplitude == Complex(0.0))
        return;
    for (auto it = terms_.begin(); it != terms_.end(); ++it) {
        if (it->shift == shift) {
            it->amplitude += amplitude;
            if (it->amplitude == Complex(0.0))
                terms_.erase(it);
            return;
        }
    }
    terms_.push_back({std::move(shift), amplitude});
}

void ShiftCombination::addScaled(const ShiftCombination& other, Complex scale)
{
    if (other.order_ != order_ || other.dim_ != dim_)
        throw std::domain_error("ShiftCombination: incompatible combination");
    for (const auto& t : other.terms_)
        addTerm(t.shift, t.amplitude * scale);
}

Complex ShiftCombination::operator()(std::span<const double> x) const
{
    Complex sum = 0.0;
    for (const auto& t : terms_) {
        double v = 1.0;
        for (std::size_t i = 0; i < dim_ && v != 0.0; ++i)
            v *= bspline(order_, x[i] - t.shift[i]);
        if (v != 0.0)
            sum += t.amplitude * v;
    }
    return sum;
}

Complex ShiftCombination::fourier(std::span<const double> xi) const
{
    double base = 1.0;
    for (std::size_t i = 0; i < dim_; ++i)
        base *= std::pow(sinc(xi[i]), order_);
    Complex sum = 0.0;
    for (const auto& t : terms_) {
        double phase = 0.0;
        for (std::size_t i = 0; i < dim_; ++i)
            phase += t.shift[i] * xi[i];
        sum += t.amplitude * std::polar(1.0, -2.0 * kPi * phase);
    }
    return sum * base;
}

double ShiftCombination::reach() const
{
    double r = 0.0;
    for (const auto& t : terms_)
        for (double h : t.shift)
            r = std::max(r, std::abs(h));
    return 0.5 * order_ + r;
}

ShiftCombination ShiftCombination::tensor(const ShiftCombination& a, const ShiftCombination& b)
{
    if (a.order_ != b.order_)
        throw std::domain_error("ShiftCombination::tensor: spline orders differ");
    ShiftCombination out(a.order_, a.dim_ + b.dim_);
    for (const auto& ta : a.terms_)
        for (const auto& tb : b.terms_) {
            Point shift(ta.shift);
            shift.insert(shift.end(), tb.shift.begin(), tb.shift.end());
            out.addTerm(std::move(shift), ta.amplitude * tb.amplitude);
        }
    return out;
}

ShiftCombination trigPolyToShifts(int m, const std::vector<std::pair<int, Complex>>& powers)
{
    // sin(pi xi) = (e^{i pi xi} - e^{-i pi xi}) / (2i); multiplying the
    // transform by e^{-2 pi i h xi} shifts the function by h, so e^{i pi xi}
    // is a shift by -1/2.
    if (m < 1)
        throw std::domain_error("trigPolyToShifts: spline order must be >= 1");
    ShiftCombination out(m, 1);
    const Complex inv2i = 1.0 / Complex(0.0, 2.0);
    for (const auto& [s, coeff] : powers) {
        if (s < 0)
            throw std::domain_error("trigPolyToShifts: sine power must be non-negative");
        // (e^{ia} - e^{-ia})^s = sum_r C(s,r) (-1)^{s-r} e^{i(2r - s)a}
        Complex scale = coeff;
        for (int i = 0; i < s; ++i)
            scale *= inv2i;
        for (int r = 0; r <= s; ++r) {
            const double sign = ((s - r) % 2 == 0) ? 1.0 : -1.0;
            const double shift = -0.5 * (2 * r - s);
            out.addTerm({shift}, scale * (binomial(s, r) * sign));
        }
    }
    return out;
}

Family parseFamily(const std::string& name)
{
    if (name == "exampleI")
        return Family::ExampleI;
    if (name == "exampleII")
        return Family::ExampleII;
    if (name == "exampleIII")
        return Family::ExampleIII;
    if (name == "exampleIV")
        return Family::ExampleIV;
    if (name == "exampleV")
        return Family::ExampleV;
    if (name == "bsplineTensor")
        return Family::BSplineTensor;
    throw std::domain_error("unknown generator family '" + name + "'");
}

std::string familyName(Family family)
{
    switch (family) {
    case Family::ExampleI: return "exampleI";
    case Family::ExampleII: return "exampleII";
    case Family::ExampleIII: return "exampleIII";
    case Family::ExampleIV: return "exampleIV";
    case Family::ExampleV: return "exampleV";
    case Family::BSplineTensor: return "bsplineTensor";
    }
    return "unknown";
}

std::vector<std::string> affineParameters(Family family)
{
    switch (family) {
    case Family::ExampleIV: return {"b1", "b2"};
    case Family::ExampleV: return {"b1", "b2", "b3"};
    default: return {};
    }
}

namespace {

double triangle(double x)
{
    return std::max(0.0, 1.0 - std::abs(x));
}

Complex param(const ParameterMap& params, const std::string& key, Complex fallback)
{
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

void rejectUnknown(const ParameterMap& params, const std::vector<std::string>& allowed, Family family)
{
    for (const auto& [key, value] : params)
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw std::domain_error("generator " + familyName(family) + " has no parameter '" + key + "'");
}

ComplexField fromShifts(const ShiftCombination& s)
{
    return [s](std::span<const double> x) { return s(x); };
}

ShiftCombination tensorPower(const ShiftCombination& one, std::size_t d)
{
    ShiftCombination out = one;
    for (std::size_t i = 1; i < d; ++i)
        out = ShiftCombination::tensor(out, one);
    return out;
}

} // namespace

Generator makeExample(Family which, std::size_t d, const ParameterMap& params)
{
    if (d == 0)
        throw std::domain_error("makeExample: dimension must be positive");
    Generator g;
    g.family = which;
    g.dimension = d;

    switch (which) {
    case Family::ExampleI: {
        rejectUnknown(params, {}, which);
        g.fourier = [d](std::span<const double> xi) {
            double v = 1.0;
            for (std::size_t i = 0; i < d; ++i)
                v *= triangle(xi[i]);
            return Complex(v);
        };
        g.spatial = [d](std::span<const double> x) {
            double v = 1.0;
            for (std::size_t i = 0; i < d; ++i) {
                const double s = sinc(x[i]);
                v *= s * s;
            }
            return Complex(v);
        };
        g.decay_exponent = 2.0;
        g.decay_constant = 1.0 / (kPi * kPi);
        g.declared_sf_order = 1;
        g.fourier_kinked_on_lattice = true;
        g.fourier_support = 1.0;
        break;
    }
    case Family::ExampleII: {
        rejectUnknown(params, {}, which);
        g.fourier = [d](std::span<const double> xi) {
            double a = 1.0, b = 1.0;
            for (std::size_t i = 0; i < d; ++i) {
                a *= triangle(2.0 * xi[i]);
                b *= triangle(4.0 * xi[i]);
            }
            return Complex(2.0 * a - b);
        };
        const double ca = std::pow(2.0, 1.0 - static_cast<double>(d));
        const double cb = std::pow(4.0, -static_cast<double>(d));
        g.spatial = [d, ca, cb](std::span<const double> x) {
            double a = 1.0, b = 1.0;
            for (std::size_t i = 0; i < d; ++i) {
                const double sa = sinc(x[i] / 2.0), sb = sinc(x[i] / 4.0);
                a *= sa * sa;
                b *= sb * sb;
            }
            return Complex(ca * a - cb * b);
        };
        g.decay_exponent = 2.0;
        g.decay_constant = (ca * 4.0 + cb * 16.0) / (kPi * kPi);
        g.declared_sf_order = kUnboundedOrder;
        g.flat_near_origin = true;
        g.fourier_support = 0.5;
        break;
    }
    case Family::ExampleIII: {
        rejectUnknown(params, {}, which);
        ShiftCombination hat(2, 1);
        hat.addTerm({0.0}, 1.0);
        g.shifts = tensorPower(hat, d);
        g.fourier = [d](std::span<const double> xi) {
            double v = 1.0;
            for (std::size_t i = 0; i < d; ++i) {
                const double s = sinc(xi[i]);
                v *= s * s;
            }
            return Complex(v);
        };
        g.declared_sf_order = 2;
        break;
    }
    case Family::ExampleIV: {
        if (d != 2)
            throw std::domain_error("exampleIV requires dimension 2");
        rejectUnknown(params, {"b1", "b2"}, which);
        const Complex b1 = param(params, "b1", 0.0), b2 = param(params, "b2", 0.0);
        g.free_params = {{"b1", b1}, {"b2", b2}};
        // Correction terms carry sin^5 in one variable and sin^3 in the other.
        const ShiftCombination plain = trigPolyToShifts(3, {{0, 1.0}});
        const ShiftCombination squared = trigPolyToShifts(3, {{2, 1.0}});
        ShiftCombination s = ShiftCombination::tensor(plain, plain);
        s.addScaled(ShiftCombination::tensor(squared, plain), b1);
        s.addScaled(ShiftCombination::tensor(plain, squared), b2);
        g.shifts = s;
        g.fourier = [b1, b2](std::span<const double> xi) {
            const double s1 = sinc(xi[0]), s2 = sinc(xi[1]);
            const double t1 = std::sin(kPi * xi[0]), t2 = std::sin(kPi * xi[1]);
            return s1 * s1 * s1 * s2 * s2 * s2 * (1.0 + b1 * (t1 * t1) + b2 * (t2 * t2));
        };
        g.declared_sf_order = 3;
        break;
    }
    case Family::ExampleV: {
        if (d != 1)
            throw std::domain_error("exampleV requires dimension 1");
        rejectUnknown(params, {"b1", "b2", "b3"}, which);
        const Complex b1 = param(params, "b1", 0.0), b2 = param(params, "b2", 0.0), b3 = param(params, "b3", 0.0);
        g.free_params = {{"b1", b1}, {"b2", b2}, {"b3", b3}};
        g.shifts = trigPolyToShifts(4, {{0, 1.0}, {1, b1}, {2, b2}, {3, b3}});
        g.fourier = [b1, b2, b3](std::span<const double> xi) {
            const double s = sinc(xi[0]);
            const double t = std::sin(kPi * xi[0]);
            return s * s * s * s * (1.0 + b1 * t + b2 * (t * t) + b3 * (t * t * t));
        };
        g.declared_sf_order = 4;
        break;
    }
    case Family::BSplineTensor: {
        rejectUnknown(params, {"m"}, which);
        const Complex mc = param(params, "m", 2.0);
        const int m = static_cast<int>(std::lround(mc.real()));
        if (m < 1 || mc.imag() != 0.0 || std::abs(mc.real() - m) > 1e-12)
            throw std::domain_error("bsplineTensor: m must be a positive integer");
        g.free_params = {{"m", static_cast<double>(m)}};
        ShiftCombination one(m, 1);
        one.addTerm({0.0}, 1.0);
        g.shifts = tensorPower(one, d);
        g.fourier = [d, m](std::span<const double> xi) {
            double v = 1.0;
            for (std::size_t i = 0; i < d; ++i)
                v *= std::pow(sinc(xi[i]), m);
            return Complex(v);
        };
        g.declared_sf_order = m;
        break;
    }
    }

    if (g.shifts) {
        g.spatial = fromShifts(*g.shifts);
        g.support_radius = g.shifts->reach();
    }
    return g;
}

Complex fourierDerivative(const Generator& g, const MultiIndex& beta, std::span<const double> xi)
{
    if (xi.size() != g.dimension || beta.dimension() != g.dimension)
        throw std::domain_error("fourierDerivative: dimension mismatch");
    return fd::derivative(g.fourier, xi, beta);
}

int strangFixTestRadius(const Generator& g)
{
    return g.compact() ? 3 : 8;
}

std::vector<StrangFixEntry> strangFixTable(const Generator& g, int nMax)
{
    if (nMax < 1 || nMax > 5)
        throw std::domain_error("strangFixTable: nMax must be in [1, 5]");
    const std::size_t d = g.dimension;
    const int radius = strangFixTestRadius(g);
    const int orders = g.fourier_kinked_on_lattice ? 1 : nMax;
    const auto betas = enumerateDelta(orders, d);

    std::vector<StrangFixEntry> table;
    std::vector<int> k(d, -radius);
    Point xi(d);
    while (true) {
        const bool zero = std::all_of(k.begin(), k.end(), [](int v) { return v == 0; });
        if (!zero) {
            for (std::size_t i = 0; i < d; ++i)
                xi[i] = k[i];
            for (const MultiIndex& beta : betas)
                table.push_back({k, beta, std::abs(fourierDerivative(g, beta, xi))});
        }
        std::size_t i = 0;
        while (i < d && ++k[i] > radius)
            k[i++] = -radius;
        if (i == d)
            break;
    }
    return table;
}

int strangFixOrder(const Generator& g, int nMax, double tol)
{
    const auto table = strangFixTable(g, nMax);
    int limit = g.fourier_kinked_on_lattice ? std::min(nMax, 1) : nMax;
    for (const auto& e : table)
        if (e.magnitude >= tol)
            limit = std::min(limit, e.beta.order());
    return limit;
}

} // namespace mdsample
