#include "mdsample/expansion.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mdsample {

Box Box::cube(std::size_t d, double halfwidth)
{
    return Box{Point(d, -halfwidth), Point(d, halfwidth)};
}

CoefficientRule CoefficientRule::exact()
{
    return CoefficientRule{};
}

CoefficientRule CoefficientRule::differential(DiffOperator op)
{
    CoefficientRule rule;
    rule.kind = RuleKind::Differential;
    rule.op = std::move(op);
    return rule;
}

CoefficientRule CoefficientRule::falsified(double h, QuadratureSpec quad)
{
    if (!(h > 0.0))
        throw std::domain_error("falsified rule: radius must be positive");
    CoefficientRule rule;
    rule.kind = RuleKind::Falsified;
    rule.h = h;
    rule.quad = quad;
    return rule;
}

CoefficientField::CoefficientField(const std::vector<LatticePoint>& lattice)
{
    if (lattice.empty())
        return;
    const std::size_t d = lattice.front().size();
    lo_.assign(d, std::numeric_limits<int>::max());
    std::vector<int> hi(d, std::numeric_limits<int>::min());
    for (const auto& k : lattice) {
        if (k.size() != d)
            throw std::domain_error("CoefficientField: mixed dimensions");
        for (std::size_t i = 0; i < d; ++i) {
            lo_[i] = std::min(lo_[i], k[i]);
            hi[i] = std::max(hi[i], k[i]);
        }
    }
    std::size_t total = 1;
    extent_.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        extent_[i] = hi[i] - lo_[i] + 1;
        total *= static_cast<std::size_t>(extent_[i]);
    }
    values_.assign(total, Complex(0.0));
    present_.assign(total, 0);
    for (const auto& k : lattice) {
        char& flag = present_[*offset(k)];
        if (!flag) {
            flag = 1;
            ++count_;
        }
    }
}

std::optional<std::size_t> CoefficientField::offset(std::span<const int> k) const
{
    if (k.size() != lo_.size() || lo_.empty())
        return std::nullopt;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        const int rel = k[i] - lo_[i];
        if (rel < 0 || rel >= extent_[i])
            return std::nullopt;
        idx = idx * static_cast<std::size_t>(extent_[i]) + static_cast<std::size_t>(rel);
    }
    return idx;
}

bool CoefficientField::contains(std::span<const int> k) const
{
    const auto idx = offset(k);
    return idx && present_[*idx];
}

Complex CoefficientField::at(std::span<const int> k) const
{
    const auto idx = offset(k);
    if (!idx || !present_[*idx]) {
        std::string s = "(";
        for (std::size_t i = 0; i < k.size(); ++i)
            s += (i ? "," : "") + std::to_string(k[i]);
        throw std::domain_error("missing coefficient for lattice point " + s + ")");
    }
    return values_[*idx];
}

void CoefficientField::set(std::span<const int> k, Complex value)
{
    const auto idx = offset(k);
    if (!idx || !present_[*idx])
        throw std::domain_error("CoefficientField::set: lattice point outside the set");
    values_[*idx] = value;
}

using detail::parallelFor;

namespace {

// Per-coordinate half-width of the region where a generator term can matter.
double generatorReach(const Generator& g, double truncationTol)
{
    if (g.compact())
        return *g.support_radius;
    if (!(truncationTol > 0.0) || g.decay_exponent <= 0.0)
        throw std::domain_error("latticeSupport: unbounded generator needs decay data and a positive tolerance");
    return std::pow(g.decay_constant / truncationTol, 1.0 / g.decay_exponent);
}

// Calls visit(k) for every k in the integer box [lo, hi].
template <class Visit>
void forEachInBox(const std::vector<int>& lo, const std::vector<int>& hi, Visit visit)
{
    const std::size_t d = lo.size();
    for (std::size_t i = 0; i < d; ++i)
        if (lo[i] > hi[i])
            return;
    LatticePoint k = lo;
    while (true) {
        visit(k);
        std::size_t i = d;
        while (i > 0) {
            --i;
            if (k[i] < hi[i]) {
                ++k[i];
                break;
            }
            k[i] = lo[i];
            if (i == 0)
                return;
        }
    }
}

std::vector<RealVector> boxCorners(const Box& domain)
{
    const std::size_t d = domain.dimension();
    std::vector<RealVector> corners;
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        RealVector c(static_cast<Eigen::Index>(d));
        for (std::size_t i = 0; i < d; ++i)
            c(static_cast<Eigen::Index>(i)) = (mask >> i) & 1 ? domain.hi[i] : domain.lo[i];
        corners.push_back(c);
    }
    return corners;
}

// Separating-axis test between the convex polygon `poly` and the square
// centred at k with half-width r, along the polygon edge normals.
bool polygonMeetsSquare(const std::vector<RealVector>& poly, const LatticePoint& k, double r)
{
    const double slack = 1e-9;
    for (std::size_t e = 0; e < poly.size(); ++e) {
        const RealVector edge = poly[(e + 1) % poly.size()] - poly[e];
        const double nx = -edge(1), ny = edge(0);
        double pmin = std::numeric_limits<double>::infinity(), pmax = -pmin;
        for (const auto& v : poly) {
            const double p = nx * v(0) + ny * v(1);
            pmin = std::min(pmin, p);
            pmax = std::max(pmax, p);
        }
        const double centre = nx * k[0] + ny * k[1];
        const double spread = r * (std::abs(nx) + std::abs(ny));
        const double tol = slack * (1.0 + std::abs(nx) + std::abs(ny));
        if (centre + spread < pmin - tol || centre - spread > pmax + tol)
            return false;
    }
    return true;
}

} // namespace

std::vector<LatticePoint> latticeSupport(const Generator& g, const DilationMatrix& m, int j, const Box& domain,
                                         double truncationTol)
{
    const std::size_t d = m.dimension();
    if (j < 0)
        throw std::domain_error("latticeSupport: level must be non-negative");
    if (g.dimension != d || domain.dimension() != d)
        throw std::domain_error("latticeSupport: dimension mismatch");
    const double r = generatorReach(g, truncationTol);
    const RealMatrix mj = m.power(j);

    std::vector<RealVector> image;
    for (const auto& c : boxCorners(domain))
        image.push_back(mj * c);
    std::vector<int> lo(d), hi(d);
    for (std::size_t i = 0; i < d; ++i) {
        double a = std::numeric_limits<double>::infinity(), b = -a;
        for (const auto& v : image) {
            a = std::min(a, v(static_cast<Eigen::Index>(i)));
            b = std::max(b, v(static_cast<Eigen::Index>(i)));
        }
        // Term k is supported on (k - r, k + r]: it meets [a, b] iff a - r <= k < b + r.
        lo[i] = static_cast<int>(std::ceil(a - r));
        hi[i] = static_cast<int>(std::ceil(b + r)) - 1;
    }

    std::vector<LatticePoint> lattice;
    const bool exact = d == 1 || m.isDiagonal() || !g.compact();
    if (exact || d != 2) {
        forEachInBox(lo, hi, [&](const LatticePoint& k) { lattice.push_back(k); });
        return lattice;
    }
    // Corners of the parallelogram image in cyclic order.
    const std::vector<RealVector> poly{image[0], image[1], image[3], image[2]};
    forEachInBox(lo, hi, [&](const LatticePoint& k) {
        if (polygonMeetsSquare(poly, k, r))
            lattice.push_back(k);
    });
    return lattice;
}

AverageEstimate ballAverage(const Signal& f, std::span<const double> center, double radius,
                            const QuadratureSpec& quad)
{
    const std::size_t d = f.dimension();
    const BallRule rule(d, radius, quad);
    return rule.pullbackAverage(f, center, RealMatrix::Identity(static_cast<Eigen::Index>(d),
                                                                static_cast<Eigen::Index>(d)));
}

CoefficientField coefficients(const CoefficientRule& rule, const Signal& f, const DilationMatrix& m, int j,
                              const std::vector<LatticePoint>& lattice)
{
    const std::size_t d = m.dimension();
    if (f.dimension() != d)
        throw std::domain_error("coefficients: signal dimension mismatch");
    CoefficientField field(lattice);
    const RealMatrix a = m.power(-j);
    const auto dI = static_cast<Eigen::Index>(d);

    auto imageOf = [&](const LatticePoint& k) {
        RealVector kv(dI);
        for (std::size_t i = 0; i < d; ++i)
            kv(static_cast<Eigen::Index>(i)) = k[i];
        const RealVector x = a * kv;
        return Point(x.data(), x.data() + d);
    };

    switch (rule.kind) {
    case RuleKind::Exact:
        parallelFor(lattice.size(), [&](std::size_t i) { field.set(lattice[i], f(imageOf(lattice[i]))); });
        break;
    case RuleKind::Differential: {
        if (!rule.op || rule.op->dimension() != d)
            throw std::domain_error("coefficients: differential rule needs an operator of matching dimension");
        const ScaledOperator scaled(*rule.op, a);
        parallelFor(lattice.size(), [&](std::size_t i) { field.set(lattice[i], scaled.apply(f, lattice[i])); });
        break;
    }
    case RuleKind::Falsified: {
        const BallRule ball(d, rule.h, rule.quad);
        parallelFor(lattice.size(), [&](std::size_t i) {
            const Point x = imageOf(lattice[i]);
            field.set(lattice[i], ball.pullbackAverage(f, x, a, i).value);
        });
        break;
    }
    }
    return field;
}

Evaluator::Evaluator(const Generator& g, const DilationMatrix& m, int j, const CoefficientField& coeffs,
                     double truncationTol)
    : g_(g), coeffs_(coeffs), mj_(m.power(j)), reach_(generatorReach(g, truncationTol))
{
    if (g.dimension != m.dimension())
        throw std::domain_error("Evaluator: dimension mismatch");
}

Complex Evaluator::operator()(std::span<const double> x) const
{
    const std::size_t d = g_.dimension;
    if (x.size() != d)
        throw std::domain_error("Evaluator: point dimension mismatch");
    Point y(d);
    for (std::size_t r = 0; r < d; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < d; ++c)
            s += mj_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * x[c];
        y[r] = s;
    }
    std::vector<int> lo(d), hi(d);
    for (std::size_t i = 0; i < d; ++i) {
        // y - k in (-r, r]
        lo[i] = static_cast<int>(std::ceil(y[i] - reach_));
        hi[i] = static_cast<int>(std::ceil(y[i] + reach_)) - 1;
    }
    Complex total = 0.0;
    Point arg(d);
    forEachInBox(lo, hi, [&](const LatticePoint& k) {
        for (std::size_t i = 0; i < d; ++i)
            arg[i] = y[i] - k[i];
        const Complex phi = g_.spatial(arg);
        if (phi != Complex(0.0))
            total += coeffs_.at(k) * phi;
    });
    return total;
}

std::vector<Complex> evaluate(const Generator& g, const DilationMatrix& m, int j, const CoefficientField& coeffs,
                              const std::vector<Point>& points, double truncationTol)
{
    const Evaluator eval(g, m, j, coeffs, truncationTol);
    std::vector<Complex> values(points.size());
    parallelFor(points.size(), [&](std::size_t i) { values[i] = eval(points[i]); });
    return values;
}

Complex deviation(const Signal& f, const DiffOperator& op, const DilationMatrix& m, int j, std::span<const int> k,
                  double h, const QuadratureSpec& quad)
{
    const std::size_t d = m.dimension();
    if (k.size() != d || op.dimension() != d)
        throw std::domain_error("deviation: dimension mismatch");
    const RealMatrix a = m.power(-j);
    RealVector kv(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i)
        kv(static_cast<Eigen::Index>(i)) = k[i];
    const RealVector x = a * kv;
    const BallRule ball(d, h, quad);
    const double average = ball.pullbackAverage(f, std::span<const double>(x.data(), d), a).value;
    return average - applyToSignal(op, f, m, j, k);
}

ExpansionResult expand(const Generator& g, const CoefficientRule& rule, const Signal& f, const DilationMatrix& m,
                       int j, const Box& domain, const std::vector<Point>& points, double truncationTol)
{
    ExpansionResult result;
    result.level = j;
    result.lattice = latticeSupport(g, m, j, domain, truncationTol);
    result.coefficients = coefficients(rule, f, m, j, result.lattice);
    result.values = evaluate(g, m, j, result.coefficients, points, truncationTol);
    return result;
}

} // namespace mdsample
