#include "mdsample/multiindex.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mdsample {

MultiIndex::MultiIndex(std::size_t dimension) : exps_(dimension, 0) {}

MultiIndex::MultiIndex(std::initializer_list<int> exponents) : MultiIndex(std::vector<int>(exponents)) {}

MultiIndex::MultiIndex(std::vector<int> exponents) : exps_(std::move(exponents))
{
    for (int e : exps_)
        if (e < 0)
            throw std::domain_error("MultiIndex: negative exponent");
}

MultiIndex MultiIndex::unit(std::size_t dimension, std::size_t axis)
{
    MultiIndex e(dimension);
    e.exps_.at(axis) = 1;
    return e;
}

int MultiIndex::order() const
{
    return std::accumulate(exps_.begin(), exps_.end(), 0);
}

bool MultiIndex::hasOddComponent() const
{
    return std::any_of(exps_.begin(), exps_.end(), [](int e) { return e % 2 != 0; });
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const
{
    if (other.dimension() != dimension())
        throw std::domain_error("MultiIndex: dimension mismatch");
    MultiIndex sum(*this);
    for (std::size_t i = 0; i < exps_.size(); ++i)
        sum.exps_[i] += other.exps_[i];
    return sum;
}

bool MultiIndex::lexLess(const MultiIndex& a, const MultiIndex& b)
{
    return std::lexicographical_compare(a.exps_.begin(), a.exps_.end(), b.exps_.begin(), b.exps_.end());
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const
{
    if (auto c = dimension() <=> other.dimension(); c != 0)
        return c;
    if (auto c = order() <=> other.order(); c != 0)
        return c;
    return exps_ <=> other.exps_;
}

std::string MultiIndex::str() const
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < exps_.size(); ++i)
        os << (i ? "," : "") << exps_[i];
    os << ')';
    return os.str();
}

namespace {

// Appends every exponent vector of exact order p, lexicographically ascending.
void appendOrder(int p, std::size_t d, std::vector<MultiIndex>& out)
{
    std::vector<int> e(d, 0);
    // First component runs from 0 upward, which yields ascending lex order.
    auto recurse = [&](auto&& self, std::size_t pos, int remaining) -> void {
        if (pos + 1 == d) {
            e[pos] = remaining;
            out.emplace_back(e);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            e[pos] = v;
            self(self, pos + 1, remaining - v);
        }
    };
    recurse(recurse, 0, p);
}

} // namespace

std::vector<MultiIndex> enumerateOrder(int p, std::size_t d)
{
    if (d == 0)
        throw std::domain_error("enumerateOrder: dimension must be positive");
    if (p < 0)
        throw std::domain_error("enumerateOrder: order must be non-negative");
    std::vector<MultiIndex> out;
    appendOrder(p, d, out);
    return out;
}

std::vector<MultiIndex> enumerateDelta(int n, std::size_t d)
{
    if (n < 1 || d == 0)
        throw std::domain_error("enumerateDelta: requires n >= 1 and d >= 1");
    std::vector<MultiIndex> out;
    for (int p = 0; p < n; ++p)
        appendOrder(p, d, out);
    return out;
}

std::uint64_t factorial(const MultiIndex& alpha)
{
    std::uint64_t result = 1;
    for (int e : alpha.exponents())
        for (int k = 2; k <= e; ++k)
            if (__builtin_mul_overflow(result, static_cast<std::uint64_t>(k), &result))
                throw std::overflow_error("factorial: result exceeds 64-bit range for " + alpha.str());
    return result;
}

double monomial(std::span<const double> x, const MultiIndex& alpha)
{
    if (x.size() != alpha.dimension())
        throw std::domain_error("monomial: dimension mismatch");
    double r = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (int k = 0; k < alpha[i]; ++k)
            r *= x[i];
    return r;
}

double binomial(int n, int k)
{
    if (k < 0 || k > n)
        return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

} // namespace mdsample
