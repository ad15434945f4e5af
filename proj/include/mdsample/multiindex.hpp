#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace mdsample {

/// Exponent vector in Z_+^d. Ordered by total order first, then
/// lexicographically, which is the canonical layout for every table indexed
/// by multi-indices in this library.
class MultiIndex
{
public:
    MultiIndex() = default;
    explicit MultiIndex(std::size_t dimension);
    MultiIndex(std::initializer_list<int> exponents);
    explicit MultiIndex(std::vector<int> exponents);

    static MultiIndex zero(std::size_t dimension) { return MultiIndex(dimension); }
    static MultiIndex unit(std::size_t dimension, std::size_t axis);

    std::size_t dimension() const { return exps_.size(); }
    int order() const;
    int operator[](std::size_t i) const { return exps_[i]; }
    const std::vector<int>& exponents() const { return exps_; }

    bool isZero() const { return order() == 0; }
    bool hasOddComponent() const;

    MultiIndex operator+(const MultiIndex& other) const;

    /// Plain lexicographic comparison, ignoring total order.
    static bool lexLess(const MultiIndex& a, const MultiIndex& b);

    std::strong_ordering operator<=>(const MultiIndex& other) const;
    bool operator==(const MultiIndex& other) const = default;

    std::string str() const;

private:
    std::vector<int> exps_;
};

/// All alpha with [alpha] < n, in canonical order.
std::vector<MultiIndex> enumerateDelta(int n, std::size_t d);

/// All beta with [beta] == p, in lexicographic order.
std::vector<MultiIndex> enumerateOrder(int p, std::size_t d);

/// alpha! as an exact integer; throws std::overflow_error past uint64.
std::uint64_t factorial(const MultiIndex& alpha);

/// x^alpha with 0^0 = 1.
double monomial(std::span<const double> x, const MultiIndex& alpha);

/// Binomial coefficient C(n, k) as a double.
double binomial(int n, int k);

} // namespace mdsample
