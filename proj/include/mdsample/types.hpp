#pragma once

#include <complex>
#include <vector>

namespace mdsample {

using Complex = std::complex<double>;
using Point = std::vector<double>;

inline constexpr double kPi = 3.14159265358979323846;

} // namespace mdsample
