#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

namespace testing {

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline double rel_diff(std::complex<double> a, std::complex<double> b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline constexpr double kE = 2.718281828459045;
inline constexpr double kPi = 3.141592653589793;

}  // namespace testing
