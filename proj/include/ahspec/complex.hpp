#pragma once

#include <cmath>
#include <complex>

namespace ahspec {

/// Complex scalar used for zeta, xi, s and integrand values.
using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace ahspec
