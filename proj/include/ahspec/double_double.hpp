#pragma once

// Double-double arithmetic (~106-bit significand) for the shooting integrator.
// Error-free transformations follow Dekker/Knuth; the translation unit must
// not contract a*b+c into fused operations (see -ffp-contract=off).

#include <cmath>
#include <complex>

namespace ahspec {

struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DoubleDouble() = default;
    constexpr DoubleDouble(double h) : hi(h), lo(0.0) {}  // NOLINT: implicit widening
    constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

    constexpr double to_double() const { return hi + lo; }
};

namespace dd_detail {

inline DoubleDouble quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

inline DoubleDouble two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline DoubleDouble two_prod(double a, double b) {
    const double p = a * b;
#ifdef FP_FAST_FMA
    return {p, std::fma(a, b, -p)};
#else
    constexpr double kSplit = 134217729.0;  // 2^27 + 1
    const double ta = kSplit * a;
    const double ah = ta - (ta - a);
    const double al = a - ah;
    const double tb = kSplit * b;
    const double bh = tb - (tb - b);
    const double bl = b - bh;
    return {p, ((ah * bh - p) + ah * bl + al * bh) + al * bl};
#endif
}

}  // namespace dd_detail

inline DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
    DoubleDouble s = dd_detail::two_sum(a.hi, b.hi);
    const DoubleDouble t = dd_detail::two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = dd_detail::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return dd_detail::quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator-(DoubleDouble a) { return {-a.hi, -a.lo}; }
inline DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }

inline DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
    DoubleDouble p = dd_detail::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return dd_detail::quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator*(DoubleDouble a, double b) {
    DoubleDouble p = dd_detail::two_prod(a.hi, b);
    p.lo += a.lo * b;
    return dd_detail::quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator/(DoubleDouble a, DoubleDouble b) {
    const double q1 = a.hi / b.hi;
    DoubleDouble r = a - b * q1;
    const double q2 = r.hi / b.hi;
    r = r - b * q2;
    const double q3 = r.hi / b.hi;
    return dd_detail::quick_two_sum(q1, q2) + DoubleDouble(q3);
}

inline DoubleDouble& operator+=(DoubleDouble& a, DoubleDouble b) { return a = a + b; }
inline DoubleDouble& operator-=(DoubleDouble& a, DoubleDouble b) { return a = a - b; }
inline DoubleDouble& operator*=(DoubleDouble& a, DoubleDouble b) { return a = a * b; }

inline bool operator==(DoubleDouble a, DoubleDouble b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator<(DoubleDouble a, DoubleDouble b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }

inline DoubleDouble abs(DoubleDouble a) { return a.hi < 0.0 ? -a : a; }

inline DoubleDouble sqrt(DoubleDouble a) {
    if (a.hi <= 0.0) return {0.0, 0.0};
    const double x = 1.0 / std::sqrt(a.hi);
    const double ax = a.hi * x;
    const DoubleDouble ax2 = DoubleDouble(ax) * DoubleDouble(ax);
    return dd_detail::two_sum(ax, (a - ax2).hi * (x * 0.5));
}

/// Complex number over double-double components.
struct ComplexDD {
    DoubleDouble re;
    DoubleDouble im;

    constexpr ComplexDD() = default;
    constexpr ComplexDD(DoubleDouble r, DoubleDouble i = {}) : re(r), im(i) {}  // NOLINT
    ComplexDD(std::complex<double> z) : re(z.real()), im(z.imag()) {}          // NOLINT

    std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
};

inline ComplexDD operator+(const ComplexDD& a, const ComplexDD& b) { return {a.re + b.re, a.im + b.im}; }
inline ComplexDD operator-(const ComplexDD& a, const ComplexDD& b) { return {a.re - b.re, a.im - b.im}; }
inline ComplexDD operator-(const ComplexDD& a) { return {-a.re, -a.im}; }
inline ComplexDD operator*(const ComplexDD& a, const ComplexDD& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline ComplexDD operator*(const ComplexDD& a, double b) { return {a.re * b, a.im * b}; }
inline ComplexDD operator*(const ComplexDD& a, DoubleDouble b) { return {a.re * b, a.im * b}; }
inline ComplexDD operator/(const ComplexDD& a, DoubleDouble b) { return {a.re / b, a.im / b}; }
inline ComplexDD operator/(const ComplexDD& a, const ComplexDD& b) {
    const DoubleDouble den = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}
inline ComplexDD& operator+=(ComplexDD& a, const ComplexDD& b) { return a = a + b; }
inline ComplexDD& operator*=(ComplexDD& a, const ComplexDD& b) { return a = a * b; }

inline DoubleDouble norm(const ComplexDD& a) { return a.re * a.re + a.im * a.im; }
/// Magnitude to double precision; enough for step control and scaling.
inline double abs_approx(const ComplexDD& a) { return std::hypot(a.re.to_double(), a.im.to_double()); }

}  // namespace ahspec
