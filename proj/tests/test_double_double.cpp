#include "doctest.h"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <random>

#include "ahspec/double_double.hpp"

using namespace ahspec;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

Big big(DoubleDouble a) { return Big(a.hi) + Big(a.lo); }

// Relative error of a double-double result against a 50-digit reference.
double rel_err(DoubleDouble got, const Big& want) {
    if (want == 0) return static_cast<double>(abs(big(got)));
    return static_cast<double>(abs((big(got) - want) / want));
}

DoubleDouble random_dd(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> e(-30, 30);
    const double hi = std::ldexp(u(rng), e(rng));
    return dd_detail::two_sum(hi, hi * 1e-17 * u(rng));
}

}  // namespace

TEST_CASE("error-free transformations") {
    const double a = 1.0 + std::ldexp(1.0, -40);
    const double b = 1.0 - std::ldexp(1.0, -41);
    const auto p = dd_detail::two_prod(a, b);
    CHECK(big(p) == Big(a) * Big(b));
    const auto s = dd_detail::two_sum(1e16, 1.2345);
    CHECK(big(s) == Big(1e16) + Big(1.2345));
}

TEST_CASE("arithmetic reaches about 30 significant digits") {
    std::mt19937_64 rng(20261015);
    constexpr double kTol = 1e-30;
    for (int i = 0; i < 2000; ++i) {
        const DoubleDouble a = random_dd(rng);
        const DoubleDouble b = random_dd(rng);
        const Big A = big(a);
        const Big B = big(b);
        CHECK(rel_err(a * b, A * B) <= kTol);
        CHECK(rel_err(a / b, A / B) <= kTol);
        CHECK(rel_err(a * b.hi, A * Big(b.hi)) <= kTol);
        // sums only keep relative accuracy with respect to the operands
        CHECK(static_cast<double>(abs(big(a + b) - (A + B)) / (abs(A) + abs(B))) <= kTol);
        CHECK(rel_err(sqrt(abs(a)), sqrt(abs(A))) <= kTol);
    }
}

TEST_CASE("complex double-double matches complex arithmetic at double precision") {
    const std::complex<double> x{1.25, -0.5};
    const std::complex<double> y{-3.0, 2.0};
    const ComplexDD X{x};
    const ComplexDD Y{y};
    CHECK(std::abs((X * Y).to_complex() - x * y) <= 1e-15);
    CHECK(std::abs((X / Y).to_complex() - x / y) <= 1e-15);
    CHECK(std::abs((X + Y).to_complex() - (x + y)) <= 1e-15);
    CHECK(norm(X).to_double() == doctest::Approx(std::norm(x)).epsilon(1e-15));
    CHECK(abs_approx(Y) == doctest::Approx(std::abs(y)).epsilon(1e-15));
}

TEST_CASE("complex products carry the low words") {
    // (1 + e i)(1 - e i) = 1 + e^2 with e^2 below double resolution of 1
    const double e = std::ldexp(1.0, -35);
    const ComplexDD a{DoubleDouble{1.0}, DoubleDouble{e}};
    const ComplexDD b{DoubleDouble{1.0}, DoubleDouble{-e}};
    const ComplexDD c = a * b;
    CHECK(c.re.hi == 1.0);
    CHECK(c.re.lo == e * e);
    CHECK(c.im.hi == 0.0);
}
