#include "ahspec/asymptotics.hpp"

#include <array>
#include <cmath>
#include <iostream>
#include <mutex>
#include <string>

#include "ahspec/errors.hpp"

namespace ahspec {

namespace {

constexpr Complex kI{0.0, 1.0};

std::mutex& handler_mutex() {
    static std::mutex mu;
    return mu;
}

WarningHandler& handler_slot() {
    static WarningHandler h = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
    return h;
}

thread_local bool t_suppressed = false;

void warn(const std::string& msg) {
    if (t_suppressed) return;
    std::lock_guard lock(handler_mutex());
    if (handler_slot()) handler_slot()(msg);
}

struct OpenCase {
    double p0;
    double a;
    double b;
    int m;
    int q;
};

OpenCase require_open(const DerivedParams& d, CaseClass c, int M, const char* who) {
    if (!is_open_case(c))
        throw ValidationError(std::string(who) + ": no eigenvalue formula for " + to_string(c) +
                              " (requires OpenEvenM or OpenOddMEvenQ)");
    if (!d.q || !d.p0) throw ValidationError(std::string(who) + ": q must be an integer");
    if (M < 1) throw ValidationError(std::string(who) + ": index M must be a positive integer");
    if (M < kAsymptoticIndexThreshold)
        warn(std::string(who) + ": M = " + std::to_string(M) + " is below the asymptotic regime (M >= " +
             std::to_string(kAsymptoticIndexThreshold) + ")");
    return {d.p0->to_double(), d.a_exp.to_double(), d.b_exp.to_double(), d.m, *d.q};
}

double require_integer_q_p0(const DerivedParams& d, const char* who) {
    if (!d.q || !d.p0) throw ValidationError(std::string(who) + ": q must be an integer");
    return d.p0->to_double();
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
}

void check_T(double T) {
    if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("T must be positive and finite");
}

Complex ipow(Complex z, int n) {
    Complex r{1.0, 0.0};
    for (int i = 0; i < n; ++i) r *= z;
    return r;
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler handler) {
    std::lock_guard lock(handler_mutex());
    auto old = std::move(handler_slot());
    handler_slot() = std::move(handler);
    return old;
}

ScopedWarningSuppression::ScopedWarningSuppression() : previous_(t_suppressed) { t_suppressed = true; }
ScopedWarningSuppression::~ScopedWarningSuppression() { t_suppressed = previous_; }

Complex predict_xi_paper(const DerivedParams& d, CaseClass c, int M) {
    const auto oc = require_open(d, c, M, "predict_xi_paper");
    const double mq1 = static_cast<double>(oc.m) * (oc.q + 1);
    if (c == CaseClass::OpenEvenM) {
        return Complex{kPi / oc.p0 * (M + 1.0 / (2.0 * mq1)), -std::log(2.0) / (4.0 * oc.p0)};
    }
    const double inner = std::cos(kPi / (2.0 * mq1)) / std::sqrt(2.0);
    return Complex{kPi / (2.0 * oc.p0) * (2.0 * M + 1.0), -std::log(inner) / (2.0 * oc.p0)};
}

Complex predict_xi_solved(const DerivedParams& d, CaseClass c, int M) {
    const auto oc = require_open(d, c, M, "predict_xi_solved");
    const Complex ea = std::exp(kI * (kPi * (1.0 + oc.a)));
    if (c == CaseClass::OpenEvenM) {
        // e^{2 i P0 xi} = (i/sqrt2) e^{i pi (1+A)}
        const Complex rhs = kI / std::sqrt(2.0) * ea;
        const double t0 = std::arg(rhs) / (2.0 * kPi);
        const double n = M - std::floor(t0);
        return (std::log(rhs) + 2.0 * kPi * n * kI) / (2.0 * kI * oc.p0);
    }
    // e^{-2 i P0 xi} = 2 sqrt2 / (i (e^{i pi(1+A)} + e^{i pi(1+B)}))
    const Complex eb = std::exp(kI * (kPi * (1.0 + oc.b)));
    const Complex rhs = 2.0 * std::sqrt(2.0) / (kI * (ea + eb));
    const double t0 = std::arg(rhs) / (2.0 * kPi);
    const double n = std::floor(-t0) - M;
    return (std::log(rhs) + 2.0 * kPi * n * kI) / (-2.0 * kI * oc.p0);
}

Complex leading_Cs(Complex xi, const DerivedParams& d) {
    const double p0 = require_integer_q_p0(d, "leading_Cs");
    const double a = d.a_exp.to_double();
    return std::exp(kI * p0 * xi) -
           kI / std::sqrt(2.0) * std::exp(kI * (kPi * (1.0 + a))) * std::exp(-kI * p0 * xi);
}

Complex leading_Dplus(Complex xi, const DerivedParams& d) {
    const double p0 = require_integer_q_p0(d, "leading_Dplus");
    const double a = d.a_exp.to_double();
    const double b = d.b_exp.to_double();
    const Complex sum = std::exp(kI * (kPi * (1.0 + a))) + std::exp(kI * (kPi * (1.0 + b)));
    return -2.0 + kI / std::sqrt(2.0) * sum * std::exp(-2.0 * kI * xi * p0);
}

Complex xi_to_zeta(Complex xi, const DerivedParams& d) {
    if (!d.q) throw ValidationError("xi_to_zeta: q must be an integer");
    if (xi == Complex{}) throw ValidationError("xi_to_zeta: xi = 0 has no zeta branch");
    const Complex w = kI * static_cast<double>(d.m) * xi;
    const double n = *d.q + 2.0;
    return std::polar(std::pow(std::abs(w), 1.0 / n), std::arg(w) / n);
}

Complex zeta_to_xi(Complex zeta, const DerivedParams& d) {
    if (!d.q) throw ValidationError("zeta_to_xi: q must be an integer");
    return -kI / static_cast<double>(d.m) * ipow(zeta, *d.q + 2);
}

Complex predict_zeta(const OperatorParams& p, int M) {
    const auto c = classify_case(p);
    require_open(derive_params(p), c, M, "predict_zeta");
    const double k = p.k();
    const double l = p.l();
    const double m = p.m();
    const double base = M * kPi * (l + 1.0) * (k + 1.0) / m;
    return std::polar(std::pow(base, m / (l + 1.0)), kPi * m / (2.0 * (l + 1.0)));
}

Complex p_poly(Complex v, const DerivedParams& d) {
    if (!d.q) throw ValidationError("p_poly: q must be an integer");
    const int q = *d.q;
    Complex acc{};
    for (int j = q; j >= 0; --j) acc = acc * v + static_cast<double>(j + 1);
    return acc / (static_cast<double>(q + 1) * (q + 2));
}

Complex s_of_v(Complex v, Complex xi, const DerivedParams& d) {
    const double p0 = require_integer_q_p0(d, "s_of_v");
    const int q = *d.q;
    const Complex vq1 = ipow(v, q + 1);
    return kI * xi * (vq1 * v / static_cast<double>(q + 2) - vq1 / static_cast<double>(q + 1) + p0);
}

Complex s_of_v_factored(Complex v, Complex xi, const DerivedParams& d) {
    return kI * xi * (v - 1.0) * (v - 1.0) * p_poly(v, d);
}

double lanczos_gamma(double x) {
    static constexpr std::array<double, 9> c = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
    constexpr double g = 7.0;
    if (x < 0.5) return kPi / (std::sin(kPi * x) * lanczos_gamma(1.0 - x));
    x -= 1.0;
    double a = c[0];
    const double t = x + g + 0.5;
    for (std::size_t i = 1; i < c.size(); ++i) a += c[i] / (x + static_cast<double>(i));
    return std::sqrt(2.0 * kPi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

Complex watson_halfline(double T, double alpha, Sign /*sign*/) {
    check_T(T);
    check_alpha(alpha);
    return std::pow(2.0, -alpha) * lanczos_gamma(1.0 - alpha) * std::pow(T, alpha - 1.0);
}

Complex watson_phi(double T, double alpha, Sign sign) {
    const double s = sign_value(sign);
    const Complex lead = watson_halfline(T, alpha, sign);
    return std::exp(kI * (s * kPi * (1.0 - alpha) / 2.0)) * std::exp(kI * (s * T)) * lead;
}

Complex watson_I(Complex T, double alpha) {
    check_alpha(alpha);
    if (T == Complex{} || !is_finite(T)) throw ValidationError("watson_I: T must be nonzero and finite");
    const double ph = kPi * (1.0 - alpha) / 2.0;
    const Complex osc = std::exp(kI * T - kI * ph) + std::exp(-kI * T + kI * ph);
    return osc * std::pow(2.0, -alpha) * lanczos_gamma(1.0 - alpha) * std::pow(T, alpha - 1.0);
}

}  // namespace ahspec
