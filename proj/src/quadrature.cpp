#include "ahspec/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

namespace ahspec {

namespace {

constexpr Complex kI{0.0, 1.0};

// Kronrod nodes (descending, last one is the centre) and weights; the Gauss
// 7-point rule uses the odd-indexed nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    Complex value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<Complex(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const Complex fc = f(c);
    Complex kron = fc * kWgk[7];
    Complex gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const Complex sum = f(c - dx) + f(c + dx);
        kron += kWgk[j] * sum;
        if (j % 2 == 1) gauss += kWg[j / 2] * sum;
    }
    return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
}

void check_tol(double tol) {
    if (!(tol > 0.0)) throw ValidationError("quadrature tolerance must be positive");
}

QuadratureResult combine(Complex value, const QuadratureResult& r1, Complex w1, const QuadratureResult& r2,
                         Complex w2) {
    return {value, std::abs(w1) * r1.abs_error_estimate + std::abs(w2) * r2.abs_error_estimate,
            r1.evaluations + r2.evaluations};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<Complex(double)>& f, double a, double b, double tol,
                                    std::int64_t budget) {
    check_tol(tol);
    std::priority_queue<Panel> panels;
    Complex total{};
    double err = 0.0;
    std::int64_t evals = 0;

    constexpr int kInitial = 4;
    for (int i = 0; i < kInitial; ++i) {
        const double lo = a + (b - a) * i / kInitial;
        const double hi = (i + 1 == kInitial) ? b : a + (b - a) * (i + 1) / kInitial;
        Panel p = gk15(f, lo, hi);
        evals += 15;
        total += p.value;
        err += p.error;
        panels.push(p);
    }

    while (err > tol) {
        if (evals + 30 > budget) {
            throw QuadratureError("quadrature budget of " + std::to_string(budget) +
                                      " evaluations exhausted (error estimate " + std::to_string(err) + ")",
                                  {total, err, evals});
        }
        Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) {
            throw QuadratureError("quadrature interval underflow near " + std::to_string(worst.a),
                                  {total, err, evals});
        }
        Panel left = gk15(f, worst.a, mid);
        Panel right = gk15(f, mid, worst.b);
        evals += 30;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        if (!std::isfinite(err)) throw QuadratureError("non-finite integrand", {total, err, evals});
    }
    // Re-sum to shed the drift of the running total.
    Complex exact{};
    double exact_err = 0.0;
    while (!panels.empty()) {
        exact += panels.top().value;
        exact_err += panels.top().error;
        panels.pop();
    }
    return {exact, exact_err, evals};
}

QuadratureResult laplace_halfline(Complex T, double alpha, Sign sign, double tol, std::int64_t budget) {
    check_alpha(alpha);
    if (!(T.real() > 0.0)) throw ValidationError("laplace_halfline: requires Re T > 0");
    const double beta = 1.0 / (1.0 - alpha);
    const double s = sign_value(sign);
    // e^{-Re(T) s_max} = e^{-80} bounds the truncated tail far below any sane tol
    const double s_max = 80.0 / T.real();
    const double u_max = std::pow(s_max, 1.0 / beta);
    auto integrand = [&](double u) {
        const double sv = std::pow(u, beta);
        return beta * std::exp(-T * sv) * std::pow(Complex{2.0, s * sv}, -alpha);
    };
    return integrate_adaptive(integrand, 0.0, u_max, tol, budget);
}

QuadratureResult eval_I_direct(Complex T, double alpha, double tol, std::int64_t budget) {
    check_alpha(alpha);
    check_tol(tol);
    const double beta = 1.0 / (1.0 - alpha);
    // p = 1 - u^beta maps [0,1] onto [0,1]; the p < 0 half folds in by p -> -p.
    auto integrand = [&](double u) {
        const double p = 1.0 - std::pow(u, beta);
        return beta * 2.0 * std::cos(p * T) * std::pow(1.0 + p, -alpha);
    };
    return integrate_adaptive(integrand, 0.0, 1.0, tol, budget);
}

QuadratureResult eval_I_rotated(Complex T, double alpha, double tol, std::int64_t budget) {
    check_alpha(alpha);
    check_tol(tol);
    if (T.real() == 0.0) throw ValidationError("eval_I_rotated: requires Re T != 0");
    if (T.real() < 0.0) T = -T;  // I is even in T
    const Complex w_plus = -kI * std::exp(kI * (kPi * alpha / 2.0)) * std::exp(kI * T);
    const Complex w_minus = kI * std::exp(-kI * (kPi * alpha / 2.0)) * std::exp(-kI * T);
    const double tiny = std::numeric_limits<double>::min();
    const auto lp = laplace_halfline(T, alpha, Sign::Plus, tol / (2.0 * std::max(std::abs(w_plus), tiny)), budget);
    const auto lm = laplace_halfline(T, alpha, Sign::Minus, tol / (2.0 * std::max(std::abs(w_minus), tiny)),
                                     budget - lp.evaluations);
    return combine(w_plus * lp.value + w_minus * lm.value, lp, w_plus, lm, w_minus);
}

QuadratureResult eval_I(Complex T, double alpha, double tol, std::int64_t budget) {
    if (std::abs(T) < kRotationSwitch || std::abs(T.real()) < 1.0) return eval_I_direct(T, alpha, tol, budget);
    return eval_I_rotated(T, alpha, tol, budget);
}

QuadratureResult eval_phi(double T, double alpha, Sign sign, double tol, std::int64_t budget) {
    check_alpha(alpha);
    check_tol(tol);
    if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("eval_phi: T must be positive and finite");
    const double s = sign_value(sign);
    // p = 1 + r, r = +-i tau: (p^2-1)^{-alpha} = (+-i tau)^{-alpha} (2 +- i tau)^{-alpha}
    const Complex w = s * kI * std::exp(-s * kI * (kPi * alpha / 2.0)) * std::exp(s * kI * T);
    const auto l = laplace_halfline(Complex{T, 0.0}, alpha, sign, tol / std::abs(w), budget);
    return {w * l.value, std::abs(w) * l.abs_error_estimate, l.evaluations};
}

QuadratureResult eval_g_tilde(Complex v, Complex xi, const DerivedParams& d, KernelKind which, double tol,
                              std::int64_t budget) {
    if (!d.q) throw ValidationError("eval_g_tilde: q must be an integer");
    const double a = d.a_exp.to_double();
    const double b = d.b_exp.to_double();
    if (!(a > -1.0 && a < 0.0 && b > -1.0 && b < 0.0))
        throw ValidationError("eval_g_tilde: exponents A, B must lie in (-1, 0)");
    const int q = *d.q;
    Complex vq1{1.0, 0.0};
    for (int i = 0; i < q + 1; ++i) vq1 *= v;
    const Complex T = xi * vq1 / static_cast<double>(q + 1);
    if (which == KernelKind::Analytic) return eval_I(T, -a, tol, budget);
    if (v == Complex{}) return {Complex{}, 0.0, 1};
    const Complex root = std::pow(v, 1.0 / d.m);
    auto r = eval_I(T, -b, tol / std::max(std::abs(root), 1e-300), budget);
    return {root * r.value, std::abs(root) * r.abs_error_estimate, r.evaluations};
}

}  // namespace ahspec
