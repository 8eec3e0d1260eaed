#include "ahspec/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ahspec {

namespace {

constexpr double kGrid = 0x1p-40;  // spacing of representable positions
constexpr double kLn2 = 0.693147180559945309417232121458176568;

ComplexDD pow_dd(double x, int n) {
    DoubleDouble acc{1.0};
    for (int i = 0; i < n; ++i) acc = acc * x;
    return {acc};
}

// Advances f'' = Q(x) f with Q(x) = (x^l - zeta x^k)^2 by Taylor series of
// fixed order about the current point. Coefficients of Q about x0 come from a
// Taylor shift of its monomial form; the series recurrence is
//   (n+1)(n+2) a_{n+2} = sum_j Q_j a_{n-j}.
// Local error is held to (tol |state| + atol) h / span, so errors summed
// over a path of length span stay within tol.
class TaylorPropagator {
public:
    TaylorPropagator(Complex zeta, const OperatorParams& p, int order, double span, double tol)
        : order_(std::max(order, 8)), deg_(2 * p.l()), span_(std::max(span, 1.0)), tol_(tol), mono_(deg_ + 1),
          shifted_(deg_ + 1), coef_(order_ + 1), inv_(order_ + 1) {
        const ComplexDD z{zeta};
        mono_[2 * p.l()] += ComplexDD{DoubleDouble{1.0}};
        mono_[p.l() + p.k()] += z * DoubleDouble{-2.0};
        mono_[2 * p.k()] += z * z;
        for (int n = 0; n <= order_; ++n)
            inv_[n] = DoubleDouble{1.0} / DoubleDouble{static_cast<double>(n + 1) * (n + 2)};
    }

    void advance(SolutionState& s, double to_x, const ShootingConfig& cfg) {
        const double dir = to_x > s.x ? 1.0 : -1.0;
        const double inv_thr = 1.0 / cfg.renorm_threshold;
        while (s.x != to_x) {
            if (s.steps >= cfg.max_steps)
                throw IntegrationError("step budget of " + std::to_string(cfg.max_steps) + " exhausted at x = " +
                                           std::to_string(s.x),
                                       s.x);
            expand(s);
            const double scale = std::max(abs_approx(s.f), abs_approx(s.fp));
            const double tol_per_length = (tol_ * scale + cfg.atol) / span_;
            const double remaining = std::abs(to_x - s.x);
            double h = remaining;
            // |a_n| h^n <= tol_per_length h, and the same for the derivative term
            for (int n = order_ - 1; n <= order_; ++n) {
                const double an = abs_approx(coef_[n]);
                if (an == 0.0) continue;
                h = std::min(h, 0.8 * std::pow(tol_per_length / an, 1.0 / (n - 1)));
                h = std::min(h, 0.8 * std::pow(tol_per_length / (n * an), 1.0 / (n - 2)));
            }
            if (h < remaining) {
                h = std::floor(h / kGrid) * kGrid;
                if (h <= 0.0)
                    throw IntegrationError("step size underflow at x = " + std::to_string(s.x), s.x);
            }
            const double x_new = (h >= remaining) ? to_x : s.x + dir * h;
            evaluate(s, x_new - s.x);
            s.x = x_new;
            ++s.steps;

            const double mag = std::max(abs_approx(s.f), abs_approx(s.fp));
            if (!std::isfinite(mag) || mag == 0.0)
                throw IntegrationError("solution degenerated at x = " + std::to_string(s.x), s.x);
            if (mag > cfg.renorm_threshold || mag < inv_thr) {
                const int e = std::ilogb(mag);
                const double f = std::ldexp(1.0, -e);  // exact rescale by a power of two
                s.f = s.f * f;
                s.fp = s.fp * f;
                s.log_scale += Complex{e * kLn2, 0.0};
            }
        }
    }

private:
    void expand(const SolutionState& s) {
        std::copy(mono_.begin(), mono_.end(), shifted_.begin());
        for (int j = 0; j < deg_; ++j)
            for (int i = deg_ - 1; i >= j; --i) shifted_[i] += shifted_[i + 1] * s.x;
        coef_[0] = s.f;
        coef_[1] = s.fp;
        for (int n = 0; n + 2 <= order_; ++n) {
            ComplexDD acc;
            const int jmax = std::min(n, deg_);
            for (int j = 0; j <= jmax; ++j) acc += shifted_[j] * coef_[n - j];
            coef_[n + 2] = acc * inv_[n];
        }
    }

    void evaluate(SolutionState& s, double h) const {
        ComplexDD f = coef_[order_];
        ComplexDD fp = coef_[order_] * static_cast<double>(order_);
        for (int n = order_ - 1; n >= 0; --n) {
            f = f * h + coef_[n];
            if (n >= 1) fp = fp * h + coef_[n] * static_cast<double>(n);
        }
        s.f = f;
        s.fp = fp;
    }

    int order_;
    int deg_;
    double span_;
    double tol_;
    std::vector<ComplexDD> mono_;
    std::vector<ComplexDD> shifted_;
    std::vector<ComplexDD> coef_;
    std::vector<DoubleDouble> inv_;
};

void check_config(const ShootingConfig& cfg) {
    if (!(cfg.rtol > 0.0)) throw ValidationError("ShootingConfig: rtol must be positive");
    if (!(cfg.atol >= 0.0)) throw ValidationError("ShootingConfig: atol must be non-negative");
    if (!(cfg.renorm_threshold > 1.0)) throw ValidationError("ShootingConfig: renorm_threshold must exceed 1");
    if (cfg.max_steps <= 0) throw ValidationError("ShootingConfig: max_steps must be positive");
    if (cfg.x_inf < 0.0) throw ValidationError("ShootingConfig: x_inf must be positive (or 0 for automatic)");
}

void normalize(SolutionState& s) {
    const DoubleDouble n = sqrt(norm(s.f) + norm(s.fp));
    s.f = s.f / n;
    s.fp = s.fp / n;
    s.log_scale += Complex{std::log(n.to_double()), 0.0};
}

double decay_at(double x, Complex zeta, const OperatorParams& p, End end) {
    return -recessive_exponent(x, zeta, p, end).real();
}

// rtol tightened by the worst amplification reachable within radius.
double local_tolerance(Complex zeta, const OperatorParams& p, double radius, const ShootingConfig& cfg) {
    return std::max(cfg.rtol * std::exp(-amplification_exponent(zeta, p, radius)), kRoundoffFloor);
}

}  // namespace

double amplification_exponent(Complex zeta, const OperatorParams& p, double radius) {
    constexpr int kSamples = 1024;
    double peak = 0.0;
    for (int i = 1; i <= kSamples; ++i) {
        const double x = radius * i / kSamples;
        peak = std::max(peak, recessive_exponent(x, zeta, p, End::PlusInfinity).real());
        peak = std::max(peak, recessive_exponent(-x, zeta, p, End::MinusInfinity).real());
    }
    return 2.0 * peak;
}

double snap_to_grid(double x) { return std::round(x / kGrid) * kGrid; }

Complex wkb_phase(double x, Complex zeta, const OperatorParams& p) {
    return std::pow(x, p.l() + 1) / (p.l() + 1.0) - zeta * std::pow(x, p.k() + 1) / (p.k() + 1.0);
}

Complex recessive_exponent(double x, Complex zeta, const OperatorParams& p, End end) {
    const Complex w = wkb_phase(x, zeta, p);
    if (end == End::PlusInfinity) return -w;
    return (p.l() % 2 == 0) ? w : -w;
}

double turning_scale(Complex zeta, const OperatorParams& p) { return std::pow(std::abs(zeta), 1.0 / p.m()); }

double auto_truncation(Complex zeta, const OperatorParams& p) {
    double x = std::max(kTurningFactor * turning_scale(zeta, p), 0.5);
    while (decay_at(x, zeta, p, End::PlusInfinity) < kMinDecayExponent ||
           decay_at(-x, zeta, p, End::MinusInfinity) < kMinDecayExponent)
        x *= 1.01;
    // round up so the snapped radius still satisfies both bounds
    return std::ceil(x / kGrid) * kGrid;
}

void validate_truncation(double x_inf, Complex zeta, const OperatorParams& p) {
    const double turning = turning_scale(zeta, p);
    if (!(x_inf >= kTurningFactor * turning))
        throw ValidationError("truncation radius " + std::to_string(x_inf) + " is inside " +
                              std::to_string(kTurningFactor) + " x turning scale " + std::to_string(turning));
    const double dp = decay_at(x_inf, zeta, p, End::PlusInfinity);
    const double dm = decay_at(-x_inf, zeta, p, End::MinusInfinity);
    if (!(std::min(dp, dm) >= kMinDecayExponent))
        throw ValidationError("truncation radius " + std::to_string(x_inf) + " gives Re W = " +
                              std::to_string(std::min(dp, dm)) + " < " + std::to_string(kMinDecayExponent));
}

double effective_truncation(Complex zeta, const OperatorParams& p, const ShootingConfig& cfg) {
    check_config(cfg);
    const double x_inf = cfg.x_inf > 0.0 ? snap_to_grid(cfg.x_inf) : auto_truncation(zeta, p);
    validate_truncation(x_inf, zeta, p);
    return x_inf;
}

SolutionState wkb_init(double x, Complex zeta, const OperatorParams& p, End end) {
    if ((end == End::PlusInfinity) != (x > 0.0))
        throw ValidationError("wkb_init: start point must lie on the side of the chosen end");
    if (std::abs(x) < kTurningFactor * turning_scale(zeta, p) || decay_at(x, zeta, p, end) < kMinDecayExponent)
        throw ValidationError("wkb_init: x = " + std::to_string(x) + " lies inside the turning-point region");
    x = snap_to_grid(x);
    // E' = -W'(x) at +inf, (-1)^l W'(x) at -inf, with W'(x) = x^l - zeta x^k
    const ComplexDD wprime = pow_dd(x, p.l()) - ComplexDD{zeta} * pow_dd(x, p.k());
    const bool flip = end == End::PlusInfinity || p.l() % 2 == 1;
    const ComplexDD eprime = flip ? -wprime : wprime;
    SolutionState s;
    s.x = x;
    s.f = ComplexDD{DoubleDouble{1.0}};
    s.fp = eprime - ComplexDD{DoubleDouble{p.l() / (2.0 * x)}};
    s.log_scale = recessive_exponent(x, zeta, p, end) - 0.5 * p.l() * std::log(std::abs(x));
    return s;
}

SolutionState integrate(const SolutionState& from, double to_x, Complex zeta, const OperatorParams& p,
                        const ShootingConfig& cfg) {
    check_config(cfg);
    SolutionState s = from;
    const double radius = std::max(std::abs(from.x), std::abs(to_x));
    TaylorPropagator prop(zeta, p, cfg.taylor_order, std::abs(to_x - from.x), local_tolerance(zeta, p, radius, cfg));
    prop.advance(s, snap_to_grid(to_x), cfg);
    return s;
}

std::vector<SolutionState> integrate_through(const SolutionState& from, std::span<const double> stations,
                                             Complex zeta, const OperatorParams& p, const ShootingConfig& cfg) {
    check_config(cfg);
    std::vector<SolutionState> out;
    out.reserve(stations.size());
    SolutionState s = from;
    double span = 0.0;
    double radius = std::abs(from.x);
    for (double st : stations) {
        span = std::max(span, std::abs(st - from.x));
        radius = std::max(radius, std::abs(st));
    }
    TaylorPropagator prop(zeta, p, cfg.taylor_order, span, local_tolerance(zeta, p, radius, cfg));
    double prev = s.x;
    int dir = 0;
    for (double st : stations) {
        st = snap_to_grid(st);
        const int d = st > prev ? 1 : (st < prev ? -1 : 0);
        if (d != 0 && dir != 0 && d != dir) throw ValidationError("integrate_through: stations must be monotone");
        if (d != 0) dir = d;
        prop.advance(s, st, cfg);
        out.push_back(s);
        prev = st;
    }
    return out;
}

ComplexDD raw_wronskian(const SolutionState& a, const SolutionState& b) { return a.f * b.fp - b.f * a.fp; }

MatchResult match_at(Complex zeta, const OperatorParams& p, const ShootingConfig& cfg) {
    MatchResult r;
    r.x_inf = effective_truncation(zeta, p, cfg);
    const double xm = snap_to_grid(cfg.x_match);
    if (!(std::abs(xm) < r.x_inf)) throw ValidationError("x_match must lie inside (-x_inf, x_inf)");
    r.plus = integrate(wkb_init(r.x_inf, zeta, p, End::PlusInfinity), xm, zeta, p, cfg);
    r.minus = integrate(wkb_init(-r.x_inf, zeta, p, End::MinusInfinity), xm, zeta, p, cfg);
    normalize(r.plus);
    normalize(r.minus);
    r.mismatch = raw_wronskian(r.plus, r.minus).to_complex();
    return r;
}

Complex connection_mismatch(Complex zeta, const OperatorParams& p, const ShootingConfig& cfg) {
    return match_at(zeta, p, cfg).mismatch;
}

std::vector<ProfileSample> eigenfunction_profile(Complex zeta, const OperatorParams& p, const ShootingConfig& cfg,
                                                 int n_samples, double residual_threshold) {
    if (n_samples < 2) throw ValidationError("eigenfunction_profile: need at least 2 samples");
    const MatchResult m = match_at(zeta, p, cfg);
    const double residual = std::abs(m.mismatch);
    if (!(residual <= residual_threshold))
        throw NotAnEigenvalueError("zeta is not an eigenvalue: |D| = " + std::to_string(residual) + " exceeds " +
                                       std::to_string(residual_threshold),
                                   residual);
    const double x_inf = m.x_inf;
    const double xm = m.plus.x;

    std::vector<double> xs(n_samples);
    for (int i = 0; i < n_samples; ++i)
        xs[i] = snap_to_grid(-x_inf + 2.0 * x_inf * i / (n_samples - 1));
    std::vector<double> right;
    std::vector<double> left;
    for (double x : xs) (x >= xm ? right : left).push_back(x);
    std::reverse(right.begin(), right.end());

    const auto plus = integrate_through(wkb_init(x_inf, zeta, p, End::PlusInfinity), right, zeta, p, cfg);
    const auto minus = integrate_through(wkb_init(-x_inf, zeta, p, End::MinusInfinity), left, zeta, p, cfg);

    // Scale the left branch onto the right one at x_match (least squares on (f, f')).
    const ComplexDD num = ComplexDD{m.minus.f.re, -m.minus.f.im} * m.plus.f +
                          ComplexDD{m.minus.fp.re, -m.minus.fp.im} * m.plus.fp;
    const Complex log_kappa = std::log(num.to_complex()) + m.plus.log_scale - m.minus.log_scale;

    auto sample = [](const SolutionState& s, Complex shift) {
        const Complex lf = std::log(s.f_value()) + s.log_scale + shift;
        return ProfileSample{s.x, lf.real(), std::arg(std::polar(1.0, lf.imag()))};
    };
    std::vector<ProfileSample> out;
    out.reserve(xs.size());
    for (const auto& s : minus) out.push_back(sample(s, log_kappa));
    for (auto it = plus.rbegin(); it != plus.rend(); ++it) out.push_back(sample(*it, Complex{}));
    return out;
}

}  // namespace ahspec
