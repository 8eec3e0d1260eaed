#pragma once

// Closed-form large-index predictions of the eigenvalue array, the leading
// connection-coefficient brackets whose zeros they are, the xi <-> zeta map
// and leading Watson-lemma asymptotics of the Bessel-type integrals.

#include <functional>
#include <string_view>

#include "ahspec/complex.hpp"
#include "ahspec/params.hpp"

namespace ahspec {

/// Receives non-fatal diagnostics (e.g. an index M below the asymptotic
/// regime). The default handler writes "warning: ..." to stderr.
using WarningHandler = std::function<void(std::string_view)>;
WarningHandler set_warning_handler(WarningHandler handler);

/// Silences warnings raised on the current thread while alive.
class ScopedWarningSuppression {
public:
    ScopedWarningSuppression();
    ~ScopedWarningSuppression();
    ScopedWarningSuppression(const ScopedWarningSuppression&) = delete;
    ScopedWarningSuppression& operator=(const ScopedWarningSuppression&) = delete;

private:
    bool previous_;
};

/// Indices below this are accepted with a warning.
inline constexpr int kAsymptoticIndexThreshold = 3;

/// Literal evaluation of the closed-form large-M formulas for xi_M
/// (m even, or m odd with q even).
Complex predict_xi_paper(const DerivedParams& d, CaseClass c, int M);

/// Exact root of the leading-order bracket equation. Branch index M is the
/// integer part of Re(xi) * P0 / pi, so consecutive M differ by pi / P0.
Complex predict_xi_solved(const DerivedParams& d, CaseClass c, int M);

/// Bracket e^{i P0 xi} - (i/sqrt2) e^{i pi (1+A)} e^{-i P0 xi}; the unknown
/// nonzero prefactor of the connection coefficient is dropped.
Complex leading_Cs(Complex xi, const DerivedParams& d);

/// Bracket -2 + (i/sqrt2)(e^{i pi(1+A)} + e^{i pi(1+B)}) e^{-2 i xi P0}.
Complex leading_Dplus(Complex xi, const DerivedParams& d);

/// zeta = (i m xi)^{1/(q+2)} on the principal branch, which has
/// arg zeta in (0, pi/(q+2)) whenever Re xi > 0.
Complex xi_to_zeta(Complex xi, const DerivedParams& d);
/// Inverse map xi = -(i/m) zeta^{q+2}.
Complex zeta_to_xi(Complex zeta, const DerivedParams& d);

/// zeta_M = e^{i pi (l-k) / (2(l+1))} [M pi (l+1)(k+1)/(l-k)]^{(l-k)/(l+1)}.
Complex predict_zeta(const OperatorParams& p, int M);

/// P(v) = (q+1)^{-1}(q+2)^{-1} sum_{j=0}^{q} (j+1) v^j.
Complex p_poly(Complex v, const DerivedParams& d);
/// s(v) = i xi (v^{q+2}/(q+2) - v^{q+1}/(q+1) + P0).
Complex s_of_v(Complex v, Complex xi, const DerivedParams& d);
/// Same map written as i xi (v-1)^2 P(v).
Complex s_of_v_factored(Complex v, Complex xi, const DerivedParams& d);

/// Gamma function by a Lanczos approximation (g = 7, 9 terms).
double lanczos_gamma(double x);

enum class Sign { Plus, Minus };
inline double sign_value(Sign s) { return s == Sign::Plus ? 1.0 : -1.0; }

/// Leading term 2^{-alpha} Gamma(1-alpha) T^{alpha-1} of
/// int_0^inf e^{-T q} q^{-alpha} (2 +- i q)^{-alpha} dq.
Complex watson_halfline(double T, double alpha, Sign sign);

/// Leading term of Phi_+-(T) = int_1^inf e^{+- i p T} (p^2-1)^{-alpha} dp.
Complex watson_phi(double T, double alpha, Sign sign);

/// Leading term of I(T) = int_{-1}^{1} e^{-i p T} (1-p^2)^{-alpha} dp.
/// Complex T (with Re T > 0) covers shifted arguments T + K + small.
Complex watson_I(Complex T, double alpha);

}  // namespace ahspec
