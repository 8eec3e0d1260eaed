#pragma once

// Direct numerical evaluation of the singular Bessel-type integrals
//   I(T)      = int_{-1}^{1} e^{-i p T} (1-p^2)^{-alpha} dp
//   Phi_+-(T) = int_{1}^{inf} e^{+- i p T} (p^2-1)^{-alpha} dp
// and the small-v kernels built on I. Endpoint singularities are removed by
// the substitution s = u^{1/(1-alpha)}, so one adaptive Gauss-Kronrod engine
// serves every exponent.

#include <cstdint>
#include <functional>

#include "ahspec/asymptotics.hpp"
#include "ahspec/complex.hpp"
#include "ahspec/errors.hpp"
#include "ahspec/params.hpp"

namespace ahspec {

struct QuadratureResult {
    Complex value;
    double abs_error_estimate = 0.0;
    std::int64_t evaluations = 0;
};

/// Tolerance not reached within the evaluation budget; carries the best estimate.
class QuadratureError : public NumericError {
public:
    QuadratureError(const std::string& what, QuadratureResult best)
        : NumericError(what), best_(best) {}
    const QuadratureResult& best() const { return best_; }

private:
    QuadratureResult best_;
};

inline constexpr std::int64_t kDefaultQuadratureBudget = 1'000'000;
/// |T| at which eval_I switches from direct weighting to rotated contours.
inline constexpr double kRotationSwitch = 15.0;

/// Globally adaptive 7/15-point Gauss-Kronrod on [a, b] for complex integrands.
QuadratureResult integrate_adaptive(const std::function<Complex(double)>& f, double a, double b,
                                    double tol, std::int64_t budget = kDefaultQuadratureBudget);

/// L_+-(T) = int_0^inf e^{-sT} s^{-alpha} (2 +- i s)^{-alpha} ds, Re T > 0.
QuadratureResult laplace_halfline(Complex T, double alpha, Sign sign, double tol,
                                  std::int64_t budget = kDefaultQuadratureBudget);

/// I(T) by direct quadrature on [-1, 1] (any T, costly for large |T|).
QuadratureResult eval_I_direct(Complex T, double alpha, double tol,
                               std::int64_t budget = kDefaultQuadratureBudget);
/// I(T) from the two vertical half-lines through p = -1 and p = 1; needs Re T != 0.
QuadratureResult eval_I_rotated(Complex T, double alpha, double tol,
                                std::int64_t budget = kDefaultQuadratureBudget);
/// I(T), choosing the strategy by |T|.
QuadratureResult eval_I(Complex T, double alpha, double tol,
                        std::int64_t budget = kDefaultQuadratureBudget);

/// Phi_+-(T) for real T > 0 via the path rotated onto p = 1 +- i tau.
QuadratureResult eval_phi(double T, double alpha, Sign sign, double tol,
                          std::int64_t budget = kDefaultQuadratureBudget);

enum class KernelKind { Analytic, Ramified };

/// g_a(v) = I(xi v^{q+1}/(q+1)) with exponent A, or
/// g_s(v) = v^{1/m} I(xi v^{q+1}/(q+1)) with exponent B (principal v^{1/m}).
QuadratureResult eval_g_tilde(Complex v, Complex xi, const DerivedParams& d, KernelKind which,
                              double tol, std::int64_t budget = kDefaultQuadratureBudget);

}  // namespace ahspec
