#pragma once

// Real-line shooting for  f'' = (x^l - zeta x^k)^2 f.
//
// The solution recessive at +inf and the one recessive at -inf are started
// from their leading WKB form and integrated inward to a matching point; the
// normalized Wronskian there vanishes exactly at eigenvalues. Along the real
// line the inward integration crosses a region where the wanted solution is
// subdominant, amplifying rounding by roughly e^{pi M}, so the state is
// carried in double-double arithmetic and advanced by an adaptive Taylor
// series method.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ahspec/complex.hpp"
#include "ahspec/double_double.hpp"
#include "ahspec/errors.hpp"
#include "ahspec/params.hpp"

namespace ahspec {

/// Required decay exponent Re(-E) at the truncation radius.
inline constexpr double kMinDecayExponent = 40.0;
/// Required ratio between truncation radius and turning scale |zeta|^{1/m}.
inline constexpr double kTurningFactor = 2.0;

struct ShootingConfig {
    double x_inf = 0.0;  ///< truncation radius; 0 selects auto_truncation(zeta)
    double x_match = 0.0;
    double rtol = 1e-13;  ///< relative accuracy of propagated solutions and their Wronskian
    double atol = 0.0;
    double renorm_threshold = 1e8;
    std::int64_t max_steps = 2'000'000;
    int taylor_order = 40;
};

enum class End { PlusInfinity, MinusInfinity };

/// Solution value and derivative; the true solution is e^{log_scale} (f, fp).
struct SolutionState {
    double x = 0.0;
    ComplexDD f;
    ComplexDD fp;
    Complex log_scale;
    std::int64_t steps = 0;  ///< accepted steps since the WKB start

    Complex f_value() const { return f.to_complex(); }
    Complex fp_value() const { return fp.to_complex(); }
};

class IntegrationError : public NumericError {
public:
    IntegrationError(const std::string& what, double x) : NumericError(what), x_(x) {}
    double location() const { return x_; }

private:
    double x_;
};

class NotAnEigenvalueError : public NumericError {
public:
    NotAnEigenvalueError(const std::string& what, double residual) : NumericError(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

/// W(x) = x^{l+1}/(l+1) - zeta x^{k+1}/(k+1).
Complex wkb_phase(double x, Complex zeta, const OperatorParams& p);
/// Exponent E of the recessive WKB solution |x|^{-l/2} e^{E}: -W at +inf, (-1)^l W at -inf.
Complex recessive_exponent(double x, Complex zeta, const OperatorParams& p, End end);

double turning_scale(Complex zeta, const OperatorParams& p);
/// Smallest radius (on a 1% grid) with x >= 2|zeta|^{1/m} and Re(-E) >= 40 at both ends.
double auto_truncation(Complex zeta, const OperatorParams& p);
/// Throws ValidationError when x_inf violates either truncation requirement for zeta.
void validate_truncation(double x_inf, Complex zeta, const OperatorParams& p);
/// Truncation radius actually used for zeta under cfg.
double effective_truncation(Complex zeta, const OperatorParams& p, const ShootingConfig& cfg);

/// 2 max_{|x|<=radius} Re E(x) over both recessive exponents E (both vanish at 0).
/// A perturbation of a recessive solution near its peak is amplified by up to
/// e^{this} relative to the Wronskian of the pair.
double amplification_exponent(Complex zeta, const OperatorParams& p, double radius);

/// Local error floor, a few ulps of double-double.
inline constexpr double kRoundoffFloor = 0x1p-100;

/// Positions are kept on a dyadic grid so step arithmetic is exact.
double snap_to_grid(double x);

SolutionState wkb_init(double x, Complex zeta, const OperatorParams& p, End end);

SolutionState integrate(const SolutionState& from, double to_x, Complex zeta, const OperatorParams& p,
                        const ShootingConfig& cfg);
/// Integrates through monotone stations, returning the state at each.
std::vector<SolutionState> integrate_through(const SolutionState& from, std::span<const double> stations,
                                             Complex zeta, const OperatorParams& p, const ShootingConfig& cfg);

/// Wronskian f1 f2' - f2 f1' of two states at the same x, without log scales.
ComplexDD raw_wronskian(const SolutionState& a, const SolutionState& b);

struct MatchResult {
    SolutionState plus;   ///< recessive at +inf, at x_match, unit norm
    SolutionState minus;  ///< recessive at -inf, at x_match, unit norm
    Complex mismatch;     ///< normalized Wronskian
    double x_inf = 0.0;
};

MatchResult match_at(Complex zeta, const OperatorParams& p, const ShootingConfig& cfg);

/// D(zeta) = (f+ f-' - f- f+') / (|(f+, f+')| |(f-, f-')|) at x_match.
Complex connection_mismatch(Complex zeta, const OperatorParams& p, const ShootingConfig& cfg);

struct ProfileSample {
    double x = 0.0;
    double log_abs = 0.0;  ///< natural log of |f|
    double arg = 0.0;      ///< arg f in (-pi, pi]
};

/// Default |D| accepted by eigenfunction_profile.
inline constexpr double kProfileResidualThreshold = 1e-8;

/// Samples the matched global solution at n_samples points spanning [-x_inf, x_inf].
std::vector<ProfileSample> eigenfunction_profile(Complex zeta, const OperatorParams& p,
                                                 const ShootingConfig& cfg, int n_samples,
                                                 double residual_threshold = kProfileResidualThreshold);

}  // namespace ahspec
