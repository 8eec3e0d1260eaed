#pragma once

// Operator family  P = d_x^2 + (x^k d_y - x^l d_t)^2,  0 <= k < l,
// its derived constants and the Poisson-stratum bookkeeping.

#include <optional>
#include <string>
#include <vector>

#include "ahspec/rational.hpp"

namespace ahspec {

/// Exponents (k, l) of the operator family; construction enforces 0 <= k < l.
class OperatorParams {
public:
    OperatorParams(int k, int l);

    int k() const { return k_; }
    int l() const { return l_; }
    int m() const { return l_ - k_; }

    friend bool operator==(const OperatorParams&, const OperatorParams&) = default;

private:
    int k_;
    int l_;
};

/// Constants derived from (k, l), kept exact.
///
/// `q = (l+1)/(l-k) - 2` is an integer only when (l+1)/(l-k) is; otherwise
/// `q` and `p0` (which need the polynomial P(v)) are empty. The exponents
/// A, B and q1, r depend on (k, l) only through m(q+1) = k+1 and are always
/// filled in.
struct DerivedParams {
    int k = 0;
    int l = 0;
    int m = 0;                    ///< l - k
    Rational q_value;             ///< (l+1)/(l-k) - 2, possibly non-integer
    std::optional<int> q;         ///< set iff q_value is an integer
    std::optional<Rational> p0;   ///< 1/((q+1)(q+2)), set iff q is
    Rational a_exp;               ///< A = -(1 + 1/(m(q+1)))/2
    Rational b_exp;               ///< B = -(1 - 1/(m(q+1)))/2
    Rational q1;                  ///< -(q+1)/2 + 1/(2m)
    Rational r;                   ///< 1 - 1/(m(q+1))

    bool q_is_integer() const { return q.has_value(); }
    /// m(q+1); equals k+1.
    Rational m_q1() const { return Rational(m) * (q_value + 1); }
};

DerivedParams derive_params(const OperatorParams& p);

enum class CaseClass {
    CaseI,          ///< (l+1)/(l-k) not a positive integer
    CaseII,         ///< l-k and (l+1)/(l-k) both odd
    OpenEvenM,      ///< remaining cases with m even
    OpenOddMEvenQ,  ///< remaining cases with m odd, q even
    Exceptional01,  ///< (k, l) = (0, 1)
};

std::string to_string(CaseClass c);
CaseClass classify_case(const OperatorParams& p);
bool is_open_case(CaseClass c);

enum class Verdict { AnalyticHypoelliptic, NotAnalyticHypoelliptic };
std::string to_string(Verdict v);

struct Stratum {
    std::string name;
    std::string description;
    int codimension = 0;
    bool symplectic = false;
};

struct StratumReport {
    std::vector<Stratum> strata;
    Verdict verdict = Verdict::NotAnalyticHypoelliptic;
    std::string note;
};

StratumReport stratify(const OperatorParams& p);

}  // namespace ahspec
