#include "ahspec/params.hpp"

#include <algorithm>

#include "ahspec/errors.hpp"

namespace ahspec {

OperatorParams::OperatorParams(int k, int l) : k_(k), l_(l) {
    if (k < 0 || l < 0) throw ValidationError("OperatorParams: k and l must be non-negative");
    if (k >= l) throw ValidationError("OperatorParams: requires k < l");
}

DerivedParams derive_params(const OperatorParams& p) {
    DerivedParams d;
    d.k = p.k();
    d.l = p.l();
    d.m = p.m();
    d.q_value = Rational(p.l() + 1, d.m) - 2;
    if (d.q_value.is_integer()) {
        const auto q = d.q_value.num();
        d.q = static_cast<int>(q);
        d.p0 = Rational(1, (q + 1) * (q + 2));
    }
    const Rational mq1 = d.m_q1();
    d.a_exp = Rational(-1, 2) * (Rational(1) + Rational(1) / mq1);
    d.b_exp = Rational(-1, 2) * (Rational(1) - Rational(1) / mq1);
    d.q1 = -(d.q_value + 1) / 2 + Rational(1, 2 * d.m);
    d.r = Rational(1) - Rational(1) / mq1;
    return d;
}

std::string to_string(CaseClass c) {
    switch (c) {
        case CaseClass::CaseI: return "CaseI";
        case CaseClass::CaseII: return "CaseII";
        case CaseClass::OpenEvenM: return "OpenEvenM";
        case CaseClass::OpenOddMEvenQ: return "OpenOddMEvenQ";
        case CaseClass::Exceptional01: return "Exceptional01";
    }
    return "unknown";
}

bool is_open_case(CaseClass c) { return c == CaseClass::OpenEvenM || c == CaseClass::OpenOddMEvenQ; }

CaseClass classify_case(const OperatorParams& p) {
    if (p.k() == 0 && p.l() == 1) return CaseClass::Exceptional01;
    const int m = p.m();
    if ((p.l() + 1) % m != 0) return CaseClass::CaseI;
    const int ratio = (p.l() + 1) / m;
    if (m % 2 == 1 && ratio % 2 == 1) return CaseClass::CaseII;
    if (m % 2 == 0) return CaseClass::OpenEvenM;
    return CaseClass::OpenOddMEvenQ;
}

std::string to_string(Verdict v) {
    return v == Verdict::AnalyticHypoelliptic ? "analytic hypoelliptic" : "not analytic hypoelliptic";
}

namespace {

std::string power(const char* var, int e) {
    if (e == 0) return "";
    if (e == 1) return var;
    return std::string(var) + "^" + std::to_string(e);
}

std::string symbol_combo(int k, int l) {
    // x^k eta - x^l tau, with x^0 printed as nothing
    std::string a = power("x", k);
    std::string b = power("x", l);
    return (a.empty() ? "" : a + " ") + "eta - " + (b.empty() ? "" : b + " ") + "tau";
}

}  // namespace

StratumReport stratify(const OperatorParams& p) {
    StratumReport rep;
    const int k = p.k();
    const int l = p.l();
    const std::string combo = symbol_combo(k, l);

    if (k == 0 && l == 1) {
        rep.strata.push_back({"Sigma", "{xi = " + combo + " = 0}", 2, true});
        rep.verdict = Verdict::AnalyticHypoelliptic;
        rep.note = "characteristic variety symplectic";
        return rep;
    }
    if (k >= 1) {
        rep.strata.push_back({"Sigma_0", "{xi = " + combo + " = 0, x != 0}", 2, true});
        rep.strata.push_back({"Sigma_1", "{x = xi = 0, eta != 0}", 2, true});
        rep.strata.push_back({"Sigma_2", "{x = xi = eta = 0, tau != 0}", 3, false});
    } else {
        rep.strata.push_back({"Sigma_0", "{xi = " + combo + " = 0, x != 0}", 2, true});
        rep.strata.push_back({"Sigma_1", "{x = xi = eta = 0, tau != 0}", 3, false});
    }
    const bool odd = std::any_of(rep.strata.begin(), rep.strata.end(),
                                 [](const Stratum& s) { return s.codimension % 2 == 1; });
    rep.verdict = odd ? Verdict::NotAnalyticHypoelliptic : Verdict::AnalyticHypoelliptic;
    const auto& bad = rep.strata.back();
    rep.note = "stratum " + bad.name + " of odd codimension " + std::to_string(bad.codimension) +
               " not symplectic";
    if (classify_case(p) == CaseClass::CaseI)
        rep.note += "; (l+1)/(l-k) is not a positive integer";
    return rep;
}

}  // namespace ahspec
