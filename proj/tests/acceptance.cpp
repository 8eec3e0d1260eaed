// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include "ahspec/asymptotics.hpp"
#include "ahspec/params.hpp"
#include "ahspec/quadrature.hpp"
#include "ahspec/records_io.hpp"
#include "ahspec/rootfind.hpp"
#include "ahspec/shooting.hpp"

using namespace ahspec;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

constexpr int kFrom = 3;
constexpr int kTo = 12;
constexpr double kLn2 = 0.693147180559945309417232121458176568;

struct Criterion {
    int id = 0;
    std::string title;
    bool pass = true;
    std::vector<std::string> details;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            details.push_back("failed: " + what);
        }
    }
    void note(const std::string& s) { details.push_back(s); }
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::string show(Complex z) { return fmt("%.12g%+.12gi", z.real(), z.imag()); }

struct ArrayRun {
    OperatorParams p;
    std::vector<EigenvalueRecord> rows;
    double seconds = 0.0;
};

ArrayRun run_scan(int k, int l) {
    ArrayRun run{OperatorParams(k, l), {}, 0.0};
    const auto t0 = Clock::now();
    ScopedWarningSuppression quiet;
    run.rows = scan(run.p, kFrom, kTo, ShootingConfig{});
    run.seconds = seconds_since(t0);
    return run;
}

void check_array(Criterion& c, const ArrayRun& run) {
    const auto& rows = run.rows;
    c.require(rows.size() == static_cast<std::size_t>(kTo - kFrom + 1), "row count");
    double prev_gap = INFINITY;
    int certified = 0;
    for (const auto& r : rows) {
        certified += r.certified();
        c.note(fmt("M=%2d %-18s zeta=%s |D|=%.2e gap=%.4f (3/M=%.4f)", r.M, to_string(r.status).c_str(),
                   show(r.zeta_refined).c_str(), r.residual, r.zeta_asymptotic_gap, 3.0 / r.M));
        c.require(r.certified(), fmt("M=%d not certified (%s)", r.M, r.message.c_str()));
        c.require(r.residual <= kCertifyResidual, fmt("M=%d residual %.3g", r.M, r.residual));
        c.require(r.zeta_asymptotic_gap <= 3.0 / r.M, fmt("M=%d gap above 3/M", r.M));
        c.require(r.zeta_asymptotic_gap < prev_gap, fmt("M=%d gap not decreasing", r.M));
        prev_gap = r.zeta_asymptotic_gap;
    }
    c.note(fmt("certified %d of %zu in %.1f s", certified, rows.size(), run.seconds));
    c.require(run.seconds <= 120.0, "runtime above 2 minutes");
}

void criterion_winding(Criterion& c, const std::vector<const ArrayRun*>& runs) {
    ScopedWarningSuppression quiet;
    const ShootingConfig cfg;
    for (const ArrayRun* run : runs) {
        const auto& rows = run->rows;
        std::vector<std::future<WindingReport>> midway;
        std::vector<int> idx;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            if (!r.certified()) continue;
            c.require(r.winding == 1, fmt("(%d,%d) M=%d winding around eigenvalue is not 1", run->p.k(), run->p.l(), r.M));
            // the upper neighbour of the last row is its solved seed
            const Complex next = i + 1 < rows.size() && rows[i + 1].certified() ? rows[i + 1].zeta_refined
                                                                                : solved_seed(run->p, r.M + 1);
            const Complex center = 0.5 * (r.zeta_refined + next);
            const double radius = std::min(0.1 * predicted_spacing(run->p, r.M), 0.5);
            midway.push_back(std::async(std::launch::async, [=, p = run->p] {
                ScopedWarningSuppression q;
                return winding_number(center, radius, p, cfg);
            }));
            idx.push_back(r.M);
        }
        std::string around = "winding around M=";
        for (const auto& r : rows) around += r.winding ? std::to_string(*r.winding) : std::string("-");
        c.note(fmt("(%d,%d) %s", run->p.k(), run->p.l(), around.c_str()));
        std::string mids;
        for (std::size_t j = 0; j < midway.size(); ++j) {
            try {
                const WindingReport w = midway[j].get();
                mids += std::to_string(w.winding);
                c.require(w.winding == 0, fmt("(%d,%d) midway after M=%d has winding %d", run->p.k(), run->p.l(),
                                              idx[j], w.winding));
            } catch (const std::exception& e) {
                mids += "!";
                c.require(false, fmt("(%d,%d) midway after M=%d: %s", run->p.k(), run->p.l(), idx[j], e.what()));
            }
        }
        c.note(fmt("(%d,%d) winding midway to the next index: %s", run->p.k(), run->p.l(), mids.c_str()));
    }
}

void criterion_watson(Criterion& c) {
    const auto t0 = Clock::now();
    const double Ts[] = {20.0, 50.0, 100.0, 200.0};
    for (double alpha : {0.25, 0.5, 0.75}) {
        double c_I = 0.0;
        double c_plus = 0.0;
        double c_minus = 0.0;
        for (double T : Ts) {
            const Complex vi = eval_I(T, alpha, 1e-12).value;
            c_I = std::max(c_I, T * std::abs(vi / watson_I(T, alpha) - 1.0));
            const Complex vp = eval_phi(T, alpha, Sign::Plus, 1e-12).value;
            c_plus = std::max(c_plus, T * std::abs(vp / watson_phi(T, alpha, Sign::Plus) - 1.0));
            const Complex vm = eval_phi(T, alpha, Sign::Minus, 1e-12).value;
            c_minus = std::max(c_minus, T * std::abs(vm / watson_phi(T, alpha, Sign::Minus) - 1.0));
        }
        c.note(fmt("alpha=%.2f fitted C: I=%.4f Phi+=%.4f Phi-=%.4f", alpha, c_I, c_plus, c_minus));
        c.require(c_I <= 3.0 && c_plus <= 3.0 && c_minus <= 3.0, fmt("alpha=%.2f constant above 3", alpha));
    }
    const double secs = seconds_since(t0);
    c.note(fmt("runtime %.2f s", secs));
    c.require(secs <= 10.0, "runtime above 10 s");
}

// Relative drift of the Wronskian of f+ (run from +x_inf) and f- (run from
// -x_inf) over n-1 common interior stations.
double wronskian_drift(Complex zeta, const OperatorParams& p, const ShootingConfig& cfg, double x_inf, int n,
                       int& stations) {
    std::vector<double> st_plus;
    for (int j = 1; j < n; ++j) st_plus.push_back(snap_to_grid(x_inf * (1.0 - 2.0 * j / n)));
    const std::vector<double> st_minus(st_plus.rbegin(), st_plus.rend());
    const SolutionState p0 = wkb_init(x_inf, zeta, p, End::PlusInfinity);
    const SolutionState m0 = wkb_init(-x_inf, zeta, p, End::MinusInfinity);
    const auto plus = integrate_through(p0, st_plus, zeta, p, cfg);
    const auto minus = integrate_through(m0, st_minus, zeta, p, cfg);
    const std::size_t N = plus.size();
    stations = static_cast<int>(N);
    auto exponent = [&](std::size_t i) {
        return static_cast<int>(std::lround((plus[i].log_scale - p0.log_scale).real() / kLn2)) +
               static_cast<int>(std::lround((minus[N - 1 - i].log_scale - m0.log_scale).real() / kLn2));
    };
    const ComplexDD w0 = raw_wronskian(plus[0], minus[N - 1]);
    const int e0 = exponent(0);
    double worst = 0.0;
    for (std::size_t i = 1; i < N; ++i) {
        const ComplexDD ratio = (raw_wronskian(plus[i], minus[N - 1 - i]) / w0) * std::ldexp(1.0, exponent(i) - e0);
        const ComplexDD dev = ratio - ComplexDD{DoubleDouble{1.0}};
        worst = std::max(worst, std::sqrt(norm(dev).to_double()));
    }
    return worst;
}

void criterion_invariants(Criterion& c, const std::vector<const ArrayRun*>& runs) {
    // Wronskian drift on the certification contours; at an eigenvalue itself
    // W vanishes and a relative drift is undefined
    const ShootingConfig cfg;
    for (const ArrayRun* run : runs) {
        std::vector<Complex> points;
        for (const auto& r : run->rows) {
            if (!r.certified()) continue;
            const double radius = std::min(0.1 * predicted_spacing(run->p, r.M), 0.5);
            for (int j = 0; j < 4; ++j) points.push_back(r.zeta_refined + std::polar(radius, 0.5 * M_PI * j + 0.3));
            points.push_back(0.5 * (r.zeta_refined + solved_seed(run->p, r.M + 1)));
        }
        std::vector<std::future<std::pair<double, int>>> drifts;
        for (Complex z : points)
            drifts.push_back(std::async(std::launch::async, [z, cfg, p = run->p] {
                int stations = 0;
                const double d = wronskian_drift(z, p, cfg, auto_truncation(z, p), 16, stations);
                return std::pair{d, stations};
            }));
        double worst = 0.0;
        int min_stations = 1 << 30;
        for (auto& f : drifts) {
            const auto [d, stations] = f.get();
            worst = std::max(worst, d);
            min_stations = std::min(min_stations, stations);
        }
        c.note(fmt("(%d,%d) Wronskian drift max %.2e at %zu contour points, >= %d stations each (rtol %.0e)",
                   run->p.k(), run->p.l(), worst, points.size(), min_stations, cfg.rtol));
        c.require(worst <= 10.0 * cfg.rtol, "Wronskian drift above 10 rtol");
        c.require(min_stations >= 10, "fewer than 10 stations");
    }

    // |D| under rescaled boundary data; D itself turns by c/|c|
    {
        const OperatorParams p(1, 3);
        const Complex zeta{5.0, 5.3};
        const double x_inf = auto_truncation(zeta, p);
        const SolutionState m = integrate(wkb_init(-x_inf, zeta, p, End::MinusInfinity), 0.0, zeta, p, cfg);
        auto nrm = [](const SolutionState& s) { return std::sqrt((norm(s.f) + norm(s.fp)).to_double()); };
        auto dhat = [&](Complex cc) {
            SolutionState s = wkb_init(x_inf, zeta, p, End::PlusInfinity);
            s.f = s.f * ComplexDD{cc};
            s.fp = s.fp * ComplexDD{cc};
            const SolutionState a = integrate(s, 0.0, zeta, p, cfg);
            return raw_wronskian(a, m).to_complex() / (nrm(a) * nrm(m));
        };
        const Complex d1 = dhat(1.0);
        double worst_abs = 0.0;
        double worst_rot = 0.0;
        for (Complex cc : {Complex{3.0, 0.0}, Complex{1e-7, 0.0}, Complex{0.0, 2.0}, Complex{-5.0, 1e3}}) {
            const Complex dc = dhat(cc);
            worst_abs = std::max(worst_abs, std::abs(std::abs(dc) / std::abs(d1) - 1.0));
            worst_rot = std::max(worst_rot, std::abs(dc - cc / std::abs(cc) * d1) / std::abs(d1));
        }
        c.note(fmt("|D| under rescaling: relative change %.2e, rotation law error %.2e", worst_abs, worst_rot));
        c.require(worst_abs <= 1e-14 && worst_rot <= 1e-14, "D not invariant to roundoff");
    }

    // parity at eigenvalues when m is even
    for (const ArrayRun* run : runs) {
        if (derive_params(run->p).m % 2 != 0) continue;
        double worst = 0.0;
        for (const auto& r : run->rows) {
            if (!r.certified()) continue;
            ShootingConfig at = cfg;
            at.x_inf = r.x_inf;
            const MatchResult mr = match_at(r.zeta_refined, run->p, at);
            const double f0 = std::abs(mr.plus.f_value());
            const double fp0 = std::abs(mr.plus.fp_value());
            worst = std::max(worst, std::min(f0, fp0) / std::max(f0, fp0));
        }
        c.note(fmt("(%d,%d) parity: max min(|f(0)|,|f'(0)|)/max = %.2e", run->p.k(), run->p.l(), worst));
        c.require(worst <= 1e-6, "parity above 1e-6");
    }

    // exact rational identities
    int pairs = 0;
    bool exact = true;
    for (int l = 1; l <= 12; ++l)
        for (int k = 0; k < l; ++k) {
            const DerivedParams d = derive_params(OperatorParams(k, l));
            exact = exact && d.m_q1() == Rational(k + 1) && d.a_exp + d.b_exp == Rational(-1);
            ++pairs;
        }
    c.note(fmt("m(q+1) = k+1 and A+B = -1 over %d pairs with l <= 12: %s", pairs, exact ? "exact" : "violated"));
    c.require(exact, "rational identities");
}

void criterion_robustness(Criterion& c, const std::vector<const ArrayRun*>& runs) {
    struct Job {
        const ArrayRun* run;
        const EigenvalueRecord* row;
        std::string label;
        ShootingConfig cfg;
    };
    std::vector<Job> jobs;
    for (const ArrayRun* run : runs)
        for (const auto& r : run->rows) {
            if (!r.certified()) continue;
            ShootingConfig base;
            base.x_inf = r.x_inf;
            ShootingConfig half = base;
            half.rtol *= 0.5;
            ShootingConfig wide = base;
            wide.x_inf = snap_to_grid(1.25 * r.x_inf);
            ShootingConfig left = base;
            left.x_match = -0.3;
            ShootingConfig right = base;
            right.x_match = 0.3;
            jobs.push_back({run, &r, "rtol/2", half});
            jobs.push_back({run, &r, "x_inf*1.25", wide});
            jobs.push_back({run, &r, "x_match=-0.3", left});
            jobs.push_back({run, &r, "x_match=+0.3", right});
        }
    std::vector<std::future<double>> moves;
    for (const Job& j : jobs)
        moves.push_back(std::async(std::launch::async, [j]() -> double {
            ScopedWarningSuppression quiet;
            const auto r = refine(j.row->zeta_seed, j.run->p, j.cfg, 1e-13, j.row->M);
            if (!r.certified()) return INFINITY;
            return std::abs(r.zeta_refined - j.row->zeta_refined) / std::abs(j.row->zeta_refined);
        }));
    double worst = 0.0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const double mv = moves[i].get();
        worst = std::max(worst, mv);
        c.require(mv <= 1e-8, fmt("(%d,%d) M=%d moved %.3g under %s", jobs[i].run->p.k(), jobs[i].run->p.l(),
                                  jobs[i].row->M, mv, jobs[i].label.c_str()));
    }
    c.note(fmt("%zu perturbed refinements, largest relative move %.2e", jobs.size(), worst));
}

void criterion_classifier(Criterion& c) {
    {
        const OperatorParams p(0, 1);
        const auto r = stratify(p);
        c.require(classify_case(p) == CaseClass::Exceptional01, "(0,1) case");
        c.require(r.verdict == Verdict::AnalyticHypoelliptic, "(0,1) verdict");
        bool symplectic = !r.strata.empty();
        for (const auto& s : r.strata) symplectic = symplectic && s.symplectic;
        c.require(symplectic, "(0,1) strata symplectic");
        c.note("(0,1): " + to_string(classify_case(p)) + "; " + to_string(r.verdict) + "; " + r.note);
    }
    bool ok0 = true;
    bool ok1 = true;
    for (int l = 2; l <= 12; ++l) {
        const auto r = stratify(OperatorParams(0, l));
        bool has = false;
        for (const auto& s : r.strata)
            has = has || (s.name == "Sigma_1" && s.description == "{x = xi = eta = 0, tau != 0}" && s.codimension == 3 &&
                          !s.symplectic);
        ok0 = ok0 && has && r.strata.size() == 2 && r.verdict == Verdict::NotAnalyticHypoelliptic;
    }
    for (int l = 2; l <= 12; ++l)
        for (int k = 1; k < l; ++k) {
            const auto r = stratify(OperatorParams(k, l));
            bool has = false;
            for (const auto& s : r.strata)
                has = has || (s.name == "Sigma_2" && s.description == "{x = xi = eta = 0, tau != 0}" &&
                              s.codimension == 3 && !s.symplectic);
            ok1 = ok1 && has && r.strata.size() == 3 && r.verdict == Verdict::NotAnalyticHypoelliptic;
        }
    c.note(fmt("(0,l), 2 <= l <= 12: Sigma_1 of codimension 3, not analytic hypoelliptic: %s", ok0 ? "yes" : "no"));
    c.note(fmt("(k,l), k >= 1, l <= 12: Sigma_2 of codimension 3, not analytic hypoelliptic: %s", ok1 ? "yes" : "no"));
    c.require(ok0, "(0,l) family");
    c.require(ok1, "k >= 1 family");
    const std::pair<std::pair<int, int>, CaseClass> cases[] = {
        {{1, 3}, CaseClass::OpenEvenM}, {{2, 5}, CaseClass::OpenOddMEvenQ}, {{0, 2}, CaseClass::CaseI},
        {{0, 1}, CaseClass::Exceptional01}, {{1, 2}, CaseClass::CaseII}};
    for (const auto& [kl, want] : cases) {
        const CaseClass got = classify_case(OperatorParams(kl.first, kl.second));
        c.note(fmt("(%d,%d): %s", kl.first, kl.second, to_string(got).c_str()));
        c.require(got == want, fmt("(%d,%d) classified as %s", kl.first, kl.second, to_string(got).c_str()));
    }
}

void criterion_report(Criterion& c, const ArrayRun& run) {
    std::ostringstream csv;
    write_records_csv(csv, run.rows);
    std::istringstream back(csv.str());
    const auto rows = read_records_csv(back);
    const auto& cols = record_columns();
    const bool has_cols = std::find(cols.begin(), cols.end(), "seed_gap_paper") != cols.end() &&
                          std::find(cols.begin(), cols.end(), "seed_gap_solved") != cols.end();
    c.require(has_cols, "table lacks a seed gap column");
    c.require(rows.size() == run.rows.size(), "table row count");
    int paper_closer = 0;
    c.note("  M   |xi - xi_paper|   |xi - xi_solved|");
    for (const auto& r : rows) {
        c.require(std::isfinite(r.seed_gap_paper) && std::isfinite(r.seed_gap_solved),
                  fmt("M=%d seed gap missing", r.M));
        paper_closer += r.seed_gap_paper < r.seed_gap_solved;
        c.note(fmt(" %2d   %.6e      %.6e", r.M, r.seed_gap_paper, r.seed_gap_solved));
    }
    c.note(fmt("closed-form predictor closer in %d of %zu rows", paper_closer, rows.size()));
}

void criterion_odd_identity(Criterion& c, const OperatorParams& p) {
    const DerivedParams d = derive_params(p);
    const CaseClass cc = classify_case(p);
    double worst = 0.0;
    ScopedWarningSuppression quiet;
    for (int M = 1; M <= 200; ++M) {
        const Complex a = predict_xi_paper(d, cc, M);
        const Complex b = predict_xi_solved(d, cc, M);
        worst = std::max(worst, std::abs(a - b) / std::abs(a));
    }
    c.note(fmt("solved vs closed-form xi over M = 1..200: max relative difference %.2e", worst));
    c.require(worst <= 1e-12, "solved seeds differ from the closed-form formula");
}

}  // namespace

int main() {
    const auto t0 = Clock::now();
    std::vector<Criterion> crit(8);
    const char* titles[] = {"eigenvalue array (1,3), M 3..12",
                            "eigenvalue array (2,5), M 3..12",
                            "winding certification",
                            "Watson leading terms",
                            "structural invariants",
                            "robustness to rtol, x_inf and x_match",
                            "classifier verdicts",
                            "seed gap report for (1,3)"};
    for (int i = 0; i < 8; ++i) crit[i] = {i + 1, titles[i], true, {}};

    const ArrayRun a13 = run_scan(1, 3);
    const ArrayRun a25 = run_scan(2, 5);
    const std::vector<const ArrayRun*> both{&a13, &a25};

    check_array(crit[0], a13);
    check_array(crit[1], a25);
    criterion_odd_identity(crit[1], a25.p);
    criterion_winding(crit[2], both);
    criterion_watson(crit[3]);
    criterion_invariants(crit[4], both);
    criterion_robustness(crit[5], both);
    criterion_classifier(crit[6]);
    criterion_report(crit[7], a13);

    bool all = true;
    for (const auto& c : crit) {
        std::printf("criterion %d: %s  %s\n", c.id, c.pass ? "PASS" : "FAIL", c.title.c_str());
        for (const auto& d : c.details) std::printf("    %s\n", d.c_str());
        all = all && c.pass;
    }
    std::printf("%s in %.1f s\n", all ? "all criteria passed" : "some criteria failed", seconds_since(t0));
    return all ? 0 : 1;
}
