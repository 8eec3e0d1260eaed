#include "ahspec/rootfind.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <list>
#include <thread>

#include "ahspec/asymptotics.hpp"

namespace ahspec {

namespace {

struct Branch {
    DerivedParams d;
    CaseClass c;
};

Branch open_branch(const OperatorParams& p) {
    Branch b{derive_params(p), classify_case(p)};
    if (!is_open_case(b.c) || !b.d.q)
        throw ValidationError("no eigenvalue array is predicted for " + to_string(b.c) +
                              " (requires OpenEvenM or OpenOddMEvenQ)");
    return b;
}

bool in_validity_region(Complex zeta, const DerivedParams& d) {
    const Complex xi = zeta_to_xi(zeta, d);
    return xi.real() > 0.0 && std::abs(xi.imag()) <= xi.real();
}

int branch_index(Complex xi, const DerivedParams& d) {
    return static_cast<int>(std::floor(xi.real() * d.p0->to_double() / kPi));
}

// Predictors for indices below the asymptotic threshold are queried quietly.
template <class F>
auto silently(F&& f) {
    ScopedWarningSuppression quiet;
    return f();
}

}  // namespace

std::string to_string(RecordStatus s) {
    switch (s) {
        case RecordStatus::Certified: return "certified";
        case RecordStatus::Diverged: return "diverged";
        case RecordStatus::LeftValidityRegion: return "left_validity_region";
        case RecordStatus::ResidualTooLarge: return "residual_too_large";
        case RecordStatus::WindingMismatch: return "winding_mismatch";
        case RecordStatus::NumericFailure: return "numeric_failure";
    }
    return "unknown";
}

RecordStatus record_status_from_string(const std::string& s) {
    for (auto st : {RecordStatus::Certified, RecordStatus::Diverged, RecordStatus::LeftValidityRegion,
                    RecordStatus::ResidualTooLarge, RecordStatus::WindingMismatch, RecordStatus::NumericFailure})
        if (to_string(st) == s) return st;
    throw ValidationError("unknown record status '" + s + "'");
}

EigenvalueRecord refine(Complex zeta_seed, const OperatorParams& p, const ShootingConfig& cfg, double tol, int M) {
    if (!(tol > 0.0)) throw ValidationError("refine: tol must be positive");
    if (M < 0) throw ValidationError("refine: M must be non-negative");
    const auto br = open_branch(p);
    if (!in_validity_region(zeta_seed, br.d))
        throw ValidationError("refine: seed lies outside the sector |Im xi| <= Re xi, Re xi > 0");

    EigenvalueRecord rec;
    rec.zeta_seed = zeta_seed;
    rec.xi_seed = zeta_to_xi(zeta_seed, br.d);

    ShootingConfig fixed = cfg;
    if (fixed.x_inf <= 0.0) fixed.x_inf = snap_to_grid(1.1 * auto_truncation(zeta_seed, p));
    rec.x_inf = fixed.x_inf;

    Complex zeta = zeta_seed;
    bool converged = false;
    try {
        Complex D = connection_mismatch(zeta, p, fixed);
        while (!converged) {
            if (std::abs(D) <= kNewtonResidualStop) {
                converged = true;
                break;
            }
            if (rec.newton_iters >= kMaxNewtonIterations) {
                rec.status = RecordStatus::Diverged;
                rec.message = "no convergence after " + std::to_string(kMaxNewtonIterations) + " Newton iterations";
                break;
            }
            ++rec.newton_iters;
            const double h = kDerivativeStep * std::abs(zeta);
            const Complex dD = (connection_mismatch(zeta + h, p, fixed) - connection_mismatch(zeta - h, p, fixed)) /
                               (2.0 * h);
            if (dD == Complex{}) {
                rec.status = RecordStatus::Diverged;
                rec.message = "vanishing derivative of D";
                break;
            }
            const Complex step = -D / dD;
            zeta += step;
            if (!is_finite(zeta) || !in_validity_region(zeta, br.d)) {
                rec.status = RecordStatus::LeftValidityRegion;
                rec.message = "Newton step left the validity sector";
                break;
            }
            try {
                validate_truncation(fixed.x_inf, zeta, p);
            } catch (const ValidationError& e) {
                rec.status = RecordStatus::LeftValidityRegion;
                rec.message = e.what();
                break;
            }
            D = connection_mismatch(zeta, p, fixed);
            if (std::abs(step) <= tol * std::abs(zeta)) converged = true;
        }
        rec.residual = std::abs(D);
    } catch (const NumericError& e) {
        rec.status = RecordStatus::NumericFailure;
        rec.message = e.what();
        rec.residual = std::nan("");
    }

    rec.zeta_refined = zeta;
    rec.xi_refined = zeta_to_xi(zeta, br.d);
    if (converged) {
        if (rec.residual <= kCertifyResidual) {
            rec.status = RecordStatus::Certified;
        } else {
            rec.status = RecordStatus::ResidualTooLarge;
            rec.message = "converged with |D| above certification threshold";
        }
    }

    rec.M = M > 0 ? M : std::max(1, branch_index(rec.xi_refined, br.d));
    silently([&] {
        rec.seed_gap_paper = std::abs(rec.xi_refined - predict_xi_paper(br.d, br.c, rec.M));
        rec.seed_gap_solved = std::abs(rec.xi_refined - predict_xi_solved(br.d, br.c, rec.M));
        rec.zeta_asymptotic = predict_zeta(p, rec.M);
        return 0;
    });
    rec.zeta_asymptotic_gap = std::abs(rec.zeta_refined - rec.zeta_asymptotic) / std::abs(rec.zeta_asymptotic);
    return rec;
}

WindingReport winding_number(Complex center, double radius, const OperatorParams& p, const ShootingConfig& cfg,
                             int samples) {
    if (!(radius > 0.0)) throw ValidationError("winding_number: radius must be positive");
    if (samples < kMinWindingSamples)
        throw ValidationError("winding_number: need at least " + std::to_string(kMinWindingSamples) + " samples");

    auto point = [&](double t) { return center + std::polar(radius, 2.0 * kPi * t); };

    ShootingConfig fixed = cfg;
    if (fixed.x_inf <= 0.0) {
        double x_inf = 0.0;
        for (int j = 0; j < samples; ++j)
            x_inf = std::max(x_inf, auto_truncation(point(static_cast<double>(j) / samples), p));
        fixed.x_inf = snap_to_grid(1.02 * x_inf);
    }

    struct Node {
        double t;
        Complex value;
    };
    std::list<Node> nodes;
    for (int j = 0; j <= samples; ++j) {
        const double t = static_cast<double>(j) / samples;
        // the last node repeats the first so the contour closes exactly
        nodes.push_back({t, j == samples ? nodes.front().value : connection_mismatch(point(t), p, fixed)});
    }

    int count = samples;
    for (auto it = nodes.begin(); std::next(it) != nodes.end();) {
        auto nx = std::next(it);
        const double dphi = std::arg(nx->value / it->value);
        if (std::abs(dphi) < kPi / 2.0) {
            ++it;
            continue;
        }
        if (count >= kMaxWindingSamples)
            throw NumericError("winding_number: sample cap of " + std::to_string(kMaxWindingSamples) + " reached");
        const double tm = 0.5 * (it->t + nx->t);
        nodes.insert(nx, {tm, connection_mismatch(point(tm), p, fixed)});
        ++count;
    }

    WindingReport rep;
    rep.center = center;
    rep.radius = radius;
    rep.samples = count;
    rep.min_abs_on_contour = std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (auto it = nodes.begin(); std::next(it) != nodes.end(); ++it) {
        rep.min_abs_on_contour = std::min(rep.min_abs_on_contour, std::abs(it->value));
        total += std::arg(std::next(it)->value / it->value);
    }
    if (!(rep.min_abs_on_contour > kWindingMinAbs))
        throw NumericError("winding_number: contour passes within " + std::to_string(kWindingMinAbs) +
                           " of a zero of D");
    rep.winding = static_cast<int>(std::lround(total / (2.0 * kPi)));
    return rep;
}

Complex solved_seed(const OperatorParams& p, int M) {
    const auto br = open_branch(p);
    return silently([&] { return xi_to_zeta(predict_xi_solved(br.d, br.c, M), br.d); });
}

double predicted_spacing(const OperatorParams& p, int M) {
    return std::abs(solved_seed(p, M + 1) - solved_seed(p, M));
}

std::vector<EigenvalueRecord> scan(const OperatorParams& p, int M_from, int M_to, const ShootingConfig& cfg,
                                   const ScanOptions& opts) {
    open_branch(p);
    if (M_from < 1) throw ValidationError("scan: M_from must be at least 1");
    if (M_to < M_from) return {};

    const int n = M_to - M_from + 1;
    std::vector<EigenvalueRecord> out(n);
    std::atomic<int> next{0};

    auto work = [&] {
        for (int i = next++; i < n; i = next++) {
            const int M = M_from + i;
            const Complex seed = solved_seed(p, M);
            EigenvalueRecord rec = refine(seed, p, cfg, opts.tol, M);
            if (rec.certified() && opts.winding_check) {
                const double radius = std::min(0.1 * predicted_spacing(p, M), 0.5);
                try {
                    const auto w = winding_number(rec.zeta_refined, radius, p, cfg, opts.winding_samples);
                    rec.winding = w.winding;
                    if (w.winding != 1) {
                        rec.status = RecordStatus::WindingMismatch;
                        rec.message = "winding " + std::to_string(w.winding) + " around refined eigenvalue";
                    }
                } catch (const NumericError& e) {
                    rec.status = RecordStatus::NumericFailure;
                    rec.message = e.what();
                }
            }
            out[i] = std::move(rec);
        }
    };

    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(n));
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    }
    return out;
}

}  // namespace ahspec
