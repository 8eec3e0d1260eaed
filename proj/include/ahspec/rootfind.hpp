#pragma once

// Newton refinement of predicted eigenvalues on the connection mismatch and
// argument-principle certification on circles around them.

#include <optional>
#include <string>
#include <vector>

#include "ahspec/complex.hpp"
#include "ahspec/params.hpp"
#include "ahspec/shooting.hpp"

namespace ahspec {

/// Residual |D| below which a converged Newton iterate counts as certified.
inline constexpr double kCertifyResidual = 1e-10;
/// Newton stops early once |D| reaches this level.
inline constexpr double kNewtonResidualStop = 1e-12;
inline constexpr int kMaxNewtonIterations = 25;
/// Relative step of the central difference used for dD/dzeta.
inline constexpr double kDerivativeStep = 1e-6;

enum class RecordStatus {
    Certified,
    Diverged,            ///< no convergence within the iteration cap
    LeftValidityRegion,  ///< an iterate left the sector around R+ in xi
    ResidualTooLarge,    ///< converged in zeta but |D| above kCertifyResidual
    WindingMismatch,     ///< contour check did not return winding 1
    NumericFailure,      ///< integration or winding evaluation broke down
};

std::string to_string(RecordStatus s);
RecordStatus record_status_from_string(const std::string& s);

struct EigenvalueRecord {
    int M = 0;
    Complex zeta_seed;
    Complex xi_seed;
    Complex zeta_refined;
    Complex xi_refined;
    double residual = 0.0;
    int newton_iters = 0;
    std::optional<int> winding;
    double seed_gap_paper = 0.0;  ///< |xi_refined - predict_xi_paper(M)|
    double seed_gap_solved = 0.0; ///< |xi_refined - predict_xi_solved(M)|
    Complex zeta_asymptotic;      ///< predict_zeta(M)
    double zeta_asymptotic_gap = 0.0;  ///< |zeta_refined - zeta_asymptotic| / |zeta_asymptotic|
    double x_inf = 0.0;
    RecordStatus status = RecordStatus::Diverged;
    std::string message;

    bool certified() const { return status == RecordStatus::Certified; }
};

/// Newton on D(zeta) from zeta_seed. M names the branch used for the
/// predictor gaps; when 0 it is inferred from the refined xi.
EigenvalueRecord refine(Complex zeta_seed, const OperatorParams& p, const ShootingConfig& cfg, double tol = 1e-12,
                        int M = 0);

struct WindingReport {
    Complex center;
    double radius = 0.0;
    int samples = 0;
    int winding = 0;
    double min_abs_on_contour = 0.0;
};

inline constexpr int kMinWindingSamples = 64;
inline constexpr int kMaxWindingSamples = 8192;
/// Contours closer than this (in |D|) to a zero are rejected.
inline constexpr double kWindingMinAbs = 1e-10;

/// Winding number of D around the circle |zeta - center| = radius. Samples are
/// bisected locally until every argument increment is below pi/2.
WindingReport winding_number(Complex center, double radius, const OperatorParams& p, const ShootingConfig& cfg,
                             int samples = kMinWindingSamples);

struct ScanOptions {
    double tol = 1e-12;
    bool winding_check = true;
    int winding_samples = kMinWindingSamples;
    unsigned threads = 0;  ///< 0 selects the hardware concurrency
};

/// Distance between consecutive solved seeds in the zeta plane at index M.
double predicted_spacing(const OperatorParams& p, int M);
/// Seed for index M: xi_to_zeta(predict_xi_solved(M)).
Complex solved_seed(const OperatorParams& p, int M);

/// Refines and certifies M_from..M_to; failures are recorded per row.
std::vector<EigenvalueRecord> scan(const OperatorParams& p, int M_from, int M_to, const ShootingConfig& cfg,
                                   const ScanOptions& opts = {});

}  // namespace ahspec
