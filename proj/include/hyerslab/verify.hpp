#pragma once

#include "hyerslab/hyers.hpp"
#include "hyerslab/identities.hpp"

namespace hyerslab {

// ============================================================================
// Defect functionals: codomain norm of the left-hand side of each hypothesis
// inequality, evaluated at concrete arguments. |lambda| = 1 required.
// ============================================================================

/// || f(a + lambda b + c^2) - f(a) - lambda f(b) - c.f(c) - g(c).c ||
/// (lambda does NOT multiply a in this form)
double defect_superstab(const MapUnderTest& f, const MapUnderTest& g, const CVector& a,
                        const CVector& b, const CVector& c, cx lambda);

/// || f(lambda a + lambda b + c^2) - lambda f(a) - lambda f(b) - c.f(c) - g(c).c ||
double defect_stab_main(const MapUnderTest& f, const MapUnderTest& g, const CVector& a,
                        const CVector& b, const CVector& c, cx lambda);

/// || g(lambda ab + lambda c) - lambda a.g(b) - lambda g(a).b - lambda g(c) ||
double defect_aux(const MapUnderTest& g, const CVector& a, const CVector& b, const CVector& c,
                  cx lambda);

/// || f(a+b) - f(a) - f(b) ||
double defect_additive(const MapUnderTest& f, const CVector& a, const CVector& b);

// ============================================================================
// Sampled defect sweeps
// ============================================================================

struct DefectReport {
    std::string which;  // superstability_main | stability_main | auxiliary |
                        // additive | jordan | generalized_jordan
    double max_defect = 0;
    CVector witness_a, witness_b, witness_c;
    cx witness_lambda{1, 0};
    int samples_used = 0;
    bool normalized = false;  // structure sweeps divide by 1 + ||a||^2
};

struct SweepOptions {
    int samples = 1000;
    uint64_t seed = 5;
    double norm_lo = 1e-2, norm_hi = 1e2;
    bool zero_c = false;  // c = 0: exactly the instances the ||f - d|| bound consumes
    int torus_grid = 8;
};

DefectReport sweep_main_defect(const MapUnderTest& f, const MapUnderTest& g,
                               const SweepOptions& opts, bool superstab_form = false);
DefectReport sweep_aux_defect(const MapUnderTest& g, const SweepOptions& opts);

/// max over samples of jordan_defect(delta, a) / (1 + ||a||^2)
DefectReport sweep_jordan_defect(const LinearMap& delta, const Algebra& a_alg, const Bimodule& x,
                                 const SweepOptions& opts);
/// max over samples of gjd_defect(d, delta, a) / (1 + ||a||^2)
DefectReport sweep_gjd_defect(const LinearMap& d, const LinearMap& delta, const Algebra& a_alg,
                              const Bimodule& x, const SweepOptions& opts);

/// Least theta making the power envelope theta (||a||^p + ||b||^p) dominate the
/// sampled main defect at c = 0 (and the three-term envelope dominate the
/// auxiliary defect). Measured rather than assumed: hash noise satisfies
/// envelopes only up to constants.
struct MeasuredTheta {
    double main = 0;  // envelope constant for the f-inequality
    double aux = 0;   // envelope constant for the g-inequality
};
MeasuredTheta measured_power_theta(const MapUnderTest& f, const MapUnderTest& g, double p,
                                   const SweepOptions& opts);

// ============================================================================
// Bound verification: ratio of ||f(a) - d(a)|| to the control series at
// (a, a, 0), sampled over a norm range.
// ============================================================================

struct BoundReport {
    std::string bound_kind;  // constant | power_p_lt_1 | power_p_gt_1 | control_series
    double max_ratio = 0;
    int violations = 0;  // ratio > 1 + slack
    int samples_used = 0;
    CVector witness_a;
    double witness_deviation = 0;  // ||f(a) - d(a)|| at the max-ratio sample
    double witness_bound = 0;      // series value there
    bool passed() const { return violations == 0; }
};

struct BoundOptions {
    Direction direction = Direction::ascending;
    int n_samples = 10000;
    uint64_t seed = 17;
    double norm_lo = 1e-2, norm_hi = 1e2;
    double slack = 1e-9;
};

/// Throws DivergentSeries when the control does not sum in this direction.
BoundReport verify_bound(const MapUnderTest& f, const LinearMap& d, const ControlFunction& phi,
                         const BoundOptions& opts);

// ============================================================================
// Decay-rate law of the scaled square-identity defect
//   D_n(c) = || 4^-n f(4^n c^2) - 2^-n c.f(2^n c) - 2^-n g(2^n c).c ||
// (arguments mirrored for the descending variant). For an exact pair this is
// zero; with envelope noise it decays geometrically, and the log2 slope over
// n identifies the envelope exponent.
// ============================================================================

struct DecaySlope {
    double slope = 0;
    double intercept = 0;
    std::vector<double> log2_mean_defect;  // index n - n_lo
    int n_lo = 0, n_hi = 0;
    int c_samples = 0;
};

DecaySlope scaled_defect_slope(const MapUnderTest& f, const MapUnderTest& g, Direction direction,
                               int n_lo, int n_hi, int c_samples, uint64_t seed,
                               double c_norm_lo = 0.5, double c_norm_hi = 2.0);

}  // namespace hyerslab
