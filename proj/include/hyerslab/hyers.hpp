#pragma once

#include "hyerslab/linmap.hpp"

namespace hyerslab {

enum class Direction { ascending, descending };

std::string to_string(Direction d);
Direction direction_from_string(const std::string& s);

// ============================================================================
// ControlFunction: admissible control phi : A^3 -> R+, with the weighted
// doubling series phi~ that bounds ||f - d||.
// ============================================================================

struct ControlFunction {
    enum class Kind { constant, power, custom };
    Kind kind = Kind::constant;
    double theta = 0;  // >= 0
    double p = 0;      // power exponent
    std::function<double(const CVector&, const CVector&, const CVector&)> custom;

    static ControlFunction constant(double theta) { return {Kind::constant, theta, 0, nullptr}; }
    static ControlFunction power(double theta, double p) { return {Kind::power, theta, p, nullptr}; }

    /// phi(a, b, c); the power kind is theta (||a||^p + ||b||^p + ||c||^p)
    /// with the 0^p = 0 convention.
    double operator()(const Algebra& alg, const CVector& a, const CVector& b,
                      const CVector& c) const;
};

/// Which argument/coefficient scaling the series uses. proof_scaling is the
/// form every bound in this project rests on; as_printed is an alternative
/// weighting kept only for side-by-side comparison runs.
enum class SeriesVariant { proof_scaling, as_printed };

struct TildePhiResult {
    double value = 0;       // closed form when available, else the settled partial sum
    bool converged = false;
    int terms_used = 0;
    double partial_sum = 0;
    double closed_form = std::numeric_limits<double>::quiet_NaN();
    double closed_form_rel_gap = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> trajectory;  // partial sums; retained when divergent
};

/// Ascending:  (1/2) sum_{i>=0} 2^-i phi(2^i a, 2^i b, 2^i c)
/// Descending: (1/2) sum_{i>=1} 2^i  phi(2^-i a, 2^-i b, 2^-i c)
/// Power and constant kinds take a closed-form fast path, cross-checked
/// against the partial sums; non-summable inputs come back converged=false
/// (power p = 1 diverges in both directions).
TildePhiResult tilde_phi(const ControlFunction& phi, const Algebra& alg, const CVector& a,
                         const CVector& b, const CVector& c, Direction direction,
                         int n_terms = 10000, SeriesVariant variant = SeriesVariant::proof_scaling);

/// tilde_phi that throws DivergentSeries instead of returning a flag.
double tilde_phi_value(const ControlFunction& phi, const Algebra& alg, const CVector& a,
                       const CVector& b, const CVector& c, Direction direction);

// ============================================================================
// Direct-method limit construction: d(a) = lim 2^-n f(2^n a)  (ascending)
// or lim 2^n f(2^-n a) (descending), assembled on the basis.
// ============================================================================

enum class HyersStatus { converged, no_convergence, overflow };

std::string to_string(HyersStatus s);

struct HyersOptions {
    Direction direction = Direction::ascending;
    int n_max = 40;     // in [1, 50]; 2^40 scaling stays exact in binary floating point
    double tol = 1e-8;  // movement threshold, relative to 1 + iterate norm
    const ControlFunction* control = nullptr;  // optional: tracks the tail bound
    bool check_linearity = true;
    double linearity_tol = kLinearityTol;
    int linearity_samples = 48;
    int torus_grid = 8;
    uint64_t seed = 1234567;
    double overflow_limit = 1e280;
};

struct HyersResult {
    CMatrix limit;  // dim(X) x dim(A); the last iterate when not converged
    Direction direction = Direction::ascending;
    HyersStatus status = HyersStatus::no_convergence;
    int iterations_used = 0;
    /// per basis element: successive-iterate distances ||d_n - d_{n-1}||, n = 1..N
    std::vector<std::vector<double>> history;
    /// per basis element: control tail bound for each step (empty without control)
    std::vector<std::vector<double>> bound_history;
    /// max over basis elements and pairs m < n of
    /// ||d_n - d_m|| minus the control tail bound; NaN without control
    double cauchy_bound_check = std::numeric_limits<double>::quiet_NaN();
    bool linearized = false;  // the limit passed the C-linearity check
    LinearityReport linearity;
    /// max over samples of || pointwise limit(x) - limit_matrix x ||
    double matrix_agreement = 0;

    bool ok() const { return status == HyersStatus::converged; }
};

/// Iterates the scaled images of the basis elements until every column moves
/// less than tol * (1 + ||iterate||), then assembles the limit matrix and
/// checks C-linearity of the pointwise limit function.
/// Preconditions: f(0) = 0, n_max in [1, 50], tol > 0.
HyersResult hyers_limit(const MapUnderTest& f, const HyersOptions& opts = {});

/// Identical machinery applied to the auxiliary map g; the result is the
/// candidate Jordan derivation.
HyersResult extract_delta(const MapUnderTest& g, const HyersOptions& opts = {});

/// Scaled-iterate limit at a single point, same schedule as hyers_limit.
CVector hyers_pointwise(const MapUnderTest& f, const CVector& x, Direction direction, int n_max,
                        double tol, bool* converged = nullptr);

}  // namespace hyerslab
