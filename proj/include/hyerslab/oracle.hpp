#pragma once

#include <limits>
#include <utility>

#include "hyerslab/identities.hpp"

namespace hyerslab {

// Brute-force solution spaces of derivation-type identities, computed as SVD
// null spaces of the polarized linear systems on basis pairs. These serve as
// the independent oracle for everything the iterative engine produces.

enum class SolutionKind {
    derivation,
    jordan_derivation,
    generalized_derivation_pair,
    generalized_jordan_pair,
    right_multiplier,
};

std::string to_string(SolutionKind k);
SolutionKind solution_kind_from_string(const std::string& s);

struct SolutionSpace {
    SolutionKind kind;
    int dim_a = 0, dim_x = 0;
    std::vector<LinearMap> basis;                        // single-map kinds
    std::vector<std::pair<LinearMap, LinearMap>> pairs;  // pair kinds, (d, delta)
    double residual = 0;            // max normalized identity defect over basis, random probes
    std::vector<double> spectrum;   // singular values of the defining system, descending
    /// Observation recorded per algebra for pair kinds, never assumed: largest
    /// residual of projecting d - delta onto the right multiplier span.
    double d_minus_delta_rm_residual = std::numeric_limits<double>::quiet_NaN();

    int dimension() const {
        return static_cast<int>(pairs.empty() ? basis.size() : pairs.size());
    }

    /// Flattened coordinate vector of a basis element (pair kinds concatenate
    /// vec(d) and vec(delta)).
    CVector flat(int index) const;

    /// Smallest singular value of the stacked coordinate matrix of the basis;
    /// > 1e-8 certifies linear independence.
    double independence_sigma_min() const;
};

struct SolveOptions {
    double rank_rel_tol = 1e-8;       // relative to the largest singular value
    double uncertain_lo = 1e-10;      // RankUncertain window, relative
    double uncertain_hi = 1e-6;
    int verify_probes = 64;           // random unpolarized re-checks per basis element
    uint64_t probe_seed = 99;
};

/// Null space of the polarized Jordan identity
///   delta(e_i e_j + e_j e_i) = e_i delta(e_j) + delta(e_i) e_j
///                            + e_j delta(e_i) + delta(e_j) e_i,   i <= j,
/// re-verified against the unpolarized square identity on random elements.
/// Throws RankUncertain when the spectrum has a relative value inside the
/// uncertainty window.
SolutionSpace solve_jordan_derivations(const Algebra& a, const Bimodule& x,
                                       const SolveOptions& opts = {});

/// Full derivation identity delta(e_i e_j) = e_i delta(e_j) + delta(e_i) e_j.
SolutionSpace solve_derivations(const Algebra& a, const Bimodule& x,
                                const SolveOptions& opts = {});

/// Joint null space in (d, delta): polarized generalized Jordan identity for d
/// coupled with the polarized Jordan identity for delta.
SolutionSpace solve_generalized_jordan_pairs(const Algebra& a, const Bimodule& x,
                                             const SolveOptions& opts = {});

/// Joint null space in (d, delta) of the full generalized derivation identity
/// with delta a derivation.
SolutionSpace solve_generalized_derivation_pairs(const Algebra& a, const Bimodule& x,
                                                 const SolveOptions& opts = {});

/// Span of the right multipliers a -> a.x_k over the module basis.
SolutionSpace right_multiplier_space(const Algebra& a, const Bimodule& x);

/// delta_x(a) = x a - a x  (sign convention fixed project-wide).
LinearMap inner_derivation(const Algebra& a, const Bimodule& x, const CVector& xe);
LinearMap inner_derivation(const Algebra& a, const CVector& xe);  // X = A as self module

/// a -> a.x0; a generalized (Jordan) derivation with delta = 0.
LinearMap right_multiplier(const Algebra& a, const Bimodule& x, const CVector& x0);

/// Euclidean distance of the flattened candidate to the span of the space,
/// divided by the candidate's own norm (0 for the zero candidate).
double membership_residual(const SolutionSpace& space, const LinearMap& m);
double membership_residual(const SolutionSpace& space, const LinearMap& d, const LinearMap& delta);

}  // namespace hyerslab
