#pragma once

#include "hyerslab/matrix.hpp"

namespace hyerslab {

// One-sided Jacobi SVD for small dense complex matrices. Chosen over an
// eigensolve of A^H A because tiny singular values keep high relative
// accuracy, which the rank decisions below depend on.

struct Svd {
    std::vector<double> sigma;  // descending
    CMatrix v;                  // n x n unitary, columns are right singular vectors
    CMatrix u;                  // m x n, column j = A v_j / sigma_j (zero where sigma_j = 0)
};

Svd svd(const CMatrix& a, bool want_u = false);

/// Largest singular value (operator 2-norm).
double sigma_max(const CMatrix& a);

struct NullSpace {
    std::vector<CVector> basis;    // orthonormal; deterministic phase convention
    std::vector<double> spectrum;  // all singular values, descending
    int rank = 0;
};

/// Null space of a at relative threshold rel_tol * sigma_max.
/// If enforce_certain and any sigma/sigma_max falls inside
/// [uncertain_lo, uncertain_hi], throws RankUncertain with the spectrum.
NullSpace null_space(const CMatrix& a, double rel_tol = 1e-8, double uncertain_lo = 1e-10,
                     double uncertain_hi = 1e-6, bool enforce_certain = true);

/// Orthonormal basis of span{vectors}, relative rank threshold rel_tol.
std::vector<CVector> orthonormal_span(const std::vector<CVector>& vectors, double rel_tol = 1e-10);

/// Euclidean distance from v to span of an orthonormal family.
double projection_residual(const std::vector<CVector>& onb, const CVector& v);

/// Minimum-norm least-squares solution of a x = b (via the SVD pseudoinverse).
CVector least_squares(const CMatrix& a, const CVector& b, double rel_tol = 1e-12);

/// Scale v so its largest-modulus entry is real positive; no-op for v = 0.
void canonicalize_phase(CVector& v);

}  // namespace hyerslab
