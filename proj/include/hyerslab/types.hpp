#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyerslab {

using cx = std::complex<double>;
using CVector = std::vector<cx>;

// ============================================================================
// Errors
// ============================================================================

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct MissingUnit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AssociativityViolation : std::runtime_error {
    int i, j, l;
    double residual;
    AssociativityViolation(int i_, int j_, int l_, double r)
        : std::runtime_error("associativity violated at basis triple (" + std::to_string(i_) +
                             "," + std::to_string(j_) + "," + std::to_string(l_) +
                             "), residual " + std::to_string(r)),
          i(i_), j(j_), l(l_), residual(r) {}
};

struct InvalidModel : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct RankUncertain : std::runtime_error {
    std::vector<double> spectrum;  // full singular spectrum, descending
    explicit RankUncertain(std::vector<double> s)
        : std::runtime_error("numerical rank ambiguous: relative singular value inside the uncertainty window"),
          spectrum(std::move(s)) {}
};

struct DivergentSeries : std::runtime_error {
    std::vector<double> partial_sums;
    explicit DivergentSeries(std::vector<double> traj)
        : std::runtime_error("control series does not converge"), partial_sums(std::move(traj)) {}
};

// ============================================================================
// Coordinate-vector helpers (Euclidean level; algebra norms live elsewhere)
// ============================================================================

inline CVector vadd(const CVector& a, const CVector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vadd: size mismatch");
    CVector r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline CVector vsub(const CVector& a, const CVector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vsub: size mismatch");
    CVector r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline CVector vscale(cx s, const CVector& a) {
    CVector r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

/// y += s*x
inline void vaxpy(CVector& y, cx s, const CVector& x) {
    if (y.size() != x.size()) throw DimensionMismatch("vaxpy: size mismatch");
    for (size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

inline double vnorm2(const CVector& a) {
    double s = 0;
    for (const cx& z : a) s += std::norm(z);
    return std::sqrt(s);
}

/// <a, b> with conjugation on the first argument.
inline cx vdot(const CVector& a, const CVector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vdot: size mismatch");
    cx s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline bool vis_zero(const CVector& a) {
    for (const cx& z : a) {
        if (z.real() != 0.0 || z.imag() != 0.0) return false;
    }
    return true;
}

inline CVector basis_vector(int dim, int i) {
    CVector e(dim, cx(0, 0));
    e[i] = cx(1, 0);
    return e;
}

/// Exact scaling by 2^k, componentwise.
inline CVector vldexp(const CVector& a, int k) {
    CVector r(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        r[i] = cx(std::ldexp(a[i].real(), k), std::ldexp(a[i].imag(), k));
    return r;
}

}  // namespace hyerslab
