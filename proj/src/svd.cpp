#include "hyerslab/svd.hpp"

#include <algorithm>
#include <numeric>

namespace hyerslab {

namespace {

// Unitary 2x2 that diagonalizes the Hermitian Gram block
//   [ alpha   gamma ]
//   [ conj(g) beta  ],  gamma = |gamma| e^{i phi}.
// Returns {c, s, phase} for the column update
//   b_p' = c b_p - s e^{-i phi} b_q
//   b_q' = s b_p + c e^{-i phi} b_q
struct JacobiRot {
    double c, s;
    cx phase_conj;  // e^{-i phi}
};

JacobiRot make_rotation(double alpha, double beta, cx gamma) {
    double g = std::abs(gamma);
    cx phase_conj = std::conj(gamma) / g;
    double tau = (beta - alpha) / (2.0 * g);
    double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    double c = 1.0 / std::sqrt(1.0 + t * t);
    return {c, t * c, phase_conj};
}

}  // namespace

Svd svd(const CMatrix& a, bool want_u) {
    const int m = a.rows();
    const int n = a.cols();

    // Rescale by an exact power of two so Gram entries cannot overflow or
    // drown in underflow; power-of-two scaling commutes with every rounding
    // below, so results for ordinary inputs are bit-identical.
    int scale_exp = 0;
    {
        double mx = a.max_abs();
        if (mx > 0 && std::isfinite(mx)) scale_exp = -std::ilogb(mx);
    }
    CMatrix b(m, n);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < n; ++c) {
            cx z = a(r, c);
            b(r, c) = cx(std::ldexp(z.real(), scale_exp), std::ldexp(z.imag(), scale_exp));
        }
    CMatrix v = CMatrix::identity(n);

    const double conv = 1e-15;
    const int max_sweeps = 64;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double alpha = 0, beta = 0;
                cx gamma = 0;
                for (int r = 0; r < m; ++r) {
                    alpha += std::norm(b(r, p));
                    beta += std::norm(b(r, q));
                    gamma += std::conj(b(r, p)) * b(r, q);
                }
                if (alpha == 0.0 || beta == 0.0) continue;
                if (std::abs(gamma) <= conv * std::sqrt(alpha) * std::sqrt(beta)) continue;

                JacobiRot rot = make_rotation(alpha, beta, gamma);
                rotated = true;
                for (int r = 0; r < m; ++r) {
                    cx bp = b(r, p), bq = b(r, q);
                    cx bq_ph = rot.phase_conj * bq;
                    b(r, p) = rot.c * bp - rot.s * bq_ph;
                    b(r, q) = rot.s * bp + rot.c * bq_ph;
                }
                for (int r = 0; r < n; ++r) {
                    cx vp = v(r, p), vq = v(r, q);
                    cx vq_ph = rot.phase_conj * vq;
                    v(r, p) = rot.c * vp - rot.s * vq_ph;
                    v(r, q) = rot.s * vp + rot.c * vq_ph;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sigma(n);
    for (int j = 0; j < n; ++j) {
        double s = 0;
        for (int r = 0; r < m; ++r) s += std::norm(b(r, j));
        sigma[j] = std::ldexp(std::sqrt(s), -scale_exp);  // undo the prescaling
    }

    // sort descending, stable on ties so results are reproducible
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return sigma[i] > sigma[j]; });

    Svd out;
    out.sigma.resize(n);
    out.v = CMatrix(n, n);
    if (want_u) out.u = CMatrix(m, n);
    for (int j = 0; j < n; ++j) {
        int src = order[j];
        out.sigma[j] = sigma[src];
        for (int r = 0; r < n; ++r) out.v(r, j) = v(r, src);
        if (want_u && sigma[src] > 0) {
            double unscaled = std::ldexp(sigma[src], scale_exp);
            for (int r = 0; r < m; ++r) out.u(r, j) = b(r, src) / unscaled;
        }
    }
    return out;
}

double sigma_max(const CMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    Svd s = svd(a);
    return s.sigma.empty() ? 0.0 : s.sigma.front();
}

void canonicalize_phase(CVector& v) {
    double best = 0;
    int idx = -1;
    for (size_t i = 0; i < v.size(); ++i) {
        double m = std::abs(v[i]);
        if (m > best * (1.0 + 1e-12)) {
            best = m;
            idx = static_cast<int>(i);
        }
    }
    if (idx < 0 || best == 0.0) return;
    cx ph = std::conj(v[idx]) / best;
    for (cx& z : v) z *= ph;
}

NullSpace null_space(const CMatrix& a, double rel_tol, double uncertain_lo, double uncertain_hi,
                     bool enforce_certain) {
    Svd s = svd(a);
    NullSpace ns;
    ns.spectrum = s.sigma;
    double smax = s.sigma.empty() ? 0.0 : s.sigma.front();

    if (smax <= 1e-300) {
        // zero map: everything is null
        for (int j = 0; j < a.cols(); ++j) {
            CVector col = s.v.column(j);
            canonicalize_phase(col);
            ns.basis.push_back(std::move(col));
        }
        return ns;
    }

    if (enforce_certain) {
        for (double sig : s.sigma) {
            double rel = sig / smax;
            if (rel >= uncertain_lo && rel <= uncertain_hi) throw RankUncertain(s.sigma);
        }
    }

    for (int j = 0; j < a.cols(); ++j) {
        if (s.sigma[j] > rel_tol * smax) {
            ++ns.rank;
        } else {
            CVector col = s.v.column(j);
            canonicalize_phase(col);
            ns.basis.push_back(std::move(col));
        }
    }
    // smallest singular directions first
    std::reverse(ns.basis.begin(), ns.basis.end());
    return ns;
}

std::vector<CVector> orthonormal_span(const std::vector<CVector>& vectors, double rel_tol) {
    if (vectors.empty()) return {};
    const int m = static_cast<int>(vectors.front().size());
    const int k = static_cast<int>(vectors.size());
    CMatrix a(m, k);
    for (int j = 0; j < k; ++j) a.set_column(j, vectors[j]);
    Svd s = svd(a, /*want_u=*/true);
    double smax = s.sigma.empty() ? 0.0 : s.sigma.front();
    std::vector<CVector> onb;
    for (int j = 0; j < k; ++j) {
        if (s.sigma[j] > rel_tol * smax && s.sigma[j] > 0) onb.push_back(s.u.column(j));
    }
    return onb;
}

double projection_residual(const std::vector<CVector>& onb, const CVector& v) {
    CVector r = v;
    for (const CVector& u : onb) {
        cx coef = vdot(u, r);
        vaxpy(r, -coef, u);
    }
    return vnorm2(r);
}

CVector least_squares(const CMatrix& a, const CVector& b, double rel_tol) {
    Svd s = svd(a, /*want_u=*/true);
    double smax = s.sigma.empty() ? 0.0 : s.sigma.front();
    CVector x(a.cols(), cx(0, 0));
    for (int j = 0; j < a.cols(); ++j) {
        if (s.sigma[j] <= rel_tol * smax || s.sigma[j] == 0.0) continue;
        cx coef = vdot(s.u.column(j), b) / s.sigma[j];
        vaxpy(x, coef, s.v.column(j));
    }
    return x;
}

}  // namespace hyerslab
