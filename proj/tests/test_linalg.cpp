#include <doctest.h>

#include "hyerslab/rng.hpp"
#include "hyerslab/svd.hpp"

using namespace hyerslab;

namespace {

CMatrix random_matrix(int rows, int cols, uint64_t seed) {
    Rng rng(seed);
    CMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = rng.gaussian_complex();
    return m;
}

// Independent largest-singular-value oracle: power iteration on A^H A.
double sigma_max_power_iteration(const CMatrix& a, int iters = 2000) {
    CMatrix g = a.adjoint() * a;
    CVector v(g.cols());
    for (int i = 0; i < g.cols(); ++i) v[i] = cx(1.0 / (1.0 + i), 0.3 * i + 0.1);
    for (int k = 0; k < iters; ++k) {
        CVector w = g.apply(v);
        double n = vnorm2(w);
        if (n == 0) return 0;
        v = vscale(cx(1.0 / n, 0), w);
    }
    double lambda = std::real(vdot(v, g.apply(v)));
    return std::sqrt(std::max(0.0, lambda));
}

// Random unitary via Gram-Schmidt on a Gaussian matrix (test-local, so the
// synthetic-SVD check does not lean on the code under test).
CMatrix random_unitary(int n, uint64_t seed) {
    CMatrix m = random_matrix(n, n, seed);
    for (int c = 0; c < n; ++c) {
        CVector col = m.column(c);
        for (int prev = 0; prev < c; ++prev) {
            CVector u = m.column(prev);
            vaxpy(col, -vdot(u, col), u);
        }
        double nn = vnorm2(col);
        m.set_column(c, vscale(cx(1.0 / nn, 0), col));
    }
    return m;
}

}  // namespace

TEST_CASE("svd of diagonal and nilpotent 2x2") {
    CMatrix d(2, 2);
    d(0, 0) = cx(3, 0);
    d(1, 1) = cx(-2, 0);
    Svd s = svd(d);
    CHECK(s.sigma[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(s.sigma[1] == doctest::Approx(2.0).epsilon(1e-14));

    CMatrix n(2, 2);
    n(0, 1) = cx(0, 1);
    s = svd(n);
    CHECK(s.sigma[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.sigma[1] == doctest::Approx(0.0));
}

TEST_CASE("svd of [[1, i], [0, 1]] has golden-ratio singular values") {
    // A^H A = [[1, i], [-i, 2]] has eigenvalues (3 +- sqrt 5)/2
    CMatrix a(2, 2);
    a(0, 0) = cx(1, 0);
    a(0, 1) = cx(0, 1);
    a(1, 1) = cx(1, 0);
    Svd s = svd(a);
    double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    CHECK(s.sigma[0] == doctest::Approx(phi).epsilon(1e-14));
    CHECK(s.sigma[1] == doctest::Approx(1.0 / phi).epsilon(1e-14));
}

TEST_CASE("svd agrees with power iteration and the Frobenius identity") {
    for (uint64_t seed : {1ull, 2ull, 3ull, 40ull, 500ull}) {
        CMatrix a = random_matrix(5, 4, seed);
        Svd s = svd(a);
        CHECK(s.sigma[0] == doctest::Approx(sigma_max_power_iteration(a)).epsilon(1e-9));
        double fro2 = 0;
        for (double sig : s.sigma) fro2 += sig * sig;
        CHECK(std::sqrt(fro2) == doctest::Approx(a.frobenius()).epsilon(1e-12));
    }
}

TEST_CASE("right singular vectors are unitary and consistent") {
    CMatrix a = random_matrix(6, 4, 77);
    Svd s = svd(a, /*want_u=*/true);
    CMatrix vhv = s.v.adjoint() * s.v;
    CHECK(max_abs_diff(vhv, CMatrix::identity(4)) < 1e-13);
    // A v_j = sigma_j u_j
    for (int j = 0; j < 4; ++j) {
        CVector av = a.apply(s.v.column(j));
        CVector su = vscale(cx(s.sigma[j], 0), s.u.column(j));
        CHECK(vnorm2(vsub(av, su)) < 1e-12 * (1 + s.sigma[0]));
    }
}

TEST_CASE("null space of a synthesized rank-deficient matrix") {
    // A = U diag(2, 1, 0, 0) V^H: rank 2, kernel dimension 2
    int n = 4;
    CMatrix u = random_unitary(n, 11), v = random_unitary(n, 12);
    CMatrix sig(n, n);
    sig(0, 0) = cx(2, 0);
    sig(1, 1) = cx(1, 0);
    CMatrix a = u * sig * v.adjoint();

    NullSpace ns = null_space(a);
    CHECK(ns.rank == 2);
    REQUIRE(ns.basis.size() == 2);
    for (const CVector& k : ns.basis) {
        CHECK(vnorm2(k) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(vnorm2(a.apply(k)) < 1e-13);
    }
    CHECK(std::abs(vdot(ns.basis[0], ns.basis[1])) < 1e-12);
}

TEST_CASE("null space of the zero matrix is everything") {
    NullSpace ns = null_space(CMatrix(3, 3));
    CHECK(ns.rank == 0);
    CHECK(ns.basis.size() == 3);
}

TEST_CASE("rank ambiguity raises RankUncertain with the spectrum") {
    CMatrix a(2, 2);
    a(0, 0) = cx(1, 0);
    a(1, 1) = cx(1e-8, 0);  // relative value sits inside the uncertainty window
    CHECK_THROWS_AS(null_space(a), RankUncertain);
    try {
        null_space(a);
    } catch (const RankUncertain& e) {
        REQUIRE(e.spectrum.size() == 2);
        CHECK(e.spectrum[0] == doctest::Approx(1.0));
        CHECK(e.spectrum[1] == doctest::Approx(1e-8).epsilon(1e-10));
    }
    // outside the window the decision is clean
    a(1, 1) = cx(1e-12, 0);
    NullSpace ns = null_space(a);
    CHECK(ns.rank == 1);
    CHECK(ns.basis.size() == 1);
}

TEST_CASE("least squares solves consistent systems and projects inconsistent ones") {
    CMatrix a = random_matrix(5, 3, 21);
    CVector x_true = {cx(1, 2), cx(-0.5, 0), cx(0, 3)};
    CVector b = a.apply(x_true);
    CVector x = least_squares(a, b);
    CHECK(vnorm2(vsub(x, x_true)) < 1e-11);

    // residual of an inconsistent system is orthogonal to the column span
    CVector b2 = b;
    b2[0] += cx(1, 1);
    CVector x2 = least_squares(a, b2);
    CVector r = vsub(a.apply(x2), b2);
    for (int c = 0; c < 3; ++c) CHECK(std::abs(vdot(a.column(c), r)) < 1e-11);
}

TEST_CASE("orthonormal span and projection residual") {
    CVector v1 = {cx(1, 0), cx(0, 0), cx(0, 0)};
    CVector v2 = {cx(1, 0), cx(1, 0), cx(0, 0)};
    CVector dup = {cx(2, 0), cx(2, 0), cx(0, 0)};  // dependent
    auto onb = orthonormal_span({v1, v2, dup});
    CHECK(onb.size() == 2);
    CHECK(projection_residual(onb, v2) < 1e-13);
    CVector out = {cx(0, 0), cx(0, 0), cx(4, 0)};
    CHECK(projection_residual(onb, out) == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("phase canonicalization pins the largest entry real positive") {
    CVector v = {cx(0, -2), cx(1, 0)};
    canonicalize_phase(v);
    CHECK(v[0].real() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(std::abs(v[0].imag()) < 1e-15);
    CHECK(vnorm2(v) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
}
