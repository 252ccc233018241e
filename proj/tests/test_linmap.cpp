#include <doctest.h>

#include "hyerslab/linmap.hpp"

using namespace hyerslab;

namespace {

struct Spaces {
    std::shared_ptr<const Algebra> alg;
    std::shared_ptr<const Bimodule> mod;
};

Spaces m2() {
    auto alg = std::make_shared<const Algebra>(matrix_algebra(2));
    auto mod = std::make_shared<const Bimodule>(Bimodule::self_module(alg));
    return {alg, mod};
}

Spaces scalars() {
    auto alg = std::make_shared<const Algebra>(matrix_algebra(1));
    auto mod = std::make_shared<const Bimodule>(Bimodule::self_module(alg));
    return {alg, mod};
}

}  // namespace

TEST_CASE("apply: identity, zero, dimension checks") {
    Spaces s = scalars();
    MapUnderTest ident(s.alg, s.mod, LinearMap::identity(1), PerturbationModel::none_model());
    CHECK(ident.apply({cx(3, 0)})[0] == cx(3, 0));

    MapUnderTest zero(s.alg, s.mod, LinearMap::zero(1, 1), PerturbationModel::none_model());
    CHECK(vnorm2(zero.apply({cx(5, -2)})) == doctest::Approx(0.0));

    CHECK_THROWS_AS(ident.apply(CVector{cx(1, 0), cx(2, 0)}), DimensionMismatch);
}

TEST_CASE("make_perturbed rejects negative theta, none kind is exact") {
    Spaces s = m2();
    CHECK_THROWS_AS(
        make_perturbed(s.alg, s.mod, LinearMap::identity(4), PerturbationModel::bounded(-0.1, 1)),
        InvalidModel);

    MapUnderTest f = make_perturbed(s.alg, s.mod, LinearMap::identity(4),
                                    PerturbationModel::none_model());
    Rng rng(1);
    for (int t = 0; t < 16; ++t) {
        CVector x = sample_element(*s.alg, rng, 0.1, 10);
        CHECK(vnorm2(vsub(f.apply(x), x)) == doctest::Approx(0.0));
    }
}

TEST_CASE("bounded perturbation: tight envelope and zero at zero") {
    Spaces s = m2();
    const double theta = 0.05;
    MapUnderTest f = make_perturbed(s.alg, s.mod, LinearMap::identity(4),
                                    PerturbationModel::bounded(theta, 11));
    CHECK(vnorm2(f.eta(CVector(4, cx(0, 0)))) == doctest::Approx(0.0));

    Rng rng(2);
    double worst = 0;
    for (int t = 0; t < 1000; ++t) {
        CVector x = sample_element(*s.alg, rng, 1e-2, 1e2);
        double n = s.mod->norm(f.eta(x));
        CHECK(n <= theta * (1 + 1e-10));
        worst = std::max(worst, n);
    }
    // tight by construction: the direction is unit norm, so the envelope is met
    CHECK(worst > 0.04);
}

TEST_CASE("power perturbation respects the envelope across six decades") {
    Spaces s = m2();
    const double theta = 1.0, p = 0.5;
    MapUnderTest f = make_perturbed(s.alg, s.mod, LinearMap::identity(4),
                                    PerturbationModel::power(theta, p, 19));
    Rng rng(3);
    for (int t = 0; t < 500; ++t) {
        CVector x = sample_element(*s.alg, rng, 1e-3, 1e3);
        double n = s.mod->norm(vsub(f.apply(x), x));
        CHECK(n <= theta * std::pow(s.alg->norm(x), p) * (1 + 1e-10));
    }
}

TEST_CASE("power perturbation scaling law over doubling") {
    Spaces s = m2();
    const double theta = 0.7, p = 0.5;
    MapUnderTest f = make_perturbed(s.alg, s.mod, LinearMap::zero(4, 4),
                                    PerturbationModel::power(theta, p, 23));
    Rng rng(4);
    for (int t = 0; t < 20; ++t) {
        CVector x = sample_element(*s.alg, rng, 0.5, 2.0);
        double nx = s.alg->norm(x);
        for (int n = 0; n <= 20; ++n) {
            double bound = theta * std::pow(2.0, n * p) * std::pow(nx, p);
            CHECK(s.mod->norm(f.eta(vldexp(x, n))) <= bound * (1 + 1e-10));
        }
    }
}

TEST_CASE("evaluation is deterministic bit for bit") {
    Spaces s = m2();
    MapUnderTest f = make_perturbed(s.alg, s.mod, LinearMap::identity(4),
                                    PerturbationModel::bounded(0.3, 7));
    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
        CVector x = sample_element(*s.alg, rng, 0.1, 10);
        CVector y1 = f.apply(x), y2 = f.apply(x);
        for (size_t i = 0; i < y1.size(); ++i) {
            CHECK(y1[i].real() == y2[i].real());
            CHECK(y1[i].imag() == y2[i].imag());
        }
    }
    // different seeds give different directions
    MapUnderTest f2 = make_perturbed(s.alg, s.mod, LinearMap::identity(4),
                                     PerturbationModel::bounded(0.3, 8));
    CVector x = sample_element(*s.alg, rng, 1, 1);
    CHECK(vnorm2(vsub(f.eta(x), f2.eta(x))) > 1e-6);
}

TEST_CASE("torus sampler: exact quarter points, unit modulus, grid roots") {
    TorusSampler ts(8, 99);
    CHECK(ts.at(0) == cx(1, 0));
    CHECK(ts.at(1) == cx(-1, 0));
    CHECK(ts.at(2) == cx(0, 1));
    CHECK(ts.at(3) == cx(0, -1));
    for (size_t k = 0; k < 200; ++k)
        CHECK(std::abs(std::abs(ts.at(k)) - 1.0) <= 1e-15);
    // grid portion walks the 8th roots of unity
    for (int k = 0; k < 8; ++k) {
        double t = 2 * 3.14159265358979323846 * k / 8;
        CHECK(std::abs(ts.at(4 + k) - cx(std::cos(t), std::sin(t))) < 1e-12);
    }
    CHECK_THROWS_AS(TorusSampler(0, 1), InvalidModel);
}

TEST_CASE("c_linearity_report: a LinearMap always gets a positive verdict") {
    Spaces s = m2();
    Rng seed_rng(6);
    CMatrix m(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = seed_rng.gaussian_complex();
    MapUnderTest lin(s.alg, s.mod, LinearMap(m), PerturbationModel::none_model());
    LinearityReport rep = c_linearity_report(lin, TorusSampler(8, 1), 200);
    CHECK(rep.linear);
    CHECK(rep.max_additive_defect <= 1e-12);
    CHECK(rep.max_homogeneity_defect <= 1e-12);
    CHECK(rep.alpha_residual <= 1e-9);
}

TEST_CASE("complex conjugation on C fails homogeneity with defect 2 at lambda = i") {
    Spaces s = scalars();
    PerturbationModel conj_model;
    conj_model.kind = PerturbationKind::custom;
    conj_model.custom = [](const CVector& x) {
        return CVector{std::conj(x[0]) - x[0]};  // identity + this = conjugation
    };
    MapUnderTest conj(s.alg, s.mod, LinearMap::identity(1), conj_model);

    // pointwise value: ||conj(i * 1) - i * conj(1)|| = ||-i - i|| = 2
    CVector one{cx(1, 0)};
    CVector defect = vsub(conj.apply(vscale(cx(0, 1), one)),
                          vscale(cx(0, 1), conj.apply(one)));
    CHECK(s.mod->norm(defect) == doctest::Approx(2.0).epsilon(1e-14));

    LinearityReport rep = c_linearity_report(conj, TorusSampler(8, 2), 100);
    CHECK(!rep.linear);
    CHECK(rep.max_additive_defect <= 1e-12);    // conjugation is additive
    CHECK(rep.max_homogeneity_defect > 0.5);    // but not torus-homogeneous
}

TEST_CASE("identity plus bounded noise: additive defect at most 3 theta") {
    Spaces s = m2();
    const double theta = 0.05;
    MapUnderTest f = make_perturbed(s.alg, s.mod, LinearMap::identity(4),
                                    PerturbationModel::bounded(theta, 31));
    LinearityReport rep = c_linearity_report(f, TorusSampler(8, 3), 500);
    CHECK(rep.max_additive_defect <= 3 * theta * (1 + 1e-12));
    CHECK(!rep.linear);
    Rng rng(7);
    for (int t = 0; t < 500; ++t) {
        CVector x = sample_element(*s.alg, rng, 0.1, 10);
        CVector y = sample_element(*s.alg, rng, 0.1, 10);
        CVector d = vsub(f.apply(vadd(x, y)), vadd(f.apply(x), f.apply(y)));
        CHECK(s.mod->norm(d) <= 3 * theta * (1 + 1e-12));
    }
}
