#include <doctest.h>

#include <cmath>

#include "hyerslab/hyers.hpp"
#include "hyerslab/oracle.hpp"

using namespace hyerslab;

namespace {

struct Spaces {
    std::shared_ptr<const Algebra> alg;
    std::shared_ptr<const Bimodule> mod;
};

Spaces self_spaces(Algebra a) {
    auto alg = std::make_shared<const Algebra>(std::move(a));
    auto mod = std::make_shared<const Bimodule>(Bimodule::self_module(alg));
    return {alg, mod};
}

// an oracle pair to perturb in engine tests
std::pair<LinearMap, LinearMap> m2_pair(const Spaces& s, int index) {
    SolutionSpace pairs = solve_generalized_jordan_pairs(*s.alg, *s.mod);
    return pairs.pairs[static_cast<size_t>(index)];
}

}  // namespace

TEST_CASE("control function: power kind with the 0^p = 0 convention") {
    Spaces s = self_spaces(matrix_algebra(1));
    ControlFunction phi = ControlFunction::power(2.0, 0.0);
    CVector zero{cx(0, 0)}, one{cx(1, 0)};
    CHECK(phi(*s.alg, zero, zero, zero) == 0.0);           // all terms use 0^0 = 0
    CHECK(phi(*s.alg, one, one, zero) == 4.0);             // 2 (1 + 1 + 0)
    CHECK(phi(*s.alg, one, one, one) == 6.0);
}

TEST_CASE("constant control sums to exactly theta (ascending)") {
    Spaces s = self_spaces(matrix_algebra(1));
    CVector a{cx(3, 1)}, zero{cx(0, 0)};
    const double theta = 0.37;
    TildePhiResult r = tilde_phi(ControlFunction::constant(theta), *s.alg, a, a, zero,
                                 Direction::ascending);
    CHECK(r.converged);
    CHECK(r.value == theta);
    CHECK(r.closed_form_rel_gap <= 1e-9);

    // descending direction cannot sum a constant
    TildePhiResult d = tilde_phi(ControlFunction::constant(theta), *s.alg, a, a, zero,
                                 Direction::descending);
    CHECK(!d.converged);
    CHECK(!d.trajectory.empty());
    CHECK_THROWS_AS(
        tilde_phi_value(ControlFunction::constant(theta), *s.alg, a, a, zero,
                        Direction::descending),
        DivergentSeries);
}

TEST_CASE("power control, ascending, theta=1 p=1/2 at unit norm: 2 + sqrt 2") {
    Spaces s = self_spaces(matrix_algebra(1));
    CVector a{cx(1, 0)}, zero{cx(0, 0)};
    TildePhiResult r =
        tilde_phi(ControlFunction::power(1.0, 0.5), *s.alg, a, a, zero, Direction::ascending);
    CHECK(r.converged);
    // geometric sum: value = 1 / (1 - 2^{-1/2}) = 2 + sqrt 2
    CHECK(r.value == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
    CHECK(r.value == doctest::Approx(3.414214).epsilon(1e-6));
    CHECK(r.closed_form_rel_gap <= 1e-9);  // partial sums agree with the closed form
}

TEST_CASE("power control, descending, theta=1 p=2 at unit norm: exactly 1") {
    Spaces s = self_spaces(matrix_algebra(1));
    CVector a{cx(1, 0)}, zero{cx(0, 0)};
    TildePhiResult r =
        tilde_phi(ControlFunction::power(1.0, 2.0), *s.alg, a, a, zero, Direction::descending);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.closed_form_rel_gap <= 1e-9);
}

TEST_CASE("closed forms match partial sums across exponents and norms") {
    Spaces s = self_spaces(matrix_algebra(2));
    Rng rng(9);
    CVector zero(4, cx(0, 0));
    for (double p : {0.0, 0.25, 0.5, 0.9}) {
        CVector a = sample_element(*s.alg, rng, 0.1, 10.0);
        TildePhiResult r = tilde_phi(ControlFunction::power(0.7, p), *s.alg, a, a, zero,
                                     Direction::ascending);
        CHECK(r.converged);
        double na = s.alg->norm(a);
        double expect = 0.7 * 2.0 * std::pow(na, p) / (1.0 - std::pow(2.0, p - 1.0)) / 2.0;
        CHECK(r.value == doctest::Approx(expect).epsilon(1e-12));
        CHECK(r.closed_form_rel_gap <= 1e-9);
    }
    for (double p : {1.1, 2.0, 3.0}) {
        CVector a = sample_element(*s.alg, rng, 0.1, 10.0);
        TildePhiResult r = tilde_phi(ControlFunction::power(0.7, p), *s.alg, a, a, zero,
                                     Direction::descending);
        CHECK(r.converged);
        double na = s.alg->norm(a);
        double expect = 0.7 * std::pow(na, p) / (std::pow(2.0, p - 1.0) - 1.0);
        CHECK(r.value == doctest::Approx(expect).epsilon(1e-12));
        CHECK(r.closed_form_rel_gap <= 1e-9);
    }
}

TEST_CASE("direction duality of convergence for the power kind") {
    Spaces s = self_spaces(matrix_algebra(1));
    CVector a{cx(1, 0)}, zero{cx(0, 0)};
    for (double p : {0.0, 0.5, 0.9, 1.1, 2.0, 3.0}) {
        ControlFunction phi = ControlFunction::power(1.0, p);
        bool asc = tilde_phi(phi, *s.alg, a, a, zero, Direction::ascending).converged;
        bool desc = tilde_phi(phi, *s.alg, a, a, zero, Direction::descending).converged;
        CHECK(asc == (p < 1.0));
        CHECK(desc == (p > 1.0));
    }
    // p = 1 diverges both ways
    ControlFunction phi1 = ControlFunction::power(1.0, 1.0);
    CHECK(!tilde_phi(phi1, *s.alg, a, a, zero, Direction::ascending).converged);
    CHECK(!tilde_phi(phi1, *s.alg, a, a, zero, Direction::descending).converged);
}

TEST_CASE("zero arguments give a zero series") {
    Spaces s = self_spaces(matrix_algebra(1));
    CVector zero{cx(0, 0)};
    TildePhiResult r = tilde_phi(ControlFunction::power(1.0, 1.0), *s.alg, zero, zero, zero,
                                 Direction::ascending);
    CHECK(r.converged);
    CHECK(r.value == 0.0);
}

TEST_CASE("as-printed series variant evaluates but is not the bound series") {
    Spaces s = self_spaces(matrix_algebra(1));
    CVector a{cx(2, 0)}, zero{cx(0, 0)};
    ControlFunction phi = ControlFunction::power(1.0, 0.5);
    // unscaled ascending arguments collapse to a plain geometric sum of phi
    TildePhiResult r = tilde_phi(phi, *s.alg, a, a, zero, Direction::ascending, 10000,
                                 SeriesVariant::as_printed);
    CHECK(r.converged);
    CHECK(r.partial_sum == doctest::Approx(phi(*s.alg, a, a, zero)).epsilon(1e-12));
}

TEST_CASE("custom control goes through the numeric path") {
    Spaces s = self_spaces(matrix_algebra(1));
    ControlFunction phi;
    phi.kind = ControlFunction::Kind::custom;
    phi.custom = [&](const CVector& x, const CVector&, const CVector&) {
        return std::exp(-std::abs(x[0]));
    };
    CVector a{cx(1, 0)}, zero{cx(0, 0)};
    TildePhiResult r = tilde_phi(phi, *s.alg, a, a, zero, Direction::ascending);
    CHECK(r.converged);
    CHECK(r.value > 0);
    CHECK(r.value < 1.0);
}

TEST_CASE("hyers_limit: an exactly linear map is a one-iteration fixed point") {
    Spaces s = self_spaces(matrix_algebra(2));
    auto [d0, delta0] = m2_pair(s, 0);
    MapUnderTest f(s.alg, s.mod, d0, PerturbationModel::none_model());
    HyersResult r = hyers_limit(f);
    CHECK(r.ok());
    CHECK(r.iterations_used == 1);
    CHECK(max_abs_diff(r.limit, d0.matrix()) == 0.0);
    CHECK(r.linearized);
    CHECK(r.matrix_agreement <= 1e-12);
}

TEST_CASE("hyers_limit on C: bounded noise around the identity is removed") {
    Spaces s = self_spaces(matrix_algebra(1));
    const double theta = 0.1;
    MapUnderTest f = make_perturbed(s.alg, s.mod, LinearMap::identity(1),
                                    PerturbationModel::bounded(theta, 41));
    HyersResult r = hyers_limit(f);
    CHECK(r.ok());
    CHECK(std::abs(r.limit(0, 0) - cx(1, 0)) < 1e-7);
    CHECK(r.linearized);
    // the recovered map stays within theta of f everywhere, up to the
    // truncation error of the assembled limit (which scales with ||x||)
    Rng rng(10);
    for (int t = 0; t < 1000; ++t) {
        CVector x = sample_element(*s.alg, rng, 1e-2, 1e2);
        double slack = 1e-7 * (1 + s.alg->norm(x));
        CHECK(s.mod->norm(vsub(f.apply(x), r.limit.apply(x))) <= theta + slack);
    }
}

TEST_CASE("successive distances decay like 2^{n(p-1)} for the power model") {
    Spaces s = self_spaces(matrix_algebra(2));
    MapUnderTest f = make_perturbed(s.alg, s.mod, LinearMap::zero(4, 4),
                                    PerturbationModel::power(1.0, 0.5, 47));
    HyersOptions opts;
    opts.n_max = 40;
    opts.tol = 1e-15;  // force a full run; no_convergence expected
    opts.check_linearity = false;
    HyersResult r = hyers_limit(f, opts);
    CHECK(r.status == HyersStatus::no_convergence);
    for (const auto& hist : r.history) {
        REQUIRE(hist.size() >= 30);
        // telescoped mean log2 ratio of consecutive distances
        double mean = (std::log2(hist[29]) - std::log2(hist[0])) / 29.0;
        CHECK(std::abs(mean + 0.5) <= 0.1);
    }
}

TEST_CASE("tail bound law: distances stay under the control series") {
    Spaces s = self_spaces(matrix_algebra(2));
    auto [d0, delta0] = m2_pair(s, 0);
    for (double p : {0.25, 0.5}) {
        const double theta = 1e-3;  // small enough to settle within n_max = 40
        MapUnderTest f = make_perturbed(s.alg, s.mod, d0,
                                        PerturbationModel::power(theta, p, 53));
        // 2 theta dominates the step defect (2^p + 2)/2 theta for every p < 1,
        // so this control provably bounds every pairwise distance
        ControlFunction phi = ControlFunction::power(2 * theta, p);
        HyersOptions opts;
        opts.control = &phi;
        opts.tol = 1e-8;
        opts.check_linearity = false;
        HyersResult r = hyers_limit(f, opts);
        CHECK(r.ok());
        CHECK(r.cauchy_bound_check <= 1e-9);
        REQUIRE(!r.bound_history.empty());
        REQUIRE(!r.bound_history[0].empty());
    }
}

TEST_CASE("extract_delta: exact Jordan derivation returns itself") {
    Spaces s = self_spaces(matrix_algebra(2));
    SolutionSpace jordan = solve_jordan_derivations(*s.alg, *s.mod);
    MapUnderTest g(s.alg, s.mod, jordan.basis[0], PerturbationModel::none_model());
    HyersResult r = extract_delta(g);
    CHECK(r.ok());
    CHECK(r.iterations_used == 1);
    CHECK(max_abs_diff(r.limit, jordan.basis[0].matrix()) == 0.0);
}

TEST_CASE("extract_delta recovers a Jordan derivation through bounded noise") {
    Spaces s = self_spaces(matrix_algebra(2));
    SolutionSpace jordan = solve_jordan_derivations(*s.alg, *s.mod);
    MapUnderTest g = make_perturbed(s.alg, s.mod, jordan.basis[0],
                                    PerturbationModel::bounded(0.1, 59));
    HyersOptions opts;
    opts.n_max = 40;
    opts.tol = 1e-8;
    HyersResult r = extract_delta(g, opts);
    CHECK(r.ok());
    CHECK(max_abs_diff(r.limit, jordan.basis[0].matrix()) <= 1e-6);
}

TEST_CASE("superlinear envelope diverges ascending and converges descending") {
    Spaces s = self_spaces(matrix_algebra(2));
    auto [d0, delta0] = m2_pair(s, 0);
    MapUnderTest f = make_perturbed(s.alg, s.mod, d0, PerturbationModel::power(0.05, 2.0, 61));

    HyersOptions asc;
    asc.direction = Direction::ascending;
    asc.check_linearity = false;
    CHECK(hyers_limit(f, asc).status == HyersStatus::no_convergence);

    HyersOptions desc;
    desc.direction = Direction::descending;
    HyersResult r = hyers_limit(f, desc);
    CHECK(r.ok());
    CHECK(max_abs_diff(r.limit, d0.matrix()) <= 1e-6);
    CHECK(r.linearized);
}

TEST_CASE("iterates that blow past the overflow limit are flagged") {
    Spaces s = self_spaces(matrix_algebra(1));
    MapUnderTest f = make_perturbed(s.alg, s.mod, LinearMap::identity(1),
                                    PerturbationModel::power(1.0, 20.0, 67));
    HyersOptions opts;
    opts.n_max = 50;
    opts.check_linearity = false;
    CHECK(hyers_limit(f, opts).status == HyersStatus::overflow);
}

TEST_CASE("tilde_phi preconditions") {
    Spaces s = self_spaces(matrix_algebra(1));
    CVector a{cx(1, 0)};
    CHECK_THROWS_AS(
        tilde_phi(ControlFunction::constant(1.0), *s.alg, a, a, a, Direction::ascending, 0),
        InvalidModel);
}

TEST_CASE("hyers_limit preconditions") {
    Spaces s = self_spaces(matrix_algebra(1));
    MapUnderTest f(s.alg, s.mod, LinearMap::identity(1), PerturbationModel::none_model());
    HyersOptions opts;
    opts.n_max = 0;
    CHECK_THROWS_AS(hyers_limit(f, opts), InvalidModel);
    opts.n_max = 51;
    CHECK_THROWS_AS(hyers_limit(f, opts), InvalidModel);
    opts.n_max = 40;
    opts.tol = 0;
    CHECK_THROWS_AS(hyers_limit(f, opts), InvalidModel);
}
