#include "hyerslab/linmap.hpp"

#include <cmath>

namespace hyerslab {

std::string to_string(PerturbationKind k) {
    switch (k) {
        case PerturbationKind::none: return "none";
        case PerturbationKind::bounded: return "bounded";
        case PerturbationKind::power: return "power";
        case PerturbationKind::custom: return "custom";
    }
    return "none";
}

PerturbationKind perturbation_kind_from_string(const std::string& s) {
    if (s == "none") return PerturbationKind::none;
    if (s == "bounded") return PerturbationKind::bounded;
    if (s == "power") return PerturbationKind::power;
    if (s == "custom") return PerturbationKind::custom;
    throw InvalidModel("unknown perturbation kind: " + s);
}

// ============================================================================
// MapUnderTest
// ============================================================================

MapUnderTest::MapUnderTest(std::shared_ptr<const Algebra> domain,
                           std::shared_ptr<const Bimodule> codomain, LinearMap base,
                           PerturbationModel model)
    : domain_(std::move(domain)),
      codomain_(std::move(codomain)),
      base_(std::move(base)),
      model_(std::move(model)) {
    if (base_.domain_dim() != domain_->dim() || base_.codomain_dim() != codomain_->dim())
        throw DimensionMismatch("MapUnderTest: base matrix shape does not match the spaces");
}

MapUnderTest make_perturbed(std::shared_ptr<const Algebra> domain,
                            std::shared_ptr<const Bimodule> codomain, LinearMap base,
                            PerturbationModel model) {
    if (model.theta < 0) throw InvalidModel("perturbation theta must be nonnegative");
    if (model.kind == PerturbationKind::custom && !model.custom)
        throw InvalidModel("custom perturbation needs an evaluator");
    return MapUnderTest(std::move(domain), std::move(codomain), std::move(base), std::move(model));
}

namespace {

// Coordinates are quantized to multiples of 2^-40 before hashing, so the
// direction depends only on the quantized value, not on sub-quantum noise.
uint64_t hash_quantized(const CVector& x, uint64_t seed) {
    uint64_t h = hash_combine(0x7f4a7c15u, seed);
    for (const cx& z : x) {
        double qr = std::nearbyint(z.real() * 0x1p40) * 0x1p-40;
        double qi = std::nearbyint(z.imag() * 0x1p40) * 0x1p-40;
        h = hash_combine(h, double_bits(qr));
        h = hash_combine(h, double_bits(qi));
    }
    return h;
}

// Unit-norm direction in X from the hash of x.
CVector hashed_direction(const CVector& x, uint64_t seed, const Bimodule& codomain) {
    for (uint64_t salt = 0;; ++salt) {
        Rng rng(hash_combine(hash_quantized(x, seed), salt));
        CVector w(codomain.dim());
        for (int i = 0; i < codomain.dim(); ++i) w[i] = rng.gaussian_complex();
        double n = codomain.norm(w);
        if (n > 1e-12) return vscale(cx(1.0 / n, 0), w);
    }
}

}  // namespace

CVector MapUnderTest::eta(const CVector& x) const {
    const int dx = codomain_->dim();
    if (model_.kind == PerturbationKind::none) return CVector(dx, cx(0, 0));
    if (vis_zero(x)) return CVector(dx, cx(0, 0));
    if (model_.kind == PerturbationKind::custom) return model_.custom(x);

    double magnitude = model_.theta;
    if (model_.kind == PerturbationKind::power)
        magnitude = model_.theta * pow_zero(domain_->norm(x), model_.p);
    if (magnitude == 0.0) return CVector(dx, cx(0, 0));
    CVector u = hashed_direction(x, model_.direction_seed, *codomain_);
    return vscale(cx(magnitude, 0), u);
}

CVector MapUnderTest::apply(const CVector& x) const {
    CVector y = base_.apply(x);
    if (model_.kind == PerturbationKind::none) return y;
    CVector e = eta(x);
    for (size_t i = 0; i < y.size(); ++i) y[i] += e[i];
    return y;
}

// ============================================================================
// TorusSampler
// ============================================================================

TorusSampler::TorusSampler(int grid_size, uint64_t seed) : grid_(grid_size), seed_(seed) {
    if (grid_ < 1) throw InvalidModel("torus grid size must be >= 1");
}

cx TorusSampler::at(size_t index) const {
    static const cx quarter[4] = {cx(1, 0), cx(-1, 0), cx(0, 1), cx(0, -1)};
    if (index < 4) return quarter[index];
    if (index < 4 + static_cast<size_t>(grid_)) {
        size_t k = index - 4;
        double t = 6.283185307179586476925286766559 * static_cast<double>(k) / grid_;
        return cx(std::cos(t), std::sin(t));
    }
    Rng rng = Rng::substream(seed_, index);
    double t = 6.283185307179586476925286766559 * rng.uniform();
    return cx(std::cos(t), std::sin(t));
}

// ============================================================================
// C-linearity report
// ============================================================================

LinearityReport c_linearity_report(const std::function<CVector(const CVector&)>& m,
                                   const Algebra& domain, const Bimodule& codomain,
                                   const TorusSampler& sampler, int n_samples, double tol,
                                   uint64_t seed, double norm_lo, double norm_hi) {
    if (n_samples < 1) throw InvalidModel("c_linearity_report needs n_samples >= 1");
    LinearityReport rep;
    rep.tol = tol;
    rep.samples = n_samples;
    for (int s = 0; s < n_samples; ++s) {
        Rng rng = Rng::substream(seed, static_cast<uint64_t>(s));
        CVector x = sample_element(domain, rng, norm_lo, norm_hi);
        CVector y = sample_element(domain, rng, norm_lo, norm_hi);
        cx lambda = sampler.at(static_cast<size_t>(s));

        CVector add = vsub(m(vadd(x, y)), vadd(m(x), m(y)));
        rep.max_additive_defect = std::max(rep.max_additive_defect, codomain.norm(add));

        CVector hom = vsub(m(vscale(lambda, x)), vscale(lambda, m(x)));
        rep.max_homogeneity_defect = std::max(rep.max_homogeneity_defect, codomain.norm(hom));
    }
    rep.linear = rep.max_additive_defect <= tol && rep.max_homogeneity_defect <= tol;
    if (rep.linear) {
        // consistency probe: additivity + torus homogeneity already imply full
        // complex homogeneity, so a random alpha should show nothing new
        for (int s = 0; s < std::min(n_samples, 16); ++s) {
            Rng rng = Rng::substream(seed ^ 0xa5a5a5a5ull, static_cast<uint64_t>(s));
            CVector x = sample_element(domain, rng, norm_lo, norm_hi);
            cx alpha = rng.gaussian_complex();
            CVector r = vsub(m(vscale(alpha, x)), vscale(alpha, m(x)));
            rep.alpha_residual = std::max(rep.alpha_residual, codomain.norm(r));
        }
    }
    return rep;
}

LinearityReport c_linearity_report(const MapUnderTest& m, const TorusSampler& sampler,
                                   int n_samples, double tol, uint64_t seed) {
    return c_linearity_report([&m](const CVector& x) { return m.apply(x); }, m.domain(),
                              m.codomain(), sampler, n_samples, tol, seed);
}

}  // namespace hyerslab
