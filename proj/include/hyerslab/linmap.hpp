#pragma once

#include <functional>

#include "hyerslab/algebra.hpp"

namespace hyerslab {

// ============================================================================
// LinearMap: C-linear map A -> X as a dense matrix in the fixed bases.
// Additivity and homogeneity are exact by representation.
// ============================================================================

class LinearMap {
  public:
    LinearMap() = default;
    explicit LinearMap(CMatrix m) : matrix_(std::move(m)) {}

    static LinearMap zero(int dim_x, int dim_a) { return LinearMap(CMatrix(dim_x, dim_a)); }
    static LinearMap identity(int dim) { return LinearMap(CMatrix::identity(dim)); }

    const CMatrix& matrix() const { return matrix_; }
    int domain_dim() const { return matrix_.cols(); }
    int codomain_dim() const { return matrix_.rows(); }

    CVector apply(const CVector& x) const { return matrix_.apply(x); }

  private:
    CMatrix matrix_;
};

// ============================================================================
// PerturbationModel: deterministic noise eta with a prescribed magnitude
// envelope. The direction is a unit-norm vector obtained by hashing the
// quantized coordinates of x, so eta is a genuine function of x alone,
// reproducible across runs; eta(0) = 0 always.
// ============================================================================

enum class PerturbationKind { none, bounded, power, custom };

struct PerturbationModel {
    PerturbationKind kind = PerturbationKind::none;
    double theta = 0.0;  // envelope scale, >= 0
    double p = 0.0;      // envelope exponent for the power kind
    uint64_t direction_seed = 1;
    std::function<CVector(const CVector&)> custom;  // used only for kind == custom

    static PerturbationModel none_model() { return {}; }
    static PerturbationModel bounded(double theta, uint64_t seed) {
        return {PerturbationKind::bounded, theta, 0.0, seed, nullptr};
    }
    static PerturbationModel power(double theta, double p, uint64_t seed) {
        return {PerturbationKind::power, theta, p, seed, nullptr};
    }
};

std::string to_string(PerturbationKind k);
PerturbationKind perturbation_kind_from_string(const std::string& s);

/// |t|^p with the convention 0^p = 0 for every p (keeps eta(0) = 0 and the
/// p = 0 control well defined).
inline double pow_zero(double t, double p) { return t == 0.0 ? 0.0 : std::pow(t, p); }

// ============================================================================
// MapUnderTest: evaluable, possibly nonlinear map A -> X.
// Evaluation is base(x) + eta(x); deterministic (bit-identical on repeats).
// ============================================================================

class MapUnderTest {
  public:
    MapUnderTest(std::shared_ptr<const Algebra> domain, std::shared_ptr<const Bimodule> codomain,
                 LinearMap base, PerturbationModel model);

    const Algebra& domain() const { return *domain_; }
    const Bimodule& codomain() const { return *codomain_; }
    std::shared_ptr<const Algebra> domain_ptr() const { return domain_; }
    std::shared_ptr<const Bimodule> codomain_ptr() const { return codomain_; }
    const LinearMap& base() const { return base_; }
    const PerturbationModel& model() const { return model_; }

    CVector operator()(const CVector& x) const { return apply(x); }
    CVector apply(const CVector& x) const;

    /// The noise term alone.
    CVector eta(const CVector& x) const;

  private:
    std::shared_ptr<const Algebra> domain_;
    std::shared_ptr<const Bimodule> codomain_;
    LinearMap base_;
    PerturbationModel model_;
};

/// Builds f = base + eta. Throws InvalidModel for negative theta.
MapUnderTest make_perturbed(std::shared_ptr<const Algebra> domain,
                            std::shared_ptr<const Bimodule> codomain, LinearMap base,
                            PerturbationModel model);

// ============================================================================
// TorusSampler: deterministic stream of unit-modulus scalars. Positions 0..3
// are exactly 1, -1, i, -i; the next grid_size positions walk the grid_size-th
// roots of unity; everything after is a pseudo-random phase.
// ============================================================================

class TorusSampler {
  public:
    explicit TorusSampler(int grid_size = 8, uint64_t seed = 7);

    int grid_size() const { return grid_; }
    cx at(size_t index) const;

  private:
    int grid_;
    uint64_t seed_;
};

// ============================================================================
// C-linearity checking. Additivity plus homogeneity over the unit circle
// forces full C-linearity, so the verdict samples exactly those two defects.
// ============================================================================

struct LinearityReport {
    double max_additive_defect = 0;     // ||m(x+y) - m(x) - m(y)||
    double max_homogeneity_defect = 0;  // ||m(lambda x) - lambda m(x)||, |lambda| = 1
    double alpha_residual = 0;          // ||m(alpha x) - alpha m(x)|| for random complex alpha
    bool linear = false;
    double tol = 0;
    int samples = 0;
};

/// Default verdict tolerance; absorbs accumulated floating noise at dim <= 100.
inline constexpr double kLinearityTol = 1e-9;

LinearityReport c_linearity_report(const std::function<CVector(const CVector&)>& m,
                                   const Algebra& domain, const Bimodule& codomain,
                                   const TorusSampler& sampler, int n_samples,
                                   double tol = kLinearityTol, uint64_t seed = 11,
                                   double norm_lo = 0.1, double norm_hi = 10.0);

LinearityReport c_linearity_report(const MapUnderTest& m, const TorusSampler& sampler,
                                   int n_samples, double tol = kLinearityTol, uint64_t seed = 11);

}  // namespace hyerslab
