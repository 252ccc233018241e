#pragma once

#include <memory>
#include <string>

#include <json.hpp>

#include "hyerslab/matrix.hpp"
#include "hyerslab/rng.hpp"
#include "hyerslab/svd.hpp"

namespace hyerslab {

enum class NormKind { operator_norm, entrywise_max, weighted };

std::string to_string(NormKind k);
NormKind norm_kind_from_string(const std::string& s);

// ============================================================================
// Algebra: finite-dimensional unital associative algebra over C, given by
// structure constants  e_i e_j = sum_k c[i][j][k] e_k.
// ============================================================================

class Algebra {
  public:
    Algebra(int dim, std::vector<cx> structure, CVector unit,
            NormKind norm_kind = NormKind::operator_norm, std::vector<double> weights = {},
            std::vector<std::string> basis_labels = {});

    int dim() const { return dim_; }
    NormKind norm_kind() const { return norm_kind_; }
    const CVector& unit() const { return unit_; }
    const std::vector<std::string>& basis_labels() const { return labels_; }
    const std::vector<double>& weights() const { return weights_; }

    cx structure_at(int i, int j, int k) const {
        return structure_[(static_cast<size_t>(i) * dim_ + j) * dim_ + k];
    }

    /// Bilinear product of coordinate vectors.
    CVector mul(const CVector& x, const CVector& y) const;

    /// Matrix of y -> x*y in the fixed basis (left regular representation).
    CMatrix left_mult(const CVector& x) const;

    /// Element norm per norm_kind. The operator kind is the largest singular
    /// value of left_mult(x); submultiplicative by construction.
    double norm(const CVector& x) const;

  private:
    int dim_;
    std::vector<cx> structure_;
    CVector unit_;
    NormKind norm_kind_;
    std::vector<double> weights_;
    std::vector<std::string> labels_;
};

// ============================================================================
// Bimodule: left/right action tensors over the same scalar field.
// left[(i*dimX+j)*dimX+k]   : coefficient of x_k in  e_i . x_j
// right[(j*dimA+i)*dimX+k]  : coefficient of x_k in  x_j . e_i
// ============================================================================

class Bimodule {
  public:
    /// X = A with its own multiplication as both actions.
    static Bimodule self_module(std::shared_ptr<const Algebra> a);

    Bimodule(std::shared_ptr<const Algebra> a, int dim, std::vector<cx> left,
             std::vector<cx> right, NormKind norm_kind, std::vector<double> weights = {});

    int dim() const { return dim_; }
    bool is_self() const { return self_; }
    const Algebra& algebra() const { return *alg_; }
    std::shared_ptr<const Algebra> algebra_ptr() const { return alg_; }
    NormKind norm_kind() const { return norm_kind_; }

    cx left_at(int i, int j, int k) const {
        return left_[(static_cast<size_t>(i) * dim_ + j) * dim_ + k];
    }
    cx right_at(int j, int i, int k) const {
        return right_[(static_cast<size_t>(j) * alg_->dim() + i) * dim_ + k];
    }

    CVector left_act(const CVector& a, const CVector& x) const;
    CVector right_act(const CVector& x, const CVector& a) const;
    double norm(const CVector& x) const;

  private:
    std::shared_ptr<const Algebra> alg_;
    int dim_;
    std::vector<cx> left_, right_;
    NormKind norm_kind_;
    std::vector<double> weights_;
    bool self_ = false;
};

// ============================================================================
// Validation
// ============================================================================

struct Violation {
    std::string check;  // which invariant
    double residual;
    std::string where;  // witnessing indices / description
};

struct ViolationReport {
    std::vector<Violation> items;
    bool ok() const { return items.empty(); }
    const Violation* worst() const;
    std::string summary() const;
};

/// Structure-tensor tolerance for associativity / unit axioms.
inline constexpr double kStructureTol = 1e-12;

/// Lists every violated invariant with the worst residual and witnessing
/// indices; empty report iff valid. Non-operator norms get a sampled
/// submultiplicativity check (the operator norm needs none).
ViolationReport validate(const Algebra& a, int norm_samples = 256, uint64_t seed = 2024);
ViolationReport validate(const Bimodule& x, int norm_samples = 256, uint64_t seed = 2024);

// ============================================================================
// Builders
// ============================================================================

Algebra matrix_algebra(int n, NormKind kind = NormKind::operator_norm);
Algebra upper_triangular_algebra(int n, NormKind kind = NormKind::operator_norm);
Algebra dual_numbers(NormKind kind = NormKind::operator_norm);
Algebra direct_sum(const Algebra& a, const Algebra& b, NormKind kind = NormKind::operator_norm);

/// Parse an algebra spec (explicit tensors or a generator form); derives the
/// unit by least squares when absent. No invariant checks beyond shape.
Algebra algebra_from_spec(const nlohmann::json& spec);

/// algebra_from_spec + validation. Throws AssociativityViolation (worst
/// offending triple), MissingUnit, or DimensionMismatch.
Algebra make_algebra(const nlohmann::json& spec);

/// Parse "self" or an explicit bimodule spec bound to a.
Bimodule bimodule_from_spec(const nlohmann::json& spec, std::shared_ptr<const Algebra> a);

// ============================================================================
// Sampling
// ============================================================================

/// Random element with i.i.d. complex Gaussian coordinates rescaled so the
/// algebra norm is log-uniform in [norm_lo, norm_hi].
CVector sample_element(const Algebra& a, Rng& rng, double norm_lo, double norm_hi);

}  // namespace hyerslab
