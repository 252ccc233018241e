#include "hyerslab/oracle.hpp"

#include <cmath>

namespace hyerslab {

// ============================================================================
// Identity defects
// ============================================================================

double jordan_defect(const LinearMap& delta, const Algebra& a_alg, const Bimodule& x,
                     const CVector& a) {
    CVector lhs = delta.apply(a_alg.mul(a, a));
    CVector da = delta.apply(a);
    CVector rhs = vadd(x.left_act(a, da), x.right_act(da, a));
    return x.norm(vsub(lhs, rhs));
}

double gjd_defect(const LinearMap& d, const LinearMap& delta, const Algebra& a_alg,
                  const Bimodule& x, const CVector& a) {
    CVector lhs = d.apply(a_alg.mul(a, a));
    CVector rhs = vadd(x.left_act(a, d.apply(a)), x.right_act(delta.apply(a), a));
    return x.norm(vsub(lhs, rhs));
}

double derivation_defect(const LinearMap& delta, const Algebra& a_alg, const Bimodule& x,
                         const CVector& a, const CVector& b) {
    CVector lhs = delta.apply(a_alg.mul(a, b));
    CVector rhs = vadd(x.left_act(a, delta.apply(b)), x.right_act(delta.apply(a), b));
    return x.norm(vsub(lhs, rhs));
}

double generalized_derivation_defect(const LinearMap& d, const LinearMap& delta,
                                     const Algebra& a_alg, const Bimodule& x, const CVector& a,
                                     const CVector& b) {
    CVector lhs = d.apply(a_alg.mul(a, b));
    CVector rhs = vadd(x.left_act(a, d.apply(b)), x.right_act(delta.apply(a), b));
    return x.norm(vsub(lhs, rhs));
}

// ============================================================================
// Solution spaces
// ============================================================================

std::string to_string(SolutionKind k) {
    switch (k) {
        case SolutionKind::derivation: return "derivation";
        case SolutionKind::jordan_derivation: return "jordan_derivation";
        case SolutionKind::generalized_derivation_pair: return "generalized_derivation_pair";
        case SolutionKind::generalized_jordan_pair: return "generalized_jordan_pair";
        case SolutionKind::right_multiplier: return "right_multiplier";
    }
    return "derivation";
}

SolutionKind solution_kind_from_string(const std::string& s) {
    if (s == "derivation") return SolutionKind::derivation;
    if (s == "jordan_derivation") return SolutionKind::jordan_derivation;
    if (s == "generalized_derivation_pair") return SolutionKind::generalized_derivation_pair;
    if (s == "generalized_jordan_pair") return SolutionKind::generalized_jordan_pair;
    if (s == "right_multiplier") return SolutionKind::right_multiplier;
    throw InvalidModel("unknown solution kind: " + s);
}

CVector SolutionSpace::flat(int index) const {
    if (!pairs.empty()) {
        CVector v = pairs[index].first.matrix().flatten();
        CVector w = pairs[index].second.matrix().flatten();
        v.insert(v.end(), w.begin(), w.end());
        return v;
    }
    return basis[index].matrix().flatten();
}

double SolutionSpace::independence_sigma_min() const {
    int n = dimension();
    if (n == 0) return 0;
    CVector first = flat(0);
    CMatrix stacked(static_cast<int>(first.size()), n);
    for (int j = 0; j < n; ++j) stacked.set_column(j, flat(j));
    Svd s = svd(stacked);
    return s.sigma.back();
}

namespace {

// Row-builder over the unknown matrices. Unknowns are vec(M) with
// index r*dim_a + c (row-major), optionally two blocks for (d, delta).
class SystemBuilder {
  public:
    SystemBuilder(int dim_a, int dim_x, int blocks) : da_(dim_a), dx_(dim_x), blocks_(blocks) {}

    int unknowns() const { return blocks_ * dx_ * da_; }

    void new_row() { rows_.emplace_back(unknowns(), cx(0, 0)); }

    /// coefficient of M[r][c] in the current row, block 0 = d, block 1 = delta
    void add(int block, int r, int c, cx coef) {
        rows_.back()[static_cast<size_t>(block) * dx_ * da_ + static_cast<size_t>(r) * da_ + c] +=
            coef;
    }

    /// contribution of  coef * M(v)  where v has algebra coordinates; output
    /// component k means row index k of the identity being imposed
    void add_map_applied(int block, int out_k, const CVector& v, cx coef) {
        for (int c = 0; c < da_; ++c)
            if (v[c] != cx(0, 0)) add(block, out_k, c, coef * v[c]);
    }

    /// contribution of  coef * (e_i . M e_j)  at output component k
    void add_left_action(int block, int out_k, const Bimodule& x, int i, int j, cx coef) {
        for (int r = 0; r < dx_; ++r) {
            cx l = x.left_at(i, r, out_k);
            if (l != cx(0, 0)) add(block, r, j, coef * l);
        }
    }

    /// contribution of  coef * ((M e_i) . e_j)  at output component k
    void add_right_action(int block, int out_k, const Bimodule& x, int i, int j, cx coef) {
        for (int r = 0; r < dx_; ++r) {
            cx rr = x.right_at(r, j, out_k);
            if (rr != cx(0, 0)) add(block, r, i, coef * rr);
        }
    }

    CMatrix matrix() const {
        CMatrix m(static_cast<int>(rows_.size()), unknowns());
        for (size_t r = 0; r < rows_.size(); ++r)
            for (int c = 0; c < unknowns(); ++c) m(static_cast<int>(r), c) = rows_[r][c];
        return m;
    }

  private:
    int da_, dx_, blocks_;
    std::vector<CVector> rows_;
};

// polarized Jordan identity rows for the map in `block`
void add_jordan_rows(SystemBuilder& sys, const Algebra& a, const Bimodule& x, int block) {
    int da = a.dim(), dx = x.dim();
    for (int i = 0; i < da; ++i)
        for (int j = i; j < da; ++j) {
            CVector ei = basis_vector(da, i), ej = basis_vector(da, j);
            CVector w = vadd(a.mul(ei, ej), a.mul(ej, ei));
            for (int k = 0; k < dx; ++k) {
                sys.new_row();
                sys.add_map_applied(block, k, w, cx(1, 0));
                sys.add_left_action(block, k, x, i, j, cx(-1, 0));   // - e_i . M e_j
                sys.add_right_action(block, k, x, i, j, cx(-1, 0));  // - (M e_i) . e_j
                sys.add_left_action(block, k, x, j, i, cx(-1, 0));   // - e_j . M e_i
                sys.add_right_action(block, k, x, j, i, cx(-1, 0));  // - (M e_j) . e_i
            }
        }
}

// full derivation identity rows for the map in `block`
void add_derivation_rows(SystemBuilder& sys, const Algebra& a, const Bimodule& x, int d_block,
                         int delta_block) {
    int da = a.dim(), dx = x.dim();
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j) {
            CVector ei = basis_vector(da, i), ej = basis_vector(da, j);
            CVector w = a.mul(ei, ej);
            for (int k = 0; k < dx; ++k) {
                sys.new_row();
                sys.add_map_applied(d_block, k, w, cx(1, 0));
                sys.add_left_action(d_block, k, x, i, j, cx(-1, 0));       // - e_i . d e_j
                sys.add_right_action(delta_block, k, x, i, j, cx(-1, 0));  // - (delta e_i) . e_j
            }
        }
}

// polarized generalized Jordan identity rows coupling blocks (d, delta):
//   d(e_i e_j + e_j e_i) = e_i d(e_j) + e_j d(e_i) + delta(e_i) e_j + delta(e_j) e_i
void add_gjd_rows(SystemBuilder& sys, const Algebra& a, const Bimodule& x) {
    int da = a.dim(), dx = x.dim();
    for (int i = 0; i < da; ++i)
        for (int j = i; j < da; ++j) {
            CVector ei = basis_vector(da, i), ej = basis_vector(da, j);
            CVector w = vadd(a.mul(ei, ej), a.mul(ej, ei));
            for (int k = 0; k < dx; ++k) {
                sys.new_row();
                sys.add_map_applied(0, k, w, cx(1, 0));
                sys.add_left_action(0, k, x, i, j, cx(-1, 0));
                sys.add_left_action(0, k, x, j, i, cx(-1, 0));
                sys.add_right_action(1, k, x, i, j, cx(-1, 0));
                sys.add_right_action(1, k, x, j, i, cx(-1, 0));
            }
        }
}

LinearMap map_from_flat(const CVector& flat, int dx, int da, int offset) {
    CMatrix m(dx, da);
    for (int r = 0; r < dx; ++r)
        for (int c = 0; c < da; ++c) m(r, c) = flat[offset + static_cast<size_t>(r) * da + c];
    return LinearMap(std::move(m));
}

SolutionSpace finish_single(SolutionKind kind, const Algebra& a, const Bimodule& x,
                            const CMatrix& sys, const SolveOptions& opts) {
    NullSpace ns = null_space(sys, opts.rank_rel_tol, opts.uncertain_lo, opts.uncertain_hi);
    SolutionSpace space;
    space.kind = kind;
    space.dim_a = a.dim();
    space.dim_x = x.dim();
    space.spectrum = ns.spectrum;
    for (const CVector& v : ns.basis) space.basis.emplace_back(map_from_flat(v, x.dim(), a.dim(), 0));

    // unpolarized re-verification on random elements
    Rng rng(opts.probe_seed);
    for (const LinearMap& m : space.basis) {
        for (int t = 0; t < opts.verify_probes; ++t) {
            CVector el = sample_element(a, rng, 0.1, 10.0);
            double scale = 1.0 + a.norm(el) * a.norm(el);
            double defect = kind == SolutionKind::derivation
                                ? derivation_defect(m, a, x, el, sample_element(a, rng, 0.1, 10.0))
                                : jordan_defect(m, a, x, el);
            space.residual = std::max(space.residual, defect / scale);
        }
    }
    if (space.residual > 1e-9)
        throw std::runtime_error("oracle self-check failed: basis residual " +
                                 std::to_string(space.residual));
    return space;
}

SolutionSpace finish_pairs(SolutionKind kind, const Algebra& a, const Bimodule& x,
                           const CMatrix& sys, const SolveOptions& opts) {
    NullSpace ns = null_space(sys, opts.rank_rel_tol, opts.uncertain_lo, opts.uncertain_hi);
    SolutionSpace space;
    space.kind = kind;
    space.dim_a = a.dim();
    space.dim_x = x.dim();
    space.spectrum = ns.spectrum;
    size_t block = static_cast<size_t>(x.dim()) * a.dim();
    for (const CVector& v : ns.basis)
        space.pairs.emplace_back(map_from_flat(v, x.dim(), a.dim(), 0),
                                 map_from_flat(v, x.dim(), a.dim(), static_cast<int>(block)));

    Rng rng(opts.probe_seed);
    for (const auto& [d, delta] : space.pairs) {
        for (int t = 0; t < opts.verify_probes; ++t) {
            CVector el = sample_element(a, rng, 0.1, 10.0);
            double scale = 1.0 + a.norm(el) * a.norm(el);
            double defect;
            if (kind == SolutionKind::generalized_jordan_pair) {
                defect = std::max(gjd_defect(d, delta, a, x, el), jordan_defect(delta, a, x, el));
            } else {
                CVector el2 = sample_element(a, rng, 0.1, 10.0);
                defect = std::max(generalized_derivation_defect(d, delta, a, x, el, el2),
                                  derivation_defect(delta, a, x, el, el2));
            }
            space.residual = std::max(space.residual, defect / scale);
        }
    }
    if (space.residual > 1e-9)
        throw std::runtime_error("oracle self-check failed: pair residual " +
                                 std::to_string(space.residual));
    return space;
}

}  // namespace

SolutionSpace solve_jordan_derivations(const Algebra& a, const Bimodule& x,
                                       const SolveOptions& opts) {
    SystemBuilder sys(a.dim(), x.dim(), 1);
    add_jordan_rows(sys, a, x, 0);
    return finish_single(SolutionKind::jordan_derivation, a, x, sys.matrix(), opts);
}

SolutionSpace solve_derivations(const Algebra& a, const Bimodule& x, const SolveOptions& opts) {
    SystemBuilder sys(a.dim(), x.dim(), 1);
    add_derivation_rows(sys, a, x, 0, 0);
    return finish_single(SolutionKind::derivation, a, x, sys.matrix(), opts);
}

SolutionSpace solve_generalized_jordan_pairs(const Algebra& a, const Bimodule& x,
                                             const SolveOptions& opts) {
    SystemBuilder sys(a.dim(), x.dim(), 2);
    add_gjd_rows(sys, a, x);
    add_jordan_rows(sys, a, x, 1);
    SolutionSpace space = finish_pairs(SolutionKind::generalized_jordan_pair, a, x, sys.matrix(), opts);
    // observed, not assumed: how far d - delta sits from the right multipliers
    SolutionSpace rms = right_multiplier_space(a, x);
    double worst = 0;
    for (const auto& [d, delta] : space.pairs)
        worst = std::max(worst, membership_residual(rms, LinearMap(d.matrix() - delta.matrix())));
    space.d_minus_delta_rm_residual = worst;
    return space;
}

SolutionSpace solve_generalized_derivation_pairs(const Algebra& a, const Bimodule& x,
                                                 const SolveOptions& opts) {
    SystemBuilder sys(a.dim(), x.dim(), 2);
    add_derivation_rows(sys, a, x, 0, 1);
    add_derivation_rows(sys, a, x, 1, 1);
    return finish_pairs(SolutionKind::generalized_derivation_pair, a, x, sys.matrix(), opts);
}

SolutionSpace right_multiplier_space(const Algebra& a, const Bimodule& x) {
    SolutionSpace space;
    space.kind = SolutionKind::right_multiplier;
    space.dim_a = a.dim();
    space.dim_x = x.dim();
    for (int k = 0; k < x.dim(); ++k)
        space.basis.push_back(right_multiplier(a, x, basis_vector(x.dim(), k)));
    return space;
}

LinearMap inner_derivation(const Algebra& a, const Bimodule& x, const CVector& xe) {
    CMatrix m(x.dim(), a.dim());
    for (int i = 0; i < a.dim(); ++i) {
        CVector ei = basis_vector(a.dim(), i);
        CVector col = vsub(x.right_act(xe, ei), x.left_act(ei, xe));  // x a - a x
        m.set_column(i, col);
    }
    return LinearMap(std::move(m));
}

LinearMap inner_derivation(const Algebra& a, const CVector& xe) {
    CMatrix m(a.dim(), a.dim());
    for (int i = 0; i < a.dim(); ++i) {
        CVector ei = basis_vector(a.dim(), i);
        m.set_column(i, vsub(a.mul(xe, ei), a.mul(ei, xe)));
    }
    return LinearMap(std::move(m));
}

LinearMap right_multiplier(const Algebra& a, const Bimodule& x, const CVector& x0) {
    CMatrix m(x.dim(), a.dim());
    for (int i = 0; i < a.dim(); ++i)
        m.set_column(i, x.left_act(basis_vector(a.dim(), i), x0));
    return LinearMap(std::move(m));
}

namespace {

double residual_to_span(const SolutionSpace& space, const CVector& v) {
    double nv = vnorm2(v);
    if (nv == 0) return 0;
    std::vector<CVector> flats;
    for (int i = 0; i < space.dimension(); ++i) flats.push_back(space.flat(i));
    std::vector<CVector> onb = orthonormal_span(flats);
    return projection_residual(onb, v) / nv;
}

}  // namespace

double membership_residual(const SolutionSpace& space, const LinearMap& m) {
    return residual_to_span(space, m.matrix().flatten());
}

double membership_residual(const SolutionSpace& space, const LinearMap& d,
                           const LinearMap& delta) {
    CVector v = d.matrix().flatten();
    CVector w = delta.matrix().flatten();
    v.insert(v.end(), w.begin(), w.end());
    return residual_to_span(space, v);
}

}  // namespace hyerslab
