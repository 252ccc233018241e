#include "hyerslab/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hyerslab {

std::string to_string(NormKind k) {
    switch (k) {
        case NormKind::operator_norm: return "operator";
        case NormKind::entrywise_max: return "entrywise_max";
        case NormKind::weighted: return "weighted";
    }
    return "operator";
}

NormKind norm_kind_from_string(const std::string& s) {
    if (s == "operator") return NormKind::operator_norm;
    if (s == "entrywise_max") return NormKind::entrywise_max;
    if (s == "weighted") return NormKind::weighted;
    throw DimensionMismatch("unknown norm kind: " + s);
}

// ============================================================================
// Algebra
// ============================================================================

Algebra::Algebra(int dim, std::vector<cx> structure, CVector unit, NormKind norm_kind,
                 std::vector<double> weights, std::vector<std::string> basis_labels)
    : dim_(dim),
      structure_(std::move(structure)),
      unit_(std::move(unit)),
      norm_kind_(norm_kind),
      weights_(std::move(weights)),
      labels_(std::move(basis_labels)) {
    if (dim_ <= 0) throw DimensionMismatch("algebra dim must be positive");
    size_t want = static_cast<size_t>(dim_) * dim_ * dim_;
    if (structure_.size() != want) throw DimensionMismatch("structure tensor has wrong size");
    if (static_cast<int>(unit_.size()) != dim_) throw DimensionMismatch("unit vector has wrong size");
    if (norm_kind_ == NormKind::weighted) {
        if (static_cast<int>(weights_.size()) != dim_)
            throw DimensionMismatch("weighted norm needs one weight per basis element");
        for (double w : weights_)
            if (!(w > 0)) throw DimensionMismatch("weights must be positive");
    }
    if (labels_.empty()) {
        for (int i = 0; i < dim_; ++i) labels_.push_back("e" + std::to_string(i));
    }
}

CVector Algebra::mul(const CVector& x, const CVector& y) const {
    if (static_cast<int>(x.size()) != dim_ || static_cast<int>(y.size()) != dim_)
        throw DimensionMismatch("mul: coordinate vectors must have length dim");
    CVector z(dim_, cx(0, 0));
    for (int i = 0; i < dim_; ++i) {
        if (x[i] == cx(0, 0)) continue;
        for (int j = 0; j < dim_; ++j) {
            cx xy = x[i] * y[j];
            if (xy == cx(0, 0)) continue;
            const cx* row = &structure_[(static_cast<size_t>(i) * dim_ + j) * dim_];
            for (int k = 0; k < dim_; ++k) z[k] += xy * row[k];
        }
    }
    return z;
}

CMatrix Algebra::left_mult(const CVector& x) const {
    if (static_cast<int>(x.size()) != dim_)
        throw DimensionMismatch("left_mult: coordinate vector must have length dim");
    CMatrix m(dim_, dim_);
    for (int k = 0; k < dim_; ++k)
        for (int j = 0; j < dim_; ++j) {
            cx s = 0;
            for (int i = 0; i < dim_; ++i) s += x[i] * structure_at(i, j, k);
            m(k, j) = s;
        }
    return m;
}

double Algebra::norm(const CVector& x) const {
    if (static_cast<int>(x.size()) != dim_)
        throw DimensionMismatch("norm: coordinate vector must have length dim");
    switch (norm_kind_) {
        case NormKind::operator_norm: return sigma_max(left_mult(x));
        case NormKind::entrywise_max: {
            double m = 0;
            for (const cx& z : x) m = std::max(m, std::abs(z));
            return m;
        }
        case NormKind::weighted: {
            double m = 0;
            for (int i = 0; i < dim_; ++i) m = std::max(m, weights_[i] * std::abs(x[i]));
            return m;
        }
    }
    return 0;
}

// ============================================================================
// Bimodule
// ============================================================================

Bimodule Bimodule::self_module(std::shared_ptr<const Algebra> a) {
    int d = a->dim();
    std::vector<cx> left(static_cast<size_t>(d) * d * d), right(static_cast<size_t>(d) * d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                left[(static_cast<size_t>(i) * d + j) * d + k] = a->structure_at(i, j, k);
                right[(static_cast<size_t>(j) * d + i) * d + k] = a->structure_at(j, i, k);
            }
    Bimodule x(a, d, std::move(left), std::move(right), a->norm_kind(), a->weights());
    x.self_ = true;
    return x;
}

Bimodule::Bimodule(std::shared_ptr<const Algebra> a, int dim, std::vector<cx> left,
                   std::vector<cx> right, NormKind norm_kind, std::vector<double> weights)
    : alg_(std::move(a)),
      dim_(dim),
      left_(std::move(left)),
      right_(std::move(right)),
      norm_kind_(norm_kind),
      weights_(std::move(weights)) {
    if (!alg_) throw DimensionMismatch("bimodule needs an algebra");
    if (dim_ <= 0) throw DimensionMismatch("bimodule dim must be positive");
    size_t want = static_cast<size_t>(alg_->dim()) * dim_ * dim_;
    if (left_.size() != want || right_.size() != want)
        throw DimensionMismatch("bimodule action tensors have wrong size");
    if (norm_kind_ == NormKind::weighted && static_cast<int>(weights_.size()) != dim_)
        throw DimensionMismatch("weighted norm needs one weight per module basis element");
}

CVector Bimodule::left_act(const CVector& a, const CVector& x) const {
    if (static_cast<int>(a.size()) != alg_->dim() || static_cast<int>(x.size()) != dim_)
        throw DimensionMismatch("left_act: bad coordinate lengths");
    if (self_) return alg_->mul(a, x);
    CVector y(dim_, cx(0, 0));
    for (int i = 0; i < alg_->dim(); ++i) {
        if (a[i] == cx(0, 0)) continue;
        for (int j = 0; j < dim_; ++j) {
            cx ax = a[i] * x[j];
            if (ax == cx(0, 0)) continue;
            const cx* row = &left_[(static_cast<size_t>(i) * dim_ + j) * dim_];
            for (int k = 0; k < dim_; ++k) y[k] += ax * row[k];
        }
    }
    return y;
}

CVector Bimodule::right_act(const CVector& x, const CVector& a) const {
    if (static_cast<int>(a.size()) != alg_->dim() || static_cast<int>(x.size()) != dim_)
        throw DimensionMismatch("right_act: bad coordinate lengths");
    if (self_) return alg_->mul(x, a);
    CVector y(dim_, cx(0, 0));
    for (int j = 0; j < dim_; ++j) {
        if (x[j] == cx(0, 0)) continue;
        for (int i = 0; i < alg_->dim(); ++i) {
            cx xa = x[j] * a[i];
            if (xa == cx(0, 0)) continue;
            const cx* row = &right_[(static_cast<size_t>(j) * alg_->dim() + i) * dim_];
            for (int k = 0; k < dim_; ++k) y[k] += xa * row[k];
        }
    }
    return y;
}

double Bimodule::norm(const CVector& x) const {
    if (self_) return alg_->norm(x);
    switch (norm_kind_) {
        case NormKind::operator_norm:
            throw InvalidModel("operator norm is only defined on the self module");
        case NormKind::entrywise_max: {
            double m = 0;
            for (const cx& z : x) m = std::max(m, std::abs(z));
            return m;
        }
        case NormKind::weighted: {
            double m = 0;
            for (int i = 0; i < dim_; ++i) m = std::max(m, weights_[i] * std::abs(x[i]));
            return m;
        }
    }
    return 0;
}

// ============================================================================
// Validation
// ============================================================================

const Violation* ViolationReport::worst() const {
    const Violation* w = nullptr;
    for (const Violation& v : items)
        if (!w || v.residual > w->residual) w = &v;
    return w;
}

std::string ViolationReport::summary() const {
    if (ok()) return "valid";
    std::ostringstream os;
    os << items.size() << " violation(s):";
    for (const Violation& v : items)
        os << "\n  " << v.check << " at " << v.where << " residual " << v.residual;
    return os.str();
}

namespace {

struct WorstTracker {
    double residual = 0;
    std::string where;
    void update(double r, const std::string& w) {
        if (r > residual) {
            residual = r;
            where = w;
        }
    }
};

std::string triple_str(int i, int j, int l) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(l) + ")";
}

}  // namespace

ViolationReport validate(const Algebra& a, int norm_samples, uint64_t seed) {
    ViolationReport rep;
    const int d = a.dim();

    // associativity on all basis triples
    WorstTracker assoc;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int l = 0; l < d; ++l)
                for (int m = 0; m < d; ++m) {
                    cx lhs = 0, rhs = 0;
                    for (int k = 0; k < d; ++k) {
                        lhs += a.structure_at(i, j, k) * a.structure_at(k, l, m);
                        rhs += a.structure_at(j, l, k) * a.structure_at(i, k, m);
                    }
                    double r = std::abs(lhs - rhs);
                    if (r > kStructureTol) assoc.update(r, triple_str(i, j, l));
                }
    if (!assoc.where.empty()) rep.items.push_back({"associativity", assoc.residual, assoc.where});

    // unit axioms, exactly within tolerance on every basis element
    WorstTracker unit;
    for (int i = 0; i < d; ++i) {
        CVector e = basis_vector(d, i);
        CVector ue = a.mul(a.unit(), e);
        CVector eu = a.mul(e, a.unit());
        for (int k = 0; k < d; ++k) {
            double r1 = std::abs(ue[k] - e[k]);
            double r2 = std::abs(eu[k] - e[k]);
            if (r1 > kStructureTol) unit.update(r1, "unit*e" + std::to_string(i));
            if (r2 > kStructureTol) unit.update(r2, "e" + std::to_string(i) + "*unit");
        }
    }
    if (!unit.where.empty()) rep.items.push_back({"unit_axiom", unit.residual, unit.where});

    // norm of the unit
    double nu = a.norm(a.unit());
    if (a.norm_kind() == NormKind::operator_norm) {
        if (std::abs(nu - 1.0) > 1e-9)
            rep.items.push_back({"unit_norm", std::abs(nu - 1.0), "operator norm of unit != 1"});
    } else if (nu < 1.0 - 1e-12) {
        rep.items.push_back({"unit_norm", 1.0 - nu, "norm of unit < 1"});
    }

    // submultiplicativity: analytic for the operator kind, sampled otherwise
    if (a.norm_kind() != NormKind::operator_norm) {
        Rng rng(seed);
        WorstTracker sub;
        for (int s = 0; s < norm_samples; ++s) {
            CVector x = sample_element(a, rng, 0.5, 2.0);
            CVector y = sample_element(a, rng, 0.5, 2.0);
            double lhs = a.norm(a.mul(x, y));
            double rhs = a.norm(x) * a.norm(y);
            if (lhs > rhs + 1e-10) sub.update(lhs - rhs, "sample " + std::to_string(s));
        }
        if (!sub.where.empty())
            rep.items.push_back({"submultiplicative", sub.residual, sub.where});
    }
    return rep;
}

ViolationReport validate(const Bimodule& x, int norm_samples, uint64_t seed) {
    ViolationReport rep;
    const Algebra& a = x.algebra();
    const int da = a.dim(), dx = x.dim();

    WorstTracker axioms;
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j) {
            CVector ei = basis_vector(da, i), ej = basis_vector(da, j);
            CVector ab = a.mul(ei, ej);
            for (int l = 0; l < dx; ++l) {
                CVector xl = basis_vector(dx, l);
                // (ab).x = a.(b.x)
                double r1 = vnorm2(vsub(x.left_act(ab, xl), x.left_act(ei, x.left_act(ej, xl))));
                // x.(ab) = (x.a).b
                double r2 = vnorm2(vsub(x.right_act(xl, ab), x.right_act(x.right_act(xl, ei), ej)));
                // (a.x).b = a.(x.b)
                double r3 = vnorm2(vsub(x.right_act(x.left_act(ei, xl), ej),
                                        x.left_act(ei, x.right_act(xl, ej))));
                if (r1 > kStructureTol) axioms.update(r1, "left assoc " + triple_str(i, j, l));
                if (r2 > kStructureTol) axioms.update(r2, "right assoc " + triple_str(i, j, l));
                if (r3 > kStructureTol) axioms.update(r3, "mixed assoc " + triple_str(i, j, l));
            }
        }
    if (!axioms.where.empty()) rep.items.push_back({"module_axiom", axioms.residual, axioms.where});

    WorstTracker unit;
    for (int l = 0; l < dx; ++l) {
        CVector xl = basis_vector(dx, l);
        double r1 = vnorm2(vsub(x.left_act(a.unit(), xl), xl));
        double r2 = vnorm2(vsub(x.right_act(xl, a.unit()), xl));
        if (r1 > kStructureTol) unit.update(r1, "unit.x" + std::to_string(l));
        if (r2 > kStructureTol) unit.update(r2, "x" + std::to_string(l) + ".unit");
    }
    if (!unit.where.empty()) rep.items.push_back({"unit_linked", unit.residual, unit.where});

    // action-norm compatibility on samples
    {
        Rng rng(seed);
        WorstTracker compat;
        for (int s = 0; s < norm_samples; ++s) {
            CVector el = sample_element(a, rng, 0.5, 2.0);
            CVector xv(dx);
            for (int k = 0; k < dx; ++k) xv[k] = rng.gaussian_complex();
            double nx = x.norm(xv);
            if (nx == 0) continue;
            double r1 = x.norm(x.left_act(el, xv)) - a.norm(el) * nx;
            double r2 = x.norm(x.right_act(xv, el)) - nx * a.norm(el);
            if (r1 > 1e-10) compat.update(r1, "left sample " + std::to_string(s));
            if (r2 > 1e-10) compat.update(r2, "right sample " + std::to_string(s));
        }
        if (!compat.where.empty())
            rep.items.push_back({"action_norm", compat.residual, compat.where});
    }
    return rep;
}

// ============================================================================
// Builders
// ============================================================================

namespace {

std::vector<cx> zero_tensor(int d) {
    return std::vector<cx>(static_cast<size_t>(d) * d * d, cx(0, 0));
}

void set_structure(std::vector<cx>& c, int d, int i, int j, int k, cx v) {
    c[(static_cast<size_t>(i) * d + j) * d + k] = v;
}

}  // namespace

Algebra matrix_algebra(int n, NormKind kind) {
    if (n < 1) throw DimensionMismatch("matrix algebra needs n >= 1");
    int d = n * n;  // basis E_{rc} at index r*n + c
    auto idx = [n](int r, int c) { return r * n + c; };
    std::vector<cx> structure = zero_tensor(d);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            for (int r2 = 0; r2 < n; ++r2)
                for (int c2 = 0; c2 < n; ++c2)
                    if (c == r2) set_structure(structure, d, idx(r, c), idx(r2, c2), idx(r, c2), 1);
    CVector unit(d, cx(0, 0));
    for (int r = 0; r < n; ++r) unit[idx(r, r)] = 1;
    std::vector<std::string> labels;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            labels.push_back("E" + std::to_string(r + 1) + std::to_string(c + 1));
    return Algebra(d, std::move(structure), std::move(unit), kind, {}, std::move(labels));
}

Algebra upper_triangular_algebra(int n, NormKind kind) {
    if (n < 1) throw DimensionMismatch("upper triangular algebra needs n >= 1");
    std::vector<std::pair<int, int>> pos;
    for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c) pos.emplace_back(r, c);
    int d = static_cast<int>(pos.size());
    auto idx = [&pos](int r, int c) {
        for (size_t t = 0; t < pos.size(); ++t)
            if (pos[t].first == r && pos[t].second == c) return static_cast<int>(t);
        return -1;
    };
    std::vector<cx> structure = zero_tensor(d);
    for (int s = 0; s < d; ++s)
        for (int t = 0; t < d; ++t) {
            auto [r1, c1] = pos[s];
            auto [r2, c2] = pos[t];
            if (c1 == r2) set_structure(structure, d, s, t, idx(r1, c2), 1);
        }
    CVector unit(d, cx(0, 0));
    for (int r = 0; r < n; ++r) unit[idx(r, r)] = 1;
    std::vector<std::string> labels;
    for (auto [r, c] : pos) labels.push_back("E" + std::to_string(r + 1) + std::to_string(c + 1));
    return Algebra(d, std::move(structure), std::move(unit), kind, {}, std::move(labels));
}

Algebra dual_numbers(NormKind kind) {
    std::vector<cx> structure = zero_tensor(2);
    set_structure(structure, 2, 0, 0, 0, 1);  // 1*1 = 1
    set_structure(structure, 2, 0, 1, 1, 1);  // 1*eps = eps
    set_structure(structure, 2, 1, 0, 1, 1);  // eps*1 = eps
    // eps*eps = 0
    return Algebra(2, std::move(structure), {cx(1, 0), cx(0, 0)}, kind, {}, {"1", "eps"});
}

Algebra direct_sum(const Algebra& a, const Algebra& b, NormKind kind) {
    int da = a.dim(), db = b.dim(), d = da + db;
    std::vector<cx> structure = zero_tensor(d);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j)
            for (int k = 0; k < da; ++k) set_structure(structure, d, i, j, k, a.structure_at(i, j, k));
    for (int i = 0; i < db; ++i)
        for (int j = 0; j < db; ++j)
            for (int k = 0; k < db; ++k)
                set_structure(structure, d, da + i, da + j, da + k, b.structure_at(i, j, k));
    CVector unit(d, cx(0, 0));
    for (int i = 0; i < da; ++i) unit[i] = a.unit()[i];
    for (int i = 0; i < db; ++i) unit[da + i] = b.unit()[i];
    std::vector<std::string> labels;
    for (const std::string& l : a.basis_labels()) labels.push_back("A." + l);
    for (const std::string& l : b.basis_labels()) labels.push_back("B." + l);
    return Algebra(d, std::move(structure), std::move(unit), kind, {}, std::move(labels));
}

// ============================================================================
// Spec parsing
// ============================================================================

namespace {

NormKind parse_norm_kind(const nlohmann::json& spec) {
    if (!spec.contains("norm")) return NormKind::operator_norm;
    return norm_kind_from_string(spec.at("norm").get<std::string>());
}

std::vector<double> parse_weights(const nlohmann::json& spec) {
    std::vector<double> w;
    if (spec.contains("weights"))
        for (const auto& v : spec.at("weights")) w.push_back(v.get<double>());
    return w;
}

CVector derive_unit(int d, const std::vector<cx>& structure) {
    // Solve u * e_i = e_i for all i as a least squares problem in u.
    CMatrix m(d * d, d);
    CVector rhs(static_cast<size_t>(d) * d, cx(0, 0));
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            for (int q = 0; q < d; ++q)
                m(i * d + k, q) = structure[(static_cast<size_t>(q) * d + i) * d + k];
            rhs[static_cast<size_t>(i) * d + k] = (i == k) ? cx(1, 0) : cx(0, 0);
        }
    CVector u = least_squares(m, rhs);
    double resid = vnorm2(vsub(m.apply(u), rhs));
    if (resid > 1e-10)
        throw MissingUnit("no unit provided and none derivable (residual " +
                          std::to_string(resid) + ")");
    return u;
}

}  // namespace

Algebra algebra_from_spec(const nlohmann::json& spec) {
    if (spec.contains("kind")) {
        std::string kind = spec.at("kind").get<std::string>();
        NormKind nk = parse_norm_kind(spec);
        if (kind == "matrix") return matrix_algebra(spec.at("n").get<int>(), nk);
        if (kind == "upper_triangular") return upper_triangular_algebra(spec.at("n").get<int>(), nk);
        if (kind == "dual_numbers") return dual_numbers(nk);
        if (kind == "direct_sum") {
            const auto& parts = spec.at("summands");
            if (parts.size() != 2) throw DimensionMismatch("direct_sum expects two summands");
            Algebra a = algebra_from_spec(parts[0]);
            Algebra b = algebra_from_spec(parts[1]);
            return direct_sum(a, b, nk);
        }
        throw DimensionMismatch("unknown algebra generator kind: " + kind);
    }

    int d = spec.at("dim").get<int>();
    if (d <= 0) throw DimensionMismatch("dim must be positive");
    std::vector<cx> structure = zero_tensor(d);
    if (spec.contains("structure")) {
        for (const auto& ent : spec.at("structure")) {
            if (ent.size() != 5) throw DimensionMismatch("structure entries are [i,j,k,re,im]");
            int i = ent[0].get<int>(), j = ent[1].get<int>(), k = ent[2].get<int>();
            if (i < 0 || i >= d || j < 0 || j >= d || k < 0 || k >= d)
                throw DimensionMismatch("structure index out of range");
            set_structure(structure, d, i, j, k, cx(ent[3].get<double>(), ent[4].get<double>()));
        }
    }
    CVector unit;
    if (spec.contains("unit")) {
        for (const auto& z : spec.at("unit")) unit.push_back(cx(z[0].get<double>(), z[1].get<double>()));
        if (static_cast<int>(unit.size()) != d) throw DimensionMismatch("unit has wrong length");
    } else {
        unit = derive_unit(d, structure);
    }
    std::vector<std::string> labels;
    if (spec.contains("basis"))
        for (const auto& l : spec.at("basis")) labels.push_back(l.get<std::string>());
    return Algebra(d, std::move(structure), std::move(unit), parse_norm_kind(spec),
                   parse_weights(spec), std::move(labels));
}

Algebra make_algebra(const nlohmann::json& spec) {
    Algebra a = algebra_from_spec(spec);
    ViolationReport rep = validate(a);
    if (rep.ok()) return a;
    for (const Violation& v : rep.items) {
        if (v.check == "associativity") {
            // recover the worst triple for the typed error
            int i = 0, j = 0, l = 0;
            std::sscanf(v.where.c_str(), "(%d,%d,%d)", &i, &j, &l);
            throw AssociativityViolation(i, j, l, v.residual);
        }
    }
    for (const Violation& v : rep.items)
        if (v.check == "unit_axiom" || v.check == "unit_norm")
            throw MissingUnit("unit axiom fails: " + v.where + " residual " +
                              std::to_string(v.residual));
    throw InvalidModel("algebra spec invalid: " + rep.summary());
}

Bimodule bimodule_from_spec(const nlohmann::json& spec, std::shared_ptr<const Algebra> a) {
    if (spec.is_string() && spec.get<std::string>() == "self") return Bimodule::self_module(a);
    if (!spec.is_object()) throw DimensionMismatch("bimodule spec must be \"self\" or an object");
    int dx = spec.at("dim").get<int>();
    int da = a->dim();
    std::vector<cx> left(static_cast<size_t>(da) * dx * dx, cx(0, 0));
    std::vector<cx> right(static_cast<size_t>(dx) * da * dx, cx(0, 0));
    for (const auto& ent : spec.at("left")) {
        int i = ent[0].get<int>(), j = ent[1].get<int>(), k = ent[2].get<int>();
        if (i < 0 || i >= da || j < 0 || j >= dx || k < 0 || k >= dx)
            throw DimensionMismatch("left action index out of range");
        left[(static_cast<size_t>(i) * dx + j) * dx + k] = cx(ent[3].get<double>(), ent[4].get<double>());
    }
    for (const auto& ent : spec.at("right")) {
        int j = ent[0].get<int>(), i = ent[1].get<int>(), k = ent[2].get<int>();
        if (i < 0 || i >= da || j < 0 || j >= dx || k < 0 || k >= dx)
            throw DimensionMismatch("right action index out of range");
        right[(static_cast<size_t>(j) * da + i) * dx + k] =
            cx(ent[3].get<double>(), ent[4].get<double>());
    }
    NormKind nk = spec.contains("norm") ? norm_kind_from_string(spec.at("norm").get<std::string>())
                                        : NormKind::entrywise_max;
    return Bimodule(std::move(a), dx, std::move(left), std::move(right), nk, parse_weights(spec));
}

// ============================================================================
// Sampling
// ============================================================================

CVector sample_element(const Algebra& a, Rng& rng, double norm_lo, double norm_hi) {
    if (!(norm_lo > 0) || !(norm_hi >= norm_lo))
        throw InvalidModel("sample_element: need 0 < norm_lo <= norm_hi");
    for (;;) {
        CVector z(a.dim());
        for (int i = 0; i < a.dim(); ++i) z[i] = rng.gaussian_complex();
        double n = a.norm(z);
        if (n < 1e-300) continue;  // essentially impossible
        double target = rng.log_uniform(norm_lo, norm_hi);
        return vscale(cx(target / n, 0), z);
    }
}

}  // namespace hyerslab
