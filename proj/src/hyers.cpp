#include "hyerslab/hyers.hpp"

#include <cmath>

namespace hyerslab {

std::string to_string(Direction d) {
    return d == Direction::ascending ? "ascending" : "descending";
}

Direction direction_from_string(const std::string& s) {
    if (s == "ascending") return Direction::ascending;
    if (s == "descending") return Direction::descending;
    throw InvalidModel("unknown direction: " + s);
}

std::string to_string(HyersStatus s) {
    switch (s) {
        case HyersStatus::converged: return "converged";
        case HyersStatus::no_convergence: return "no_convergence";
        case HyersStatus::overflow: return "overflow";
    }
    return "no_convergence";
}

double ControlFunction::operator()(const Algebra& alg, const CVector& a, const CVector& b,
                                   const CVector& c) const {
    switch (kind) {
        case Kind::constant: return theta;
        case Kind::power:
            return theta * (pow_zero(alg.norm(a), p) + pow_zero(alg.norm(b), p) +
                            pow_zero(alg.norm(c), p));
        case Kind::custom: {
            double v = custom(a, b, c);
            if (v < 0) throw InvalidModel("control function must be nonnegative");
            return v;
        }
    }
    return 0;
}

// ============================================================================
// tilde_phi
// ============================================================================

namespace {

// i-th series term. proof_scaling couples the coefficient with oppositely
// scaled arguments; as_printed keeps 2^-i coefficients in both directions and
// leaves ascending arguments unscaled.
double series_term(const ControlFunction& phi, const Algebra& alg, const CVector& a,
                   const CVector& b, const CVector& c, Direction dir, SeriesVariant variant,
                   int i) {
    if (dir == Direction::ascending) {
        if (variant == SeriesVariant::as_printed)
            return 0.5 * std::ldexp(phi(alg, a, b, c), -i);
        return 0.5 * std::ldexp(phi(alg, vldexp(a, i), vldexp(b, i), vldexp(c, i)), -i);
    }
    int coef = variant == SeriesVariant::as_printed ? -i : i;
    return 0.5 * std::ldexp(phi(alg, vldexp(a, -i), vldexp(b, -i), vldexp(c, -i)), coef);
}

}  // namespace

TildePhiResult tilde_phi(const ControlFunction& phi, const Algebra& alg, const CVector& a,
                         const CVector& b, const CVector& c, Direction direction, int n_terms,
                         SeriesVariant variant) {
    if (n_terms < 1) throw InvalidModel("tilde_phi needs n_terms >= 1");
    TildePhiResult res;

    // closed forms for the analytic kinds (proof scaling only)
    bool analytic = variant == SeriesVariant::proof_scaling &&
                    (phi.kind == ControlFunction::Kind::constant ||
                     phi.kind == ControlFunction::Kind::power);
    bool analytic_divergent = false;
    if (analytic) {
        double s0 = phi(alg, a, b, c);
        if (s0 == 0.0) {
            // identically zero series
            res.value = res.partial_sum = res.closed_form = 0.0;
            res.closed_form_rel_gap = 0.0;
            res.converged = true;
            res.terms_used = 1;
            return res;
        }
        if (phi.kind == ControlFunction::Kind::constant) {
            if (direction == Direction::ascending)
                res.closed_form = phi.theta;
            else
                analytic_divergent = true;
        } else {
            double ratio = direction == Direction::ascending ? std::pow(2.0, phi.p - 1.0)
                                                             : std::pow(2.0, 1.0 - phi.p);
            if (ratio >= 1.0) {
                analytic_divergent = true;
            } else if (direction == Direction::ascending) {
                res.closed_form = 0.5 * s0 / (1.0 - ratio);
            } else {
                res.closed_form = 0.5 * s0 * ratio / (1.0 - ratio);
            }
        }
    }

    // partial sums with stagnation stop; the trajectory backs divergence reports
    const int start = direction == Direction::ascending ? 0 : 1;
    const int cap = analytic_divergent ? std::min(n_terms, 64) : n_terms;
    double sum = 0;
    int stagnant = 0;
    double prev_term = -1;
    int ratio_hits = 0;
    bool numeric_divergent = false;
    int i = start;
    for (; i < start + cap; ++i) {
        double t = series_term(phi, alg, a, b, c, direction, variant, i);
        sum += t;
        res.trajectory.push_back(sum);
        res.terms_used = i - start + 1;
        if (!std::isfinite(sum)) {
            numeric_divergent = true;
            break;
        }
        if (sum > 0 && t / sum < 1e-15) {
            if (++stagnant >= 50) break;
        } else {
            stagnant = 0;
        }
        // sustained non-decaying terms: no sum
        if (prev_term > 0 && t >= prev_term * (1.0 - 1e-12) && t > 1e-280) {
            if (++ratio_hits >= 30 && !analytic) {
                numeric_divergent = true;
                break;
            }
        } else {
            ratio_hits = 0;
        }
        prev_term = t;
    }
    res.partial_sum = sum;

    bool stagnated = stagnant >= 50;
    res.converged = analytic ? !analytic_divergent : (stagnated && !numeric_divergent);
    if (analytic && !analytic_divergent && !stagnated && !std::isnan(res.closed_form)) {
        // slow geometric tail hit the term cap; the closed form still stands
        res.converged = true;
    }
    res.value = !std::isnan(res.closed_form) ? res.closed_form : sum;
    if (!std::isnan(res.closed_form) && res.closed_form != 0.0 && stagnated)
        res.closed_form_rel_gap = std::abs(res.partial_sum - res.closed_form) / res.closed_form;
    if (res.converged) res.trajectory.clear();
    return res;
}

double tilde_phi_value(const ControlFunction& phi, const Algebra& alg, const CVector& a,
                       const CVector& b, const CVector& c, Direction direction) {
    TildePhiResult r = tilde_phi(phi, alg, a, b, c, direction);
    if (!r.converged) throw DivergentSeries(r.trajectory);
    return r.value;
}

// ============================================================================
// hyers_limit
// ============================================================================

namespace {

CVector scaled_iterate(const MapUnderTest& f, const CVector& x, Direction dir, int n) {
    if (dir == Direction::ascending) return vldexp(f.apply(vldexp(x, n)), -n);
    return vldexp(f.apply(vldexp(x, -n)), n);
}

// control tail bound covering the step n -> n+1 of the iteration at x
double step_bound(const ControlFunction& phi, const Algebra& alg, const CVector& x, Direction dir,
                  int n) {
    CVector zero(x.size(), cx(0, 0));
    if (dir == Direction::ascending)
        return 0.5 * std::ldexp(phi(alg, vldexp(x, n), vldexp(x, n), zero), -n);
    return 0.5 * std::ldexp(phi(alg, vldexp(x, -(n + 1)), vldexp(x, -(n + 1)), zero), n + 1);
}

}  // namespace

CVector hyers_pointwise(const MapUnderTest& f, const CVector& x, Direction direction, int n_max,
                        double tol, bool* converged) {
    const Bimodule& cod = f.codomain();
    CVector cur = scaled_iterate(f, x, direction, 0);
    if (converged) *converged = false;
    for (int n = 1; n <= n_max; ++n) {
        CVector next = scaled_iterate(f, x, direction, n);
        double move = cod.norm(vsub(next, cur));
        cur = std::move(next);
        if (move < tol * (1.0 + cod.norm(cur))) {
            if (converged) *converged = true;
            break;
        }
    }
    return cur;
}

HyersResult hyers_limit(const MapUnderTest& f, const HyersOptions& opts) {
    if (opts.n_max < 1 || opts.n_max > 50)
        throw InvalidModel("hyers_limit: n_max must lie in [1, 50]");
    if (!(opts.tol > 0)) throw InvalidModel("hyers_limit: tol must be positive");
    const Algebra& dom = f.domain();
    const Bimodule& cod = f.codomain();
    {
        CVector zero(dom.dim(), cx(0, 0));
        if (cod.norm(f.apply(zero)) > 1e-12)
            throw InvalidModel("hyers_limit: f(0) must vanish");
    }

    const int da = dom.dim();
    HyersResult res;
    res.direction = opts.direction;
    res.history.assign(da, {});
    if (opts.control) res.bound_history.assign(da, {});

    // iterate all basis columns in lockstep; stop when every column settles
    std::vector<std::vector<CVector>> iterates(da);
    for (int i = 0; i < da; ++i)
        iterates[i].push_back(scaled_iterate(f, basis_vector(da, i), opts.direction, 0));

    HyersStatus status = HyersStatus::no_convergence;
    int n_final = opts.n_max;
    for (int n = 1; n <= opts.n_max; ++n) {
        bool all_settled = true;
        bool blew_up = false;
        for (int i = 0; i < da; ++i) {
            CVector next = scaled_iterate(f, basis_vector(da, i), opts.direction, n);
            double nn = cod.norm(next);
            double move = cod.norm(vsub(next, iterates[i].back()));
            res.history[i].push_back(move);
            if (opts.control)
                res.bound_history[i].push_back(
                    step_bound(*opts.control, dom, basis_vector(da, i), opts.direction, n - 1));
            iterates[i].push_back(std::move(next));
            if (!std::isfinite(nn) || nn > opts.overflow_limit) blew_up = true;
            if (!(move < opts.tol * (1.0 + nn))) all_settled = false;
        }
        if (blew_up) {
            status = HyersStatus::overflow;
            n_final = n;
            break;
        }
        if (all_settled) {
            status = HyersStatus::converged;
            n_final = n;
            break;
        }
    }
    res.status = status;
    res.iterations_used = n_final;

    res.limit = CMatrix(cod.dim(), da);
    for (int i = 0; i < da; ++i) res.limit.set_column(i, iterates[i].back());

    // observed Cauchy deviations against the control tail bound
    if (opts.control) {
        double worst = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < da; ++i) {
            const auto& bounds = res.bound_history[i];
            for (size_t m = 0; m + 1 < iterates[i].size(); ++m) {
                double tail = 0;
                for (size_t n = m + 1; n < iterates[i].size(); ++n) {
                    tail += bounds[n - 1];
                    double dist = cod.norm(vsub(iterates[i][n], iterates[i][m]));
                    worst = std::max(worst, dist - tail);
                }
            }
        }
        res.cauchy_bound_check = worst;
    }

    if (status == HyersStatus::converged && opts.check_linearity) {
        double tol_pt = std::min(opts.tol, 1e-12);
        auto pointwise = [&](const CVector& x) {
            return hyers_pointwise(f, x, opts.direction, opts.n_max, tol_pt);
        };
        TorusSampler sampler(opts.torus_grid, opts.seed ^ 0x5bd1e995u);
        res.linearity = c_linearity_report(pointwise, dom, cod, sampler, opts.linearity_samples,
                                           opts.linearity_tol, opts.seed);
        res.linearized = res.linearity.linear;
        for (int s = 0; s < opts.linearity_samples; ++s) {
            Rng rng = Rng::substream(opts.seed ^ 0x777ull, static_cast<uint64_t>(s));
            CVector x = sample_element(dom, rng, 0.1, 10.0);
            double gap = cod.norm(vsub(pointwise(x), res.limit.apply(x)));
            res.matrix_agreement = std::max(res.matrix_agreement, gap);
        }
    }
    return res;
}

HyersResult extract_delta(const MapUnderTest& g, const HyersOptions& opts) {
    return hyers_limit(g, opts);
}

}  // namespace hyerslab
