#pragma once

#include <algorithm>
#include <vector>

#include "nfmodel/embeddings.hpp"
#include "nfmodel/lattice.hpp"
#include "nfmodel/nf.hpp"

namespace nfmodel {

// n independent elements of the order with small sup-norms, sorted by
// certified norm upper bound. target encloses |disc|^(2/n); slack_used
// records how much of the 2^((n-1)/2) allowance was actually consumed.
struct BalancedSet {
    std::vector<FieldElement> elems;
    std::vector<QInterval> norm_bounds;
    mpz_class dK_abs;
    QInterval target;
    mpq_class slack_used;
    bool product_step_used = false;
};

struct BalancedSetReport {
    std::vector<mpq_class> ratio_upper;  // certified ||alpha_i|| upper / target lower
    mpq_class slack_sq;                  // allowed slack squared: 2^(n-1)
    bool pass = false;                   // every ||alpha_i|| <= 2^((n-1)/2) |disc|^(2/n), exact
    bool paper_bound_held = false;       // every ||alpha_i|| <= |disc|^(2/n), via upper bounds
};

namespace detail {

// Certified dyadic bounds for x^(1/k), x >= 0 integer.
inline mpq_class nroot_lower(const mpz_class& x, unsigned long k, unsigned long bits) {
    mpz_class scaled = x;
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), k * bits);
    return make_q(root_floor(scaled, k), pow2_z(bits));
}

inline mpq_class nroot_upper(const mpz_class& x, unsigned long k, unsigned long bits) {
    mpz_class scaled = x;
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), k * bits);
    return make_q(root_ceil(scaled, k), pow2_z(bits));
}

inline void sign_normalize(FieldElement& a) {
    for (const auto& c : a.coords) {
        if (c == 0) continue;
        if (c < 0)
            for (auto& x : a.coords) x = -x;
        break;
    }
}

// ||a||^(2n) <= 2^(n(n-1)) * disc^4, the exact form of the slacked bound.
inline bool slacked_bound_holds(const mpq_class& norm_ub, unsigned n, const mpz_class& d_abs) {
    return pow_q(norm_ub, 2 * n) <= mpq_class(pow2_z(static_cast<unsigned long>(n) * (n - 1)) *
                                              pow_z(d_abs, 4));
}

}  // namespace detail

// Constructive balanced set: LLL-reduce the order under the canonical form,
// and if the largest certified norm still exceeds the slacked target, pool in
// pairwise products of the ceil((n+1)/2) shortest vectors and reselect
// greedily by certified norm (independence checked exactly).
inline BalancedSet balanced_independent_set(const NumberField& K, const RootEnclosures& roots,
                                            unsigned precision) {
    CanonicalGram cg = canonical_gram(K, roots);
    ReductionResult red = lll_reduce(IntLattice::from_gram(cg.mid));

    auto element_of_row = [&](const ZMat& m, size_t i) {
        QVec c(K.n);
        for (size_t j = 0; j < K.n; ++j) c[j] = mpq_class(m(i, j));
        FieldElement e(std::move(c));
        detail::sign_normalize(e);
        return e;
    };

    struct Cand {
        FieldElement elem;
        QInterval norm;
    };
    std::vector<Cand> pool;
    for (size_t i = 0; i < K.n; ++i) {
        FieldElement e = element_of_row(red.reduced_basis, i);
        pool.push_back({e, embed(e, roots, K).sup_norm});
    }

    mpz_class d_abs = abs_disc(K);
    BalancedSet out;
    out.dK_abs = d_abs;
    out.target = QInterval(detail::nroot_lower(d_abs * d_abs, K.n, precision),
                           detail::nroot_upper(d_abs * d_abs, K.n, precision));

    mpq_class worst = 0;
    for (const auto& c : pool) worst = std::max(worst, c.norm.hi);
    bool need_products = !detail::slacked_bound_holds(worst, K.n, d_abs);
    if (need_products) {
        out.product_step_used = true;
        std::vector<Cand> sorted = pool;
        std::sort(sorted.begin(), sorted.end(), [](const Cand& a, const Cand& b) {
            if (a.norm.hi != b.norm.hi) return a.norm.hi < b.norm.hi;
            return a.elem.coords < b.elem.coords;
        });
        size_t m = (K.n + 2) / 2;  // ceil((n+1)/2)
        for (size_t i = 0; i < m && i < sorted.size(); ++i)
            for (size_t j = i; j < m && j < sorted.size(); ++j) {
                FieldElement p = element_mul(sorted[i].elem, sorted[j].elem, K);
                detail::sign_normalize(p);
                bool dup = false;
                for (const auto& c : pool)
                    if (c.elem == p) dup = true;
                if (!dup) pool.push_back({p, embed(p, roots, K).sup_norm});
            }
    }

    std::sort(pool.begin(), pool.end(), [](const Cand& a, const Cand& b) {
        if (a.norm.hi != b.norm.hi) return a.norm.hi < b.norm.hi;
        return a.elem.coords < b.elem.coords;
    });

    std::vector<FieldElement> picked;
    for (const auto& c : pool) {
        if (c.elem.is_zero()) continue;
        picked.push_back(c.elem);
        if (rank_of_span(picked, K) < picked.size()) {
            picked.pop_back();
            continue;
        }
        out.elems.push_back(c.elem);
        out.norm_bounds.push_back(c.norm);
        if (out.elems.size() == K.n) break;
    }
    if (out.elems.size() != K.n)
        throw integrity_error(
            "balanced_independent_set: pool did not reach full rank; input is not a ring of "
            "rank n");

    mpq_class target_lb = out.target.lo;
    out.slack_used = 1;
    if (target_lb > 0) {
        for (const auto& nb : out.norm_bounds)
            out.slack_used = std::max(out.slack_used, mpq_class(nb.hi / target_lb));
    }
    return out;
}

inline BalancedSetReport norm_report(const BalancedSet& set, const NumberField& K) {
    BalancedSetReport rep;
    rep.slack_sq = mpq_class(pow2_z(K.n - 1));
    rep.pass = true;
    rep.paper_bound_held = true;
    mpz_class d_abs = set.dK_abs;
    for (const auto& nb : set.norm_bounds) {
        rep.ratio_upper.push_back(set.target.lo > 0 ? mpq_class(nb.hi / set.target.lo)
                                                    : mpq_class(0));
        if (!detail::slacked_bound_holds(nb.hi, K.n, d_abs)) rep.pass = false;
        if (pow_q(nb.hi, K.n) > mpq_class(d_abs * d_abs)) rep.paper_bound_held = false;
    }
    return rep;
}

// Doubling wrapper: recomputes roots at increasing precision until the
// numeric Gram is positive definite and certification succeeds.
inline std::pair<BalancedSet, RootEnclosures> balanced_set_auto(const NumberField& K,
                                                                unsigned precision) {
    unsigned p = precision;
    for (int attempt = 0; attempt < 6; ++attempt) {
        try {
            RootEnclosures roots = complex_roots(K.f, p);
            BalancedSet set = balanced_independent_set(K, roots, p);
            return {std::move(set), std::move(roots)};
        } catch (const precision_error&) {
            p *= 2;
        }
    }
    throw precision_error("balanced_set_auto: precision exhaustion", p);
}

}  // namespace nfmodel
