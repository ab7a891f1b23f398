#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "nfmodel/lattice.hpp"
#include "nfmodel/short_basis.hpp"

namespace nfmodel {

// Parameters of a model: r equations of degree <= d in r variables for a
// field of degree n, over the C = binom(d+r, r) monomials of degree <= d.
// Counts are big integers so the same struct serves the counting bounds,
// where C is astronomically large and never materialized.
struct ModelParams {
    unsigned n = 0, r = 0, d = 0;
    mpz_class C, ell, keep;  // ell = C - n, keep = ell + 1 - n
    std::string policy;      // "paper" | "padded" | "explicit"
    // n(r+1) <= binom(2r, r) <= 4 n (r+1): holds whenever r was chosen
    // minimal with d = r; reported so callers can see when the asymptotic
    // parameter regime is in force.
    bool growth_inequalities_hold = false;
};

struct PolicySpec {
    std::string kind = "padded";  // "paper" | "padded" | "explicit"
    unsigned r = 0, d = 0;        // used by "explicit"
    bool allow_small_d = false;
};

inline ModelParams choose_parameters(unsigned n, const PolicySpec& spec) {
    if (n < 2) throw input_error("choose_parameters: n >= 2 required");
    ModelParams p;
    p.n = n;
    p.policy = spec.kind;
    if (spec.kind == "paper" || spec.kind == "padded") {
        bool padded = (spec.kind == "padded");
        unsigned r = 0;
        for (unsigned cand = 1; cand <= 256; ++cand) {
            unsigned d = padded ? std::max(cand, 5u) : cand;
            if (binomial(d + cand, cand) >= mpz_class(n) * (cand + 1)) {
                r = cand;
                break;
            }
        }
        if (r == 0) throw input_error("choose_parameters: no admissible r found");
        p.r = r;
        p.d = padded ? std::max(r, 5u) : r;
    } else if (spec.kind == "explicit") {
        if (spec.r < 1 || spec.d < 1)
            throw input_error("choose_parameters: explicit policy needs r >= 1 and d >= 1");
        p.r = spec.r;
        p.d = spec.d;
    } else {
        throw input_error("choose_parameters: unknown policy " + spec.kind);
    }
    if (p.d < 5 && !spec.allow_small_d)
        throw input_error(
            "choose_parameters: d < 5 (small n); use the padded policy or allow_small_d");
    p.C = binomial(p.d + p.r, p.r);
    p.ell = p.C - n;
    p.keep = p.ell + 1 - n;
    if (mpz_class(n) * (p.r + 1) > p.C)
        throw input_error("choose_parameters: n(r+1) <= binom(d+r, r) violated");
    if (p.keep < p.r)
        throw input_error("choose_parameters: fewer relations than equations (keep < r)");
    p.growth_inequalities_hold =
        binomial(2 * p.r, p.r) >= mpz_class(n) * (p.r + 1) &&
        binomial(2 * p.r, p.r) <= 4 * mpz_class(n) * (p.r + 1);
    // with d = r and minimal r both inequalities are provable for n >= 2
    if (spec.kind == "paper" && !p.growth_inequalities_hold)
        throw integrity_error("choose_parameters: minimal-r growth inequalities failed");
    return p;
}

// Exponent vectors of total degree <= d in r variables: ascending total
// degree, lexicographic within a degree. Univariate gives 1, x, x^2, ...
inline std::vector<std::vector<unsigned>> monomials(unsigned r, unsigned d) {
    std::vector<std::vector<unsigned>> out;
    for (unsigned deg = 0; deg <= d; ++deg) {
        std::vector<std::vector<unsigned>> level;
        std::vector<unsigned> tmp(r, 0);
        auto gen = [&](auto&& self, unsigned pos, unsigned left) -> void {
            if (pos == r) {
                if (left == 0) level.push_back(tmp);
                return;
            }
            for (unsigned e = 0; e <= left; ++e) {
                tmp[pos] = e;
                self(self, pos + 1, left - e);
            }
            tmp[pos] = 0;
        };
        gen(gen, 0, deg);
        std::sort(level.begin(), level.end());
        for (auto& m : level) out.push_back(std::move(m));
    }
    return out;
}

inline std::vector<std::vector<unsigned>> monomials(const ModelParams& p) {
    if (p.C > 200000)
        throw input_error("monomials: parameter set too large to materialize");
    return monomials(p.r, p.d);
}

inline std::vector<FieldElement> kappa_from_u(const std::vector<FieldElement>& alphas,
                                              const ZMat& u, const NumberField& K) {
    size_t r = u.cols();
    std::vector<FieldElement> kappas(r, K.zero());
    for (size_t j = 0; j < r; ++j) {
        FieldElement k = K.zero();
        for (size_t i = 0; i < u.rows(); ++i)
            if (u(i, j) != 0) k = element_add(k, element_scale(mpq_class(u(i, j)), alphas[i]));
        kappas[j] = k;
    }
    return kappas;
}

namespace detail {

// kappa_j^t for 0 <= t <= d, reused across all monomial evaluations.
inline std::vector<std::vector<FieldElement>> power_table(const std::vector<FieldElement>& kappas,
                                                          unsigned d, const NumberField& K) {
    std::vector<std::vector<FieldElement>> pow(kappas.size());
    for (size_t j = 0; j < kappas.size(); ++j) {
        pow[j].resize(d + 1);
        pow[j][0] = K.one();
        for (unsigned t = 1; t <= d; ++t) pow[j][t] = element_mul(pow[j][t - 1], kappas[j], K);
    }
    return pow;
}

inline FieldElement monomial_value(const std::vector<unsigned>& exps,
                                   const std::vector<std::vector<FieldElement>>& pow,
                                   const NumberField& K) {
    FieldElement v = K.one();
    for (size_t j = 0; j < exps.size(); ++j)
        if (exps[j] > 0) v = element_mul(v, pow[j][exps[j]], K);
    return v;
}

// d(m)/dx_j evaluated through the power table: e_j * m / x_j.
inline FieldElement monomial_partial(const std::vector<unsigned>& exps, size_t j,
                                     const std::vector<std::vector<FieldElement>>& pow,
                                     const NumberField& K) {
    if (exps[j] == 0) return K.zero();
    FieldElement v = element_scale(mpq_class(exps[j]), pow[j][exps[j] - 1]);
    for (size_t t = 0; t < exps.size(); ++t) {
        if (t == j || exps[t] == 0) continue;
        v = element_mul(v, pow[t][exps[t]], K);
    }
    return v;
}

inline ZVec integral_coords(const FieldElement& a) {
    ZVec out(a.coords.size());
    for (size_t i = 0; i < a.coords.size(); ++i) {
        if (a.coords[i].get_den() != 1)
            throw integrity_error("expected integral coordinates");
        out[i] = a.coords[i].get_num();
    }
    return out;
}

}  // namespace detail

// n x C integer matrix: column per monomial m, entries the integral-basis
// coordinates of m(kappa).
inline ZMat evaluation_matrix(const NumberField& K, const std::vector<FieldElement>& kappas,
                              const std::vector<std::vector<unsigned>>& monos, unsigned d) {
    auto pow = detail::power_table(kappas, d, K);
    ZMat m(K.n, monos.size());
    for (size_t c = 0; c < monos.size(); ++c) {
        ZVec col = detail::integral_coords(detail::monomial_value(monos[c], pow, K));
        for (size_t i = 0; i < K.n; ++i) m(i, c) = col[i];
    }
    return m;
}

// n(r+1) x C matrix stacking values and all first partials; its rank equals
// the rank of the interpolation matrix of the doubled point scheme, since
// the two differ by the invertible embedding matrix on the left.
inline ZMat first_order_matrix(const NumberField& K, const std::vector<FieldElement>& kappas,
                               const std::vector<std::vector<unsigned>>& monos, unsigned d) {
    size_t r = kappas.size();
    auto pow = detail::power_table(kappas, d, K);
    ZMat m((r + 1) * K.n, monos.size());
    for (size_t c = 0; c < monos.size(); ++c) {
        ZVec col = detail::integral_coords(detail::monomial_value(monos[c], pow, K));
        for (size_t i = 0; i < K.n; ++i) m(i, c) = col[i];
        for (size_t j = 0; j < r; ++j) {
            ZVec dcol = detail::integral_coords(detail::monomial_partial(monos[c], j, pow, K));
            for (size_t i = 0; i < K.n; ++i) m((j + 1) * K.n + i, c) = dcol[i];
        }
    }
    return m;
}

// The doubled scheme imposes independent conditions in degree <= d iff this
// rank is n(r+1); that certifies the points are distinct and the evaluation
// morphism is a closed embedding.
inline std::pair<bool, size_t> well_poised_check(const NumberField& K,
                                                 const std::vector<FieldElement>& kappas,
                                                 const std::vector<std::vector<unsigned>>& monos,
                                                 unsigned d) {
    ZMat m = first_order_matrix(K, kappas, monos, d);
    size_t rank = exact_rank(m);
    return {rank == m.rows(), rank};
}

struct SearchTrace {
    uint64_t tried = 0;
    std::vector<ZMat> rejected;  // first few only
};

namespace detail {

inline bool u_candidate_passes(const NumberField& K, const std::vector<FieldElement>& alphas,
                               const ZMat& u, const std::vector<std::vector<unsigned>>& monos,
                               unsigned d) {
    auto kappas = kappa_from_u(alphas, u, K);
    // cheap necessary condition first: the evaluation map must reach rank n
    ZMat ev = evaluation_matrix(K, kappas, monos, d);
    if (exact_rank(ev) != K.n) return false;
    return well_poised_check(K, kappas, monos, d).first;
}

}  // namespace detail

// First u (deterministic order) in [0, d n (r+1)]^(n x r) whose doubled
// point scheme is well poised. "lex": shells of increasing max entry,
// odometer order within a shell (u_{1,1} fastest, column-major). "random":
// seeded uniform draws from the full box.
inline ZMat search_u(const NumberField& K, const BalancedSet& alphas, const ModelParams& params,
                     const std::vector<std::vector<unsigned>>& monos, const std::string& strategy,
                     uint64_t seed, uint64_t max_tries, SearchTrace* trace = nullptr) {
    size_t n = K.n, r = params.r;
    unsigned long box =
        static_cast<unsigned long>(params.d) * n * (r + 1);  // inclusive upper bound
    uint64_t tried = 0;
    auto attempt = [&](const ZMat& u) -> bool {
        ++tried;
        bool ok = detail::u_candidate_passes(K, alphas.elems, u, monos, params.d);
        if (trace) {
            trace->tried = tried;
            if (!ok && trace->rejected.size() < 64) trace->rejected.push_back(u);
        }
        return ok;
    };

    if (strategy == "lex") {
        size_t cells = n * r;
        for (unsigned long shell = 0; shell <= box; ++shell) {
            std::vector<unsigned long> digits(cells, 0);
            for (;;) {
                unsigned long mx = 0;
                for (auto v : digits) mx = std::max(mx, v);
                if (mx == shell) {
                    ZMat u(n, r);
                    for (size_t t = 0; t < cells; ++t)
                        u(t % n, t / n) = static_cast<long>(digits[t]);
                    if (tried >= max_tries)
                        throw search_exhausted("search_u: max tries exhausted", tried);
                    if (attempt(u)) return u;
                }
                size_t pos = 0;
                while (pos < cells && digits[pos] == shell) {
                    digits[pos] = 0;
                    ++pos;
                }
                if (pos == cells) break;
                ++digits[pos];
            }
        }
        throw search_exhausted("search_u: full box exhausted without a well-poised u", tried);
    }
    if (strategy == "random") {
        Rng rng(seed);
        while (tried < max_tries) {
            ZMat u(n, r);
            for (size_t j = 0; j < r; ++j)
                for (size_t i = 0; i < n; ++i)
                    u(i, j) = static_cast<long>(rng.below(box + 1));
            if (attempt(u)) return u;
        }
        throw search_exhausted("search_u: max tries exhausted", tried);
    }
    throw input_error("search_u: unknown strategy " + strategy);
}

struct RelationBasis {
    IntLattice lattice;  // the kernel lattice itself (HNF basis)
    ZMat shortened;      // LLL-reduced, sorted by (norm^2, lex), sign-normalized
};

namespace detail {

inline mpz_class row_norm_sq(const ZMat& m, size_t i) {
    mpz_class t = 0;
    for (size_t j = 0; j < m.cols(); ++j) t += m(i, j) * m(i, j);
    return t;
}

// leading coefficient (last nonzero in the graded monomial order) positive
inline void sign_normalize_row(ZVec& row) {
    for (size_t j = row.size(); j-- > 0;) {
        if (row[j] == 0) continue;
        if (row[j] < 0)
            for (auto& x : row) x = -x;
        return;
    }
}

}  // namespace detail

// Kernel of the evaluation map intersected with the integer monomial
// lattice, LLL-shortened in the exact l2 form of the monomial basis.
inline RelationBasis relation_basis(const ZMat& eval_m, const ModelParams& params) {
    IntLattice L = integer_kernel(eval_m);
    if (mpz_class(L.basis->rows()) != params.ell)
        throw integrity_error("relation_basis: kernel dimension != C - n (rank failure upstream)");
    ReductionResult red = lll_reduce(L);
    std::vector<ZVec> rows;
    for (size_t i = 0; i < red.reduced_basis.rows(); ++i) {
        ZVec row = red.reduced_basis.row(i);
        detail::sign_normalize_row(row);
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [](const ZVec& a, const ZVec& b) {
        mpz_class na = 0, nb = 0;
        for (const auto& x : a) na += x * x;
        for (const auto& x : b) nb += x * x;
        if (na != nb) return na < nb;
        return a < b;
    });
    RelationBasis out;
    out.lattice = std::move(L);
    out.shortened = ZMat(rows.size(), eval_m.cols());
    for (size_t i = 0; i < rows.size(); ++i) out.shortened.set_row(i, rows[i]);
    return out;
}

struct EquationSelection {
    std::vector<ZVec> equations;        // dense coefficient vectors over the monomial list
    std::vector<size_t> relation_indices;  // positions in the shortened list, selection order
    bool jacobian_full_rank = false;
};

namespace detail {

inline FieldElement equation_partial(const ZVec& coeffs,
                                     const std::vector<std::vector<unsigned>>& monos, size_t j,
                                     const std::vector<std::vector<FieldElement>>& pow,
                                     const NumberField& K) {
    FieldElement acc = K.zero();
    for (size_t c = 0; c < coeffs.size(); ++c) {
        if (coeffs[c] == 0 || monos[c][j] == 0) continue;
        acc = element_add(acc,
                          element_scale(mpq_class(coeffs[c]), monomial_partial(monos[c], j, pow, K)));
    }
    return acc;
}

inline FieldElement equation_value(const ZVec& coeffs,
                                   const std::vector<std::vector<unsigned>>& monos,
                                   const std::vector<std::vector<FieldElement>>& pow,
                                   const NumberField& K) {
    FieldElement acc = K.zero();
    for (size_t c = 0; c < coeffs.size(); ++c) {
        if (coeffs[c] == 0) continue;
        acc = element_add(acc, element_scale(mpq_class(coeffs[c]), monomial_value(monos[c], pow, K)));
    }
    return acc;
}

}  // namespace detail

// Restrict to the first keep relations and pick r of them whose Jacobian
// minor at kappa is invertible, by exact Gaussian elimination over K with
// the first-nonzero-pivot rule.
inline EquationSelection select_equations(const ZMat& shortened,
                                          const std::vector<FieldElement>& kappas,
                                          const std::vector<std::vector<unsigned>>& monos,
                                          const NumberField& K, const ModelParams& params) {
    if (params.keep < params.r) throw input_error("select_equations: keep < r");
    if (!params.keep.fits_ulong_p()) throw input_error("select_equations: keep out of range");
    size_t keep = params.keep.get_ui();
    if (keep > shortened.rows()) throw input_error("select_equations: not enough relations");
    size_t r = params.r;
    auto pow = detail::power_table(kappas, params.d, K);

    // keep x r Jacobian over K
    std::vector<std::vector<FieldElement>> jac(keep, std::vector<FieldElement>(r, K.zero()));
    for (size_t i = 0; i < keep; ++i) {
        ZVec row = shortened.row(i);
        for (size_t j = 0; j < r; ++j)
            jac[i][j] = detail::equation_partial(row, monos, j, pow, K);
    }

    EquationSelection out;
    std::vector<bool> used(keep, false);
    for (size_t col = 0; col < r; ++col) {
        size_t pivot = keep;
        for (size_t i = 0; i < keep; ++i) {
            if (used[i]) continue;
            if (!jac[i][col].is_zero()) {
                pivot = i;
                break;
            }
        }
        if (pivot == keep) {
            out.jacobian_full_rank = false;
            return out;
        }
        used[pivot] = true;
        out.relation_indices.push_back(pivot);
        out.equations.push_back(shortened.row(pivot));
        for (size_t i = 0; i < keep; ++i) {
            if (used[i] || jac[i][col].is_zero()) continue;
            FieldElement f = element_div(jac[i][col], jac[pivot][col], K);
            for (size_t j = col; j < r; ++j)
                jac[i][j] = element_sub(jac[i][j], element_mul(f, jac[pivot][j], K));
        }
    }
    out.jacobian_full_rank = true;
    return out;
}

// Certified height data. frakD bounds every entry of the Gram of the
// evaluation matrix; B bounds the coefficients of the first keep equations.
struct HeightBound {
    mpq_class frakD;
    bool frakD_exact = false;
    mpq_class B_sq;  // upper bound for B^2
    bool B_sq_exact = false;
    mpq_class B_upper;
};

// Discriminant-based bound: frakD = C (n^2 d (r+1))^(2d) |disc|^(4d/n),
// B = ell^(ell/2n) C^(1/2) (n^2 d (r+1))^d |disc|^(2d/n). Fractional powers
// are certified upward by integer root extraction.
inline HeightBound height_bound(const ModelParams& p, const mpz_class& dK_abs) {
    HeightBound out;
    mpz_class base = mpz_class(p.n) * p.n * p.d * (p.r + 1);
    mpz_class base_2d = pow_z(base, 2 * p.d);
    bool exact_disc = false;
    mpz_class disc_pow = root_ceil(pow_z(dK_abs, 4 * p.d), p.n, &exact_disc);
    out.frakD = mpq_class(p.C * base_2d * disc_pow);
    out.frakD_exact = exact_disc;
    if (!p.ell.fits_ulong_p() || p.ell > 100000)
        throw input_error("height_bound: ell too large for exact evaluation");
    bool exact_ell = false;
    mpz_class ell_pow = root_ceil(pow_z(p.ell, p.ell.get_ui()), p.n, &exact_ell);
    out.B_sq = mpq_class(ell_pow * p.C * base_2d * disc_pow);
    out.B_sq_exact = exact_ell && exact_disc;
    out.B_upper = sqrt_upper(out.B_sq, 128);
    return out;
}

// A-posteriori variant: the discriminant-power bound on the alpha norms is
// replaced by a certified achieved bound (and the u box bound is kept).
inline HeightBound height_bound_achieved(const ModelParams& p, const mpq_class& alpha_norm_ub) {
    HeightBound out;
    mpz_class base = mpz_class(p.n) * p.n * p.d * (p.r + 1);
    mpz_class base_2d = pow_z(base, 2 * p.d);
    mpq_class norm_2d = pow_q(alpha_norm_ub, 2 * p.d);
    out.frakD = mpq_class(p.C * base_2d) * norm_2d;
    out.frakD_exact = true;  // exact rational, no root extraction
    if (!p.ell.fits_ulong_p() || p.ell > 100000)
        throw input_error("height_bound_achieved: ell too large for exact evaluation");
    bool exact_ell = false;
    mpz_class ell_pow = root_ceil(pow_z(p.ell, p.ell.get_ui()), p.n, &exact_ell);
    out.B_sq = mpq_class(ell_pow * p.C) * mpq_class(base_2d) * norm_2d;
    out.B_sq_exact = exact_ell;
    out.B_upper = sqrt_upper(out.B_sq, 128);
    return out;
}

struct VerificationReport {
    bool well_poised = false;
    size_t eval_rank = 0;
    bool vanishing = false;
    bool jacobian_nonzero = false;
    size_t residue_rank = 0;
    mpz_class vol_relation_sq;
    bool vol_identity_ok = false;
    bool vol_bound_ok = false;
    mpq_class frakD;        // achieved-norm variant used in the volume bound
    mpq_class coeff_bound;  // achieved-norm coefficient bound
    mpz_class max_abs_coeff;
    mpq_class ratio;  // max_abs_coeff / coeff_bound
    bool coeff_bound_ok = false;
    bool accepted = false;
};

struct SmallModel {
    ModelParams params;
    std::vector<std::vector<unsigned>> monos;
    BalancedSet alphas;
    ZMat u;
    std::vector<FieldElement> kappas;
    std::vector<ZVec> equations;
    std::vector<size_t> relation_indices;
    std::string strategy;
    uint64_t seed = 0;
    unsigned precision = 0;
    uint64_t u_rejections = 0;
    std::vector<ZMat> rejected_us;
    VerificationReport report;
};

namespace detail {

inline bool jacobian_nonsingular(const std::vector<ZVec>& equations,
                                 const std::vector<FieldElement>& kappas,
                                 const std::vector<std::vector<unsigned>>& monos,
                                 const NumberField& K, unsigned d) {
    size_t r = kappas.size();
    if (equations.size() != r) return false;
    auto pow = power_table(kappas, d, K);
    std::vector<std::vector<FieldElement>> m(r, std::vector<FieldElement>(r, K.zero()));
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < r; ++j)
            m[i][j] = equation_partial(equations[i], monos, j, pow, K);
    for (size_t col = 0; col < r; ++col) {
        size_t pivot = r;
        for (size_t i = col; i < r; ++i)
            if (!m[i][col].is_zero()) {
                pivot = i;
                break;
            }
        if (pivot == r) return false;
        std::swap(m[pivot], m[col]);
        for (size_t i = col + 1; i < r; ++i) {
            if (m[i][col].is_zero()) continue;
            FieldElement f = element_div(m[i][col], m[col][col], K);
            for (size_t j = col; j < r; ++j)
                m[i][j] = element_sub(m[i][j], element_mul(f, m[col][j], K));
        }
    }
    return true;
}

}  // namespace detail

// Full recomputation from the model data; never trusts the stored report.
// Accepts iff well-poisedness, exact vanishing, Jacobian invertibility and
// both rank-n conditions hold. Volume and height checks are recorded.
inline VerificationReport verify_model(const SmallModel& model, const NumberField& K,
                                       unsigned precision = 128) {
    VerificationReport rep;
    const ModelParams& p = model.params;
    auto kappas = kappa_from_u(model.alphas.elems, model.u, K);

    auto [wp, rank1] = well_poised_check(K, kappas, model.monos, p.d);
    rep.well_poised = wp;

    ZMat ev = evaluation_matrix(K, kappas, model.monos, p.d);
    rep.eval_rank = exact_rank(ev);

    auto pow = detail::power_table(kappas, p.d, K);
    rep.vanishing = !model.equations.empty();
    for (const auto& eq : model.equations) {
        if (eq.size() != model.monos.size() ||
            !detail::equation_value(eq, model.monos, pow, K).is_zero()) {
            rep.vanishing = false;
            break;
        }
    }

    rep.jacobian_nonzero = detail::jacobian_nonsingular(model.equations, kappas, model.monos, K, p.d);

    {
        std::vector<FieldElement> values;
        values.reserve(model.monos.size());
        for (const auto& m : model.monos)
            values.push_back(detail::monomial_value(m, pow, K));
        rep.residue_rank = rank_of_span(values, K);
    }

    rep.max_abs_coeff = 0;
    for (const auto& eq : model.equations)
        for (const auto& c : eq)
            if (cmpabs(c, rep.max_abs_coeff) > 0) rep.max_abs_coeff = abs(c);

    if (rep.eval_rank == K.n) {
        RelationBasis rel = relation_basis(ev, p);
        mpq_class vol = gram_det(rel.lattice);
        rep.vol_relation_sq = vol.get_num();  // integer for integer bases
        IntLattice comp = orthogonal_complement(rel.lattice);
        rep.vol_identity_ok = (gram_det(comp) == vol);

        // certified norm bound for the alphas at the requested precision;
        // a failed certification only bumps the precision, never crashes
        mpq_class norm_ub = 0;
        unsigned prec = precision;
        for (int attempt = 0;; ++attempt) {
            try {
                RootEnclosures roots = complex_roots(K.f, prec);
                norm_ub = 0;
                for (const auto& a : model.alphas.elems)
                    norm_ub = std::max(norm_ub, sup_norm_upper(a, roots, K));
                break;
            } catch (const precision_error&) {
                if (attempt >= 4) throw;
                prec *= 2;
            }
        }
        HeightBound hb = height_bound_achieved(p, norm_ub);
        rep.frakD = hb.frakD;
        rep.coeff_bound = hb.B_upper;
        rep.vol_bound_ok = (vol <= pow_q(hb.frakD, K.n));
        if (hb.B_upper > 0) {
            rep.ratio = mpq_class(rep.max_abs_coeff) / hb.B_upper;
            rep.ratio.canonicalize();
        }
        if (!p.ell.fits_ulong_p()) throw input_error("verify_model: ell too large");
        rep.coeff_bound_ok = (mpq_class(rep.max_abs_coeff * rep.max_abs_coeff) <=
                              mpq_class(pow2_z(p.ell.get_ui())) * hb.B_sq);
    }

    rep.accepted = rep.well_poised && rep.vanishing && rep.jacobian_nonzero &&
                   rep.eval_rank == K.n && rep.residue_rank == K.n;
    return rep;
}

struct BuildOptions {
    std::string strategy = "lex";
    uint64_t seed = 0;
    uint64_t max_tries = 20000;
    unsigned precision = 128;
};

// Pipeline entry point with a fixed u (the caller owns the choice).
inline SmallModel build_model_with_u(const NumberField& K, const ModelParams& params,
                                     const BalancedSet& alphas, const ZMat& u,
                                     const BuildOptions& opt) {
    SmallModel model;
    model.params = params;
    model.monos = monomials(params);
    model.alphas = alphas;
    model.u = u;
    model.strategy = "explicit-u";
    model.seed = opt.seed;
    model.precision = opt.precision;
    model.kappas = kappa_from_u(alphas.elems, u, K);

    ZMat ev = evaluation_matrix(K, model.kappas, model.monos, params.d);
    if (exact_rank(ev) != K.n)
        throw input_error("build_model_with_u: evaluation map does not reach rank n");
    auto [wp, rank] = well_poised_check(K, model.kappas, model.monos, params.d);
    if (!wp) throw input_error("build_model_with_u: doubled scheme is not well poised");

    RelationBasis rel = relation_basis(ev, params);
    EquationSelection sel = select_equations(rel.shortened, model.kappas, model.monos, K, params);
    if (!sel.jacobian_full_rank)
        throw input_error("build_model_with_u: Jacobian rank below r for this u");
    model.equations = std::move(sel.equations);
    model.relation_indices = std::move(sel.relation_indices);
    model.report = verify_model(model, K, opt.precision);
    return model;
}

// End-to-end pipeline: balanced set, u search, relation lattice, equation
// selection, then a full independent verification.
inline SmallModel build_model(const NumberField& K, const ModelParams& params,
                              const BuildOptions& opt) {
    auto [alphas, roots] = balanced_set_auto(K, opt.precision);
    auto monos = monomials(params);

    SearchTrace trace;
    ZMat u = search_u(K, alphas, params, monos, opt.strategy, opt.seed, opt.max_tries, &trace);
    auto kappas = kappa_from_u(alphas.elems, u, K);
    ZMat ev = evaluation_matrix(K, kappas, monos, params.d);
    RelationBasis rel = relation_basis(ev, params);
    EquationSelection sel = select_equations(rel.shortened, kappas, monos, K, params);
    if (!sel.jacobian_full_rank) {
        // For a well-poised doubled scheme the kept equations always carry an
        // invertible r x r minor (cotangent surjection), so this path means
        // corrupted state rather than an unlucky u.
        throw integrity_error("build_model: well-poised u with deficient Jacobian");
    }
    SmallModel model;
    model.params = params;
    model.monos = monos;
    model.alphas = alphas;
    model.u = u;
    model.kappas = std::move(kappas);
    model.equations = std::move(sel.equations);
    model.relation_indices = std::move(sel.relation_indices);
    model.strategy = opt.strategy;
    model.seed = opt.seed;
    model.precision = opt.precision;
    model.u_rejections = trace.tried - 1;
    model.rejected_us = trace.rejected;
    model.report = verify_model(model, K, opt.precision);
    return model;
}

}  // namespace nfmodel
