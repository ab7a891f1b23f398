#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "nfmodel/mat.hpp"
#include "nfmodel/util.hpp"

namespace nfmodel {

// A lattice given either by an integer basis (rows in Z^N under the standard
// inner product) or by an exact rational Gram matrix. Exactly one
// representation is authoritative per instance.
struct IntLattice {
    std::optional<ZMat> basis;
    std::optional<QMat> gram;

    static IntLattice from_basis(ZMat b) {
        IntLattice l;
        l.basis = std::move(b);
        return l;
    }

    static IntLattice from_gram(QMat g) {
        if (g.rows() != g.cols()) throw input_error("IntLattice: Gram matrix must be square");
        for (size_t i = 0; i < g.rows(); ++i)
            for (size_t j = i + 1; j < g.cols(); ++j)
                if (g(i, j) != g(j, i)) throw input_error("IntLattice: Gram matrix not symmetric");
        IntLattice l;
        l.gram = std::move(g);
        return l;
    }

    size_t dim() const { return basis ? basis->rows() : gram->rows(); }
    size_t ambient() const { return basis ? basis->cols() : gram->rows(); }
};

struct ReductionResult {
    ZMat reduced_basis;  // rows; coordinates w.r.t. the input generators for Gram-form inputs
    ZMat transform;      // unimodular, transform * original = reduced
    QMat reduced_gram;
    QVec norms;         // squared norms in basis order (diagonal of reduced_gram)
    QVec norms_sorted;  // the same values, ascending
};

namespace detail {

inline mpz_class divexact_checked(const mpz_class& a, const mpz_class& b) {
    mpz_class q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (r != 0) throw integrity_error("integral LLL: non-exact division");
    return q;
}

// Integral LLL on a positive definite integer Gram matrix (de Weger
// formulation): all state is integral, the Gram matrix is updated in place
// to track the current basis, and h accumulates the unimodular transform.
struct IntegralLll {
    ZMat g;  // current Gram
    ZMat h;  // transform
    size_t n;
    mpz_class dp, dq;  // Lovasz delta = dp/dq
    std::vector<ZVec> lam;
    ZVec d;  // d[m] = Gram determinant of the first m vectors, d[0] = 1
    size_t kmax = 0;

    IntegralLll(ZMat gram, const mpq_class& delta)
        : g(std::move(gram)),
          h(ZMat::identity(g.rows())),
          n(g.rows()),
          dp(delta.get_num()),
          dq(delta.get_den()),
          lam(n, ZVec(n)),
          d(n + 1) {}

    void gso_row(size_t k) {
        for (size_t j = 0; j <= k; ++j) {
            mpz_class u = g(k, j);
            for (size_t i = 0; i < j; ++i)
                u = divexact_checked(d[i + 1] * u - lam[k][i] * lam[j][i], d[i]);
            if (j < k)
                lam[k][j] = u;
            else {
                d[k + 1] = u;
                if (d[k + 1] <= 0)
                    throw not_positive_definite(
                        "lll_reduce: Gram matrix is not positive definite");
            }
        }
    }

    // b_k <- b_k - q b_l applied to transform, Gram and lambda state.
    void translate(size_t k, size_t l, const mpz_class& q) {
        if (q == 0) return;
        for (size_t j = 0; j < n; ++j) h(k, j) -= q * h(l, j);
        mpz_class gkk = g(k, k) - 2 * q * g(k, l) + q * q * g(l, l);
        for (size_t t = 0; t < n; ++t) {
            if (t == k) continue;
            g(k, t) -= q * g(l, t);
            g(t, k) = g(k, t);
        }
        g(k, k) = gkk;
        for (size_t i = 0; i < l; ++i) lam[k][i] -= q * lam[l][i];
        lam[k][l] -= q * d[l + 1];
    }

    void reduce(size_t k, size_t l) {
        if (2 * abs(lam[k][l]) > d[l + 1]) translate(k, l, round_div(lam[k][l], d[l + 1]));
    }

    void swap_step(size_t k) {
        h.swap_rows(k, k - 1);
        g.swap_rows(k, k - 1);
        for (size_t t = 0; t < n; ++t) std::swap(g(t, k), g(t, k - 1));
        for (size_t j = 0; j + 1 < k; ++j) std::swap(lam[k][j], lam[k - 1][j]);
        mpz_class l = lam[k][k - 1];
        mpz_class b = divexact_checked(d[k - 1] * d[k + 1] + l * l, d[k]);
        for (size_t i = k + 1; i <= kmax; ++i) {
            mpz_class t = lam[i][k];
            lam[i][k] = divexact_checked(d[k + 1] * lam[i][k - 1] - l * t, d[k]);
            lam[i][k - 1] = divexact_checked(b * t + l * lam[i][k], d[k + 1]);
        }
        d[k] = b;
    }

    bool lovasz_fails(size_t k) const {
        const mpz_class& l = lam[k][k - 1];
        return dq * (d[k + 1] * d[k - 1] + l * l) < dp * d[k] * d[k];
    }

    void run() {
        if (n == 0) return;
        d[0] = 1;
        d[1] = g(0, 0);
        if (n >= 1 && d[1] <= 0)
            throw not_positive_definite("lll_reduce: Gram matrix is not positive definite");
        size_t k = 1;
        kmax = 0;
        while (k < n) {
            if (k > kmax) {
                kmax = k;
                gso_row(k);
            }
            reduce(k, k - 1);
            if (lovasz_fails(k)) {
                swap_step(k);
                k = (k > 1) ? k - 1 : 1;
            } else {
                for (size_t l = k - 1; l-- > 0;) reduce(k, l);
                ++k;
            }
        }
    }
};

}  // namespace detail

// LLL reduction with exact arithmetic. Rational Gram matrices are scaled by
// a global common denominator first (the reduction is scale-invariant).
// Deterministic: fixed sweep order, ties never depend on representation.
inline ReductionResult lll_reduce(const IntLattice& lat, const mpq_class& delta = mpq_class(99, 100)) {
    if (!(delta > mpq_class(1, 4) && delta < 1))
        throw input_error("lll_reduce: delta must satisfy 1/4 < delta < 1");
    ZMat gz;
    mpz_class scale = 1;
    if (lat.basis) {
        const ZMat& b = *lat.basis;
        gz = ZMat(b.rows(), b.rows());
        for (size_t i = 0; i < b.rows(); ++i)
            for (size_t j = i; j < b.rows(); ++j) {
                mpz_class t = 0;
                for (size_t c = 0; c < b.cols(); ++c) t += b(i, c) * b(j, c);
                gz(i, j) = t;
                gz(j, i) = t;
            }
    } else {
        const QMat& gq = *lat.gram;
        for (size_t i = 0; i < gq.rows(); ++i)
            for (size_t j = 0; j < gq.cols(); ++j) {
                mpz_class den = gq(i, j).get_den(), g;
                mpz_gcd(g.get_mpz_t(), scale.get_mpz_t(), den.get_mpz_t());
                scale = scale / g * den;
            }
        gz = ZMat(gq.rows(), gq.rows());
        for (size_t i = 0; i < gq.rows(); ++i)
            for (size_t j = 0; j < gq.cols(); ++j) {
                mpq_class v = gq(i, j) * scale;
                gz(i, j) = v.get_num();
            }
    }
    detail::IntegralLll ll(std::move(gz), delta);
    ll.run();

    ReductionResult out;
    out.transform = ll.h;
    out.reduced_basis = lat.basis ? mat_mul(ll.h, *lat.basis) : ll.h;
    out.reduced_gram = QMat(ll.n, ll.n);
    for (size_t i = 0; i < ll.n; ++i)
        for (size_t j = 0; j < ll.n; ++j) out.reduced_gram(i, j) = make_q(ll.g(i, j), scale);
    out.norms.resize(ll.n);
    for (size_t i = 0; i < ll.n; ++i) out.norms[i] = out.reduced_gram(i, i);
    out.norms_sorted = out.norms;
    std::sort(out.norms_sorted.begin(), out.norms_sorted.end());
    return out;
}

// Exact rank over Q by fraction-free elimination.
inline size_t exact_rank(const ZMat& m) { return bareiss_rank(m); }
inline size_t exact_rank(const QMat& m) { return bareiss_rank(m); }

// Saturated kernel { v in Z^N : M v^t = 0 }, HNF-canonical basis.
inline IntLattice integer_kernel(const ZMat& m) { return IntLattice::from_basis(kernel_basis(m)); }

// det of the Gram matrix of the lattice = vol(L)^2. Exact integer for
// integer bases.
inline mpq_class gram_det(const IntLattice& lat) {
    if (lat.basis) {
        const ZMat& b = *lat.basis;
        ZMat g(b.rows(), b.rows());
        for (size_t i = 0; i < b.rows(); ++i)
            for (size_t j = i; j < b.rows(); ++j) {
                mpz_class t = 0;
                for (size_t c = 0; c < b.cols(); ++c) t += b(i, c) * b(j, c);
                g(i, j) = t;
                g(j, i) = t;
            }
        return mpq_class(bareiss_det(g));
    }
    return det(*lat.gram);
}

inline bool is_saturated(const ZMat& basis) {
    auto [h, u] = hnf_rows(basis);
    size_t nz = 0;
    for (size_t i = 0; i < h.rows(); ++i)
        if (!is_zero_row(h, i)) ++nz;
    if (nz != basis.rows()) throw input_error("is_saturated: basis rows are dependent");
    ZMat sat = kernel_basis(kernel_basis(basis));
    return sat == h;
}

// Orthogonal complement within Z^N. Requires (and checks) a saturated input;
// saturated L and its complement have equal Gram determinants.
inline IntLattice orthogonal_complement(const IntLattice& lat) {
    if (!lat.basis) throw input_error("orthogonal_complement: basis representation required");
    if (lat.basis->rows() > 0 && !is_saturated(*lat.basis))
        throw input_error("orthogonal_complement: lattice is not saturated in Z^N");
    if (lat.basis->rows() == 0) {
        // complement of {0} is the full lattice
        return IntLattice::from_basis(ZMat::identity(lat.basis->cols()));
    }
    return integer_kernel(*lat.basis);
}

namespace detail {

struct Gso {
    std::vector<QVec> mu;  // mu[i][j], j < i
    QVec q;                // squared lengths of the orthogonalized vectors

    explicit Gso(const QMat& gram) {
        size_t n = gram.rows();
        mu.assign(n, QVec(n));
        q.resize(n);
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < i; ++j) {
                mpq_class v = gram(i, j);
                for (size_t t = 0; t < j; ++t) v -= mu[i][t] * mu[j][t] * q[t];
                if (q[j] == 0) throw integrity_error("GSO: dependent vectors");
                mu[i][j] = v / q[j];
                mu[i][j].canonicalize();
            }
            mpq_class v = gram(i, i);
            for (size_t t = 0; t < i; ++t) v -= mu[i][t] * mu[i][t] * q[t];
            v.canonicalize();
            q[i] = v;
            if (q[i] <= 0) throw not_positive_definite("GSO: Gram not positive definite");
        }
    }
};

}  // namespace detail

// Exhaustive successive minima for dimension <= 5: enumerate every lattice
// vector with squared norm <= max_i ||b_i||^2 of an LLL-reduced basis (that
// radius provably captures all minima), then pick greedily by norm with
// exact independence checks.
inline QVec minima_oracle(const IntLattice& lat, size_t max_dim = 5) {
    size_t k = lat.dim();
    if (k == 0) return {};
    if (k > max_dim) throw input_error("minima_oracle: dimension too large for enumeration");
    ReductionResult red = lll_reduce(lat);
    mpq_class radius = *std::max_element(red.norms.begin(), red.norms.end());
    detail::Gso gso(red.reduced_gram);

    struct Cand {
        mpq_class norm_sq;
        ZVec x;
    };
    std::vector<Cand> cands;
    ZVec x(k);
    size_t nodes = 0;

    // center of level i given choices above: c_i = sum_{j>i} mu[j][i] * x_j
    auto center = [&](size_t i) {
        mpq_class c = 0;
        for (size_t j = i + 1; j < k; ++j) c += gso.mu[j][i] * x[j];
        c.canonicalize();
        return c;
    };

    auto rec = [&](auto&& self, size_t level, const mpq_class& budget) -> void {
        if (++nodes > 8'000'000)
            throw integrity_error("minima_oracle: enumeration exploded");
        size_t i = level - 1;
        mpq_class c = center(i);
        auto weight = [&](long v) {
            mpq_class t = mpq_class(v) + c;
            return mpq_class(t * t * gso.q[i]);
        };
        mpz_class z0_big = round_q(-c);
        if (!z0_big.fits_slong_p())
            throw integrity_error("minima_oracle: enumeration center out of range");
        long z0 = z0_big.get_si();
        for (int dir = 0; dir < 2; ++dir) {
            long v = (dir == 0) ? z0 : z0 - 1;
            long step = (dir == 0) ? 1 : -1;
            while (true) {
                mpq_class w = weight(v);
                if (w > budget) break;
                x[i] = v;
                if (i == 0) {
                    bool all_zero = true;
                    for (const auto& t : x)
                        if (t != 0) all_zero = false;
                    if (!all_zero) cands.push_back({radius - budget + w, x});
                } else {
                    self(self, level - 1, budget - w);
                }
                v += step;
            }
        }
        x[i] = 0;
    };
    rec(rec, k, radius);

    // one representative per +-pair: highest-index nonzero coordinate positive
    std::vector<Cand> kept;
    for (auto& c : cands) {
        long last = -1;
        for (size_t i = 0; i < k; ++i)
            if (c.x[i] != 0) last = static_cast<long>(i);
        if (last >= 0 && c.x[static_cast<size_t>(last)] > 0) kept.push_back(std::move(c));
    }
    std::sort(kept.begin(), kept.end(), [](const Cand& a, const Cand& b) {
        if (a.norm_sq != b.norm_sq) return a.norm_sq < b.norm_sq;
        return a.x < b.x;
    });

    QVec minima;
    ZMat picked(0, 0);
    std::vector<ZVec> rows;
    for (const auto& c : kept) {
        rows.push_back(c.x);
        ZMat m(rows.size(), k);
        for (size_t i = 0; i < rows.size(); ++i)
            for (size_t j = 0; j < k; ++j) m(i, j) = rows[i][j];
        if (bareiss_rank(m) == rows.size()) {
            minima.push_back(c.norm_sq);
            if (minima.size() == k) break;
        } else {
            rows.pop_back();
        }
    }
    if (minima.size() != k) throw integrity_error("minima_oracle: failed to reach full rank");
    return minima;
}

}  // namespace nfmodel
