#pragma once

#include <vector>

#include "nfmodel/interval.hpp"
#include "nfmodel/nf.hpp"
#include "nfmodel/roots.hpp"

namespace nfmodel {

// Archimedean image of a field element: one interval per real embedding, one
// box per conjugate pair, plus an enclosure of the sup-norm (max of the
// absolute values of the r1 + s components).
struct EmbeddingVector {
    std::vector<QInterval> real_components;
    std::vector<QBox> complex_components;
    QInterval sup_norm;
};

// Gram matrix of the canonical metric on the Minkowski space in the integral
// basis; complex embeddings contribute twice. Entries are certified to
// error_bound; det_enclosure contains |disc|.
struct CanonicalGram {
    QMat mid;
    mpq_class error_bound;
    QInterval det_enclosure;
};

namespace detail {

inline QInterval eval_interval_q(const QPoly& p, const QInterval& x) {
    QInterval acc;
    for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

inline QBox eval_box_q(const QPoly& p, const QBox& x) {
    QBox acc(mpq_class(0), mpq_class(0));
    for (size_t i = p.size(); i-- > 0;) {
        acc = acc * x;
        acc.re = acc.re + p[i];
    }
    return acc;
}

}  // namespace detail

inline EmbeddingVector embed(const FieldElement& a, const RootEnclosures& roots,
                             const NumberField& K) {
    if (roots.reals.size() != K.r1 || roots.complex_pairs.size() != K.s)
        throw error("embed: enclosure counts do not match the signature");
    unsigned long bits = roots.precision + 32;
    QPoly g = to_power_poly(a, K);
    EmbeddingVector out;
    out.real_components.reserve(K.r1);
    out.complex_components.reserve(K.s);
    bool first = true;
    QInterval norm;
    for (const auto& r : roots.reals) {
        QInterval v = round_out(detail::eval_interval_q(g, r), bits);
        out.real_components.push_back(v);
        QInterval a_v = abs_i(v);
        norm = first ? a_v : QInterval{std::max(norm.lo, a_v.lo), std::max(norm.hi, a_v.hi)};
        first = false;
    }
    for (const auto& b : roots.complex_pairs) {
        QBox v = round_out(detail::eval_box_q(g, b), bits);
        out.complex_components.push_back(v);
        QInterval a_v = abs_box(v, bits);
        norm = first ? a_v : QInterval{std::max(norm.lo, a_v.lo), std::max(norm.hi, a_v.hi)};
        first = false;
    }
    if (norm.lo < 0) norm.lo = 0;
    out.sup_norm = norm;
    return out;
}

// Certified upper bound for the sup-norm of an element.
inline mpq_class sup_norm_upper(const FieldElement& a, const RootEnclosures& roots,
                                const NumberField& K) {
    return embed(a, roots, K).sup_norm.hi;
}

// Determinant enclosure by interval Gaussian elimination; pivots are chosen
// by largest mignitude. Fails (precision_error) if no pivot excludes zero.
inline QInterval interval_det(std::vector<std::vector<QInterval>> m, unsigned suggest_bits) {
    size_t n = m.size();
    if (n == 0) return QInterval(mpq_class(1));
    int sign = 1;
    QInterval det(mpq_class(1));
    for (size_t k = 0; k < n; ++k) {
        size_t best = n;
        mpq_class best_mig = 0;
        for (size_t i = k; i < n; ++i) {
            const QInterval& p = m[i][k];
            mpq_class mig = p.strictly_positive() ? p.lo : (p.strictly_negative() ? -p.hi : mpq_class(0));
            if (mig > best_mig) {
                best_mig = mig;
                best = i;
            }
        }
        if (best == n)
            throw precision_error("interval_det: pivot interval contains zero", suggest_bits);
        if (best != k) {
            std::swap(m[best], m[k]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            QInterval factor = m[i][k] / m[k][k];
            for (size_t j = k + 1; j < n; ++j) m[i][j] = m[i][j] - factor * m[k][j];
            m[i][k] = QInterval();
        }
        det = det * m[k][k];
    }
    return sign > 0 ? det : -det;
}

inline CanonicalGram canonical_gram(const NumberField& K, const RootEnclosures& roots) {
    std::vector<EmbeddingVector> emb(K.n);
    for (size_t i = 0; i < K.n; ++i) {
        QVec c(K.n);
        c[i] = 1;
        emb[i] = embed(FieldElement(std::move(c)), roots, K);
    }
    std::vector<std::vector<QInterval>> g(K.n, std::vector<QInterval>(K.n));
    for (size_t i = 0; i < K.n; ++i)
        for (size_t j = i; j < K.n; ++j) {
            QInterval e;
            for (size_t t = 0; t < K.r1; ++t)
                e = e + emb[i].real_components[t] * emb[j].real_components[t];
            for (size_t t = 0; t < K.s; ++t) {
                const QBox& a = emb[i].complex_components[t];
                const QBox& b = emb[j].complex_components[t];
                e = e + mpq_class(2) * (a.re * b.re + a.im * b.im);
            }
            g[i][j] = e;
            g[j][i] = e;
        }
    CanonicalGram out;
    out.mid = QMat(K.n, K.n);
    out.error_bound = 0;
    for (size_t i = 0; i < K.n; ++i)
        for (size_t j = 0; j < K.n; ++j) {
            out.mid(i, j) = g[i][j].mid();
            out.error_bound = std::max(out.error_bound, g[i][j].rad());
        }
    out.det_enclosure = interval_det(std::move(g), roots.precision * 2);
    return out;
}

}  // namespace nfmodel
