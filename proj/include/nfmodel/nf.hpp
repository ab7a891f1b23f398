#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nfmodel/mat.hpp"
#include "nfmodel/poly.hpp"
#include "nfmodel/util.hpp"

namespace nfmodel {

// Element of a number field (or order), as exact rational coordinates in the
// integral basis. Elements of the order have integer coordinates.
struct FieldElement {
    QVec coords;

    FieldElement() = default;
    explicit FieldElement(QVec c) : coords(std::move(c)) {}

    static FieldElement zero(size_t n) { return FieldElement(QVec(n)); }

    bool is_zero() const {
        for (const auto& c : coords)
            if (c != 0) return false;
        return true;
    }

    bool is_integral() const {
        for (const auto& c : coords)
            if (c.get_den() != 1) return false;
        return true;
    }

    bool operator==(const FieldElement& o) const { return coords == o.coords; }
};

// A number field K = Q[x]/(f), degree n >= 2, presented by a monic squarefree
// integer polynomial together with an integral basis (rows in the power
// basis). Multiplication runs through the precomputed structure tensor.
struct NumberField {
    ZPoly f;
    unsigned n = 0;
    QMat basis;      // row i = coordinates of beta_i in 1, theta, ..., theta^(n-1)
    QMat basis_inv;  // power-basis row -> integral-basis coordinates
    std::vector<ZVec> mul_tab;  // mul_tab[i*n+j][k]: beta_i beta_j = sum_k c beta_k
    unsigned r1 = 0, s = 0;
    mpz_class disc;   // signed discriminant of the order (trace-form determinant)
    ZVec basis_traces;
    ZMat trace_gram;

    const ZVec& mul_entry(size_t i, size_t j) const { return mul_tab[i * n + j]; }

    FieldElement zero() const { return FieldElement::zero(n); }

    FieldElement one() const {
        QVec c(n);
        c[0] = 1;  // beta_1 = 1 is enforced at parse time
        return FieldElement(std::move(c));
    }

    FieldElement from_integer_coords(const ZVec& v) const {
        QVec c(n);
        for (size_t i = 0; i < n; ++i) c[i] = mpq_class(v[i]);
        return FieldElement(std::move(c));
    }
};

struct FieldDesc {
    ZPoly defining_polynomial;  // ascending coefficients, monic
    std::optional<QMat> integral_basis;
    bool assume_power_basis_maximal = false;
};

inline FieldElement element_add(const FieldElement& a, const FieldElement& b) {
    QVec c(a.coords.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = a.coords[i] + b.coords[i];
    return FieldElement(std::move(c));
}

inline FieldElement element_sub(const FieldElement& a, const FieldElement& b) {
    QVec c(a.coords.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = a.coords[i] - b.coords[i];
    return FieldElement(std::move(c));
}

inline FieldElement element_scale(const mpq_class& t, const FieldElement& a) {
    QVec c(a.coords.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = t * a.coords[i];
    return FieldElement(std::move(c));
}

inline FieldElement element_mul(const FieldElement& a, const FieldElement& b,
                                const NumberField& K) {
    QVec c(K.n);
    for (size_t i = 0; i < K.n; ++i) {
        if (a.coords[i] == 0) continue;
        for (size_t j = 0; j < K.n; ++j) {
            if (b.coords[j] == 0) continue;
            mpq_class t = a.coords[i] * b.coords[j];
            const ZVec& row = K.mul_entry(i, j);
            for (size_t k = 0; k < K.n; ++k) {
                if (row[k] != 0) c[k] += t * row[k];
            }
        }
    }
    for (auto& x : c) x.canonicalize();
    return FieldElement(std::move(c));
}

inline mpq_class trace(const FieldElement& a, const NumberField& K) {
    mpq_class t = 0;
    for (size_t i = 0; i < K.n; ++i) t += a.coords[i] * K.basis_traces[i];
    t.canonicalize();
    return t;
}

// Coefficients of the element as a polynomial in the power basis.
inline QPoly to_power_poly(const FieldElement& a, const NumberField& K) {
    QPoly p(K.n);
    for (size_t j = 0; j < K.n; ++j) {
        for (size_t i = 0; i < K.n; ++i) p[j] += a.coords[i] * K.basis(i, j);
        p[j].canonicalize();
    }
    poly_trim(p);
    return p;
}

// Rank over Q of the span of the given elements.
inline size_t rank_of_span(const std::vector<FieldElement>& elems, const NumberField& K) {
    QMat m(elems.size(), K.n);
    for (size_t i = 0; i < elems.size(); ++i)
        for (size_t j = 0; j < K.n; ++j) m(i, j) = elems[i].coords[j];
    return bareiss_rank(m);
}

// Matrix of multiplication by a in the integral basis (acts on coordinate
// columns).
inline QMat multiplication_matrix(const FieldElement& a, const NumberField& K) {
    QMat m(K.n, K.n);
    for (size_t j = 0; j < K.n; ++j) {
        for (size_t i = 0; i < K.n; ++i) {
            if (a.coords[i] == 0) continue;
            const ZVec& row = K.mul_entry(i, j);
            for (size_t k = 0; k < K.n; ++k)
                if (row[k] != 0) m(k, j) += a.coords[i] * row[k];
        }
    }
    return m;
}

// Field inverse. Singular multiplication with a nonzero element means the
// input algebra has zero divisors (reducible defining polynomial).
inline FieldElement element_inverse(const FieldElement& a, const NumberField& K) {
    if (a.is_zero()) throw error("element_inverse: division by zero");
    QMat m = multiplication_matrix(a, K);
    QVec e1(K.n);
    e1[0] = 1;
    auto x = solve(m, e1);
    if (!x) throw integrity_error("element_inverse: zero divisor, input is not a field");
    return FieldElement(std::move(*x));
}

inline FieldElement element_div(const FieldElement& a, const FieldElement& b,
                                const NumberField& K) {
    return element_mul(a, element_inverse(b, K), K);
}

struct Discriminant {
    ZMat gram;  // Tr(beta_i beta_j)
    mpz_class det;
};

inline Discriminant discriminant(const NumberField& K) { return {K.trace_gram, K.disc}; }

namespace detail {

// beta_i beta_j as integral-basis coordinates; must be integers for the
// basis to span a ring.
inline ZVec structure_row(const NumberField& K, const QPoly& fi, const QPoly& fj,
                          const QPoly& fpoly) {
    QPoly prod = poly_mod(poly_mul(fi, fj), fpoly);
    QVec power(K.n);
    for (size_t t = 0; t < prod.size(); ++t) power[t] = prod[t];
    // coords = power_row * basis_inv
    ZVec out(K.n);
    for (size_t k = 0; k < K.n; ++k) {
        mpq_class c = 0;
        for (size_t t = 0; t < K.n; ++t) c += power[t] * K.basis_inv(t, k);
        c.canonicalize();
        if (c.get_den() != 1)
            throw input_error(
                "integral basis is not closed under multiplication "
                "(non-integer multiplication-table entry)");
        out[k] = c.get_num();
    }
    return out;
}

}  // namespace detail

// Validates the description and builds the full field data: structure
// tensor, signature, traces, trace form and its determinant.
inline NumberField parse_field(const FieldDesc& desc) {
    NumberField K;
    K.f = desc.defining_polynomial;
    poly_trim(K.f);
    long deg = poly_degree(K.f);
    if (deg < 2) throw input_error("degree must be at least 2");
    if (K.f.back() != 1) throw input_error("defining polynomial must be monic");
    K.n = static_cast<unsigned>(deg);

    mpz_class fdisc = poly_discriminant(K.f);
    if (fdisc == 0) throw input_error("defining polynomial is not squarefree");

    if (desc.integral_basis) {
        K.basis = *desc.integral_basis;
        if (K.basis.rows() != K.n || K.basis.cols() != K.n)
            throw input_error("integral basis must be n x n");
    } else {
        if (!desc.assume_power_basis_maximal)
            throw input_error(
                "integral basis missing; set assume_power_basis_maximal to use the "
                "power basis");
        K.basis = to_rational(ZMat::identity(K.n));
    }
    for (size_t j = 0; j < K.n; ++j) {
        if (K.basis(0, j) != ((j == 0) ? 1 : 0))
            throw input_error("first basis element must be 1");
    }
    auto inv = inverse(K.basis);
    if (!inv) throw input_error("integral basis matrix is singular");
    K.basis_inv = *inv;

    QPoly fq = to_rational(K.f);
    std::vector<QPoly> rows(K.n);
    for (size_t i = 0; i < K.n; ++i) {
        QPoly p(K.n);
        for (size_t j = 0; j < K.n; ++j) p[j] = K.basis(i, j);
        poly_trim(p);
        rows[i] = p;
    }
    K.mul_tab.resize(static_cast<size_t>(K.n) * K.n);
    for (size_t i = 0; i < K.n; ++i)
        for (size_t j = i; j < K.n; ++j) {
            ZVec r = detail::structure_row(K, rows[i], rows[j], fq);
            K.mul_tab[i * K.n + j] = r;
            K.mul_tab[j * K.n + i] = r;
        }

    unsigned real_roots = count_real_roots(K.f);
    if ((K.n - real_roots) % 2 != 0)
        throw integrity_error("parse_field: inconsistent real root count");
    K.r1 = real_roots;
    K.s = (K.n - real_roots) / 2;

    // Tr(beta_i) = trace of the multiplication-by-beta_i matrix
    K.basis_traces.assign(K.n, 0);
    for (size_t i = 0; i < K.n; ++i) {
        mpz_class t = 0;
        for (size_t j = 0; j < K.n; ++j) t += K.mul_entry(i, j)[j];
        K.basis_traces[i] = t;
    }
    K.trace_gram = ZMat(K.n, K.n);
    for (size_t i = 0; i < K.n; ++i)
        for (size_t j = 0; j < K.n; ++j) {
            mpz_class t = 0;
            const ZVec& row = K.mul_entry(i, j);
            for (size_t k = 0; k < K.n; ++k) t += row[k] * K.basis_traces[k];
            K.trace_gram(i, j) = t;
        }
    K.disc = bareiss_det(K.trace_gram);
    if (K.disc == 0) throw input_error("degenerate input: trace form is singular");
    bool disc_negative = (K.disc < 0);
    if (disc_negative != (K.s % 2 == 1))
        throw integrity_error("discriminant sign does not match signature");
    return K;
}

inline mpz_class abs_disc(const NumberField& K) { return abs(K.disc); }

}  // namespace nfmodel
