#pragma once

#include <vector>

#include "nfmodel/mat.hpp"
#include "nfmodel/util.hpp"

namespace nfmodel {

// Univariate polynomials, coefficients ascending: p[i] is the coefficient
// of x^i. The zero polynomial is the empty vector (degree -1).
using ZPoly = std::vector<mpz_class>;
using QPoly = std::vector<mpq_class>;

template <class P>
void poly_trim(P& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

template <class P>
long poly_degree(const P& p) {
    return static_cast<long>(p.size()) - 1;
}

inline QPoly to_rational(const ZPoly& p) {
    QPoly q(p.size());
    for (size_t i = 0; i < p.size(); ++i) q[i] = mpq_class(p[i]);
    return q;
}

template <class P>
P poly_add(const P& a, const P& b) {
    P r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    poly_trim(r);
    return r;
}

template <class P>
P poly_sub(const P& a, const P& b) {
    P r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    poly_trim(r);
    return r;
}

template <class P>
P poly_mul(const P& a, const P& b) {
    if (a.empty() || b.empty()) return {};
    P r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    poly_trim(r);
    return r;
}

template <class P>
P poly_derivative(const P& p) {
    if (p.size() <= 1) return {};
    P d(p.size() - 1);
    for (size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * static_cast<unsigned long>(i);
    return d;
}

template <class P, class T>
T poly_eval(const P& p, const T& x) {
    T acc = T(0);
    for (size_t i = p.size(); i-- > 0;) acc = acc * x + T(p[i]);
    return acc;
}

// Euclidean division over Q; divisor must be nonzero.
inline std::pair<QPoly, QPoly> poly_divrem(const QPoly& a, const QPoly& b) {
    if (b.empty()) throw error("poly_divrem: division by zero polynomial");
    QPoly rem = a, quo;
    long db = poly_degree(b);
    if (poly_degree(a) >= db) quo.assign(a.size() - b.size() + 1, mpq_class(0));
    while (poly_degree(rem) >= db) {
        long k = poly_degree(rem) - db;
        mpq_class c = rem.back() / b.back();
        quo[k] = c;
        for (long i = 0; i <= db; ++i) rem[k + i] -= c * b[i];
        poly_trim(rem);
    }
    return {quo, rem};
}

inline QPoly poly_mod(const QPoly& a, const QPoly& b) { return poly_divrem(a, b).second; }

// Resultant via the Sylvester matrix (fraction-free determinant).
inline mpz_class resultant(const ZPoly& f, const ZPoly& g) {
    long m = poly_degree(f), n = poly_degree(g);
    if (m < 0 || n < 0) return 0;
    if (m == 0) return pow_z(f[0], n);
    if (n == 0) return pow_z(g[0], m);
    size_t dim = static_cast<size_t>(m + n);
    ZMat s(dim, dim);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j <= m; ++j) s(i, i + j) = f[m - j];
    for (long i = 0; i < m; ++i)
        for (long j = 0; j <= n; ++j) s(n + i, i + j) = g[n - j];
    return bareiss_det(s);
}

// Discriminant of a monic integer polynomial.
inline mpz_class poly_discriminant(const ZPoly& f) {
    long n = poly_degree(f);
    if (n < 1) throw error("poly_discriminant: degree >= 1 required");
    mpz_class res = resultant(f, poly_derivative(f));
    return (((n * (n - 1) / 2) % 2) == 0) ? res : mpz_class(-res);
}

namespace detail {

inline int sign_q(const mpq_class& x) { return sgn(x); }

// Sign of p at +infinity (dir=+1) or -infinity (dir=-1).
inline int sign_at_infinity(const QPoly& p, int dir) {
    if (p.empty()) return 0;
    int s = sign_q(p.back());
    if (dir < 0 && (poly_degree(p) % 2) != 0) s = -s;
    return s;
}

}  // namespace detail

// Number of real roots of a squarefree polynomial (Sturm's theorem).
inline unsigned count_real_roots(const ZPoly& f) {
    QPoly p0 = to_rational(f);
    QPoly p1 = to_rational(poly_derivative(f));
    std::vector<QPoly> chain{p0, p1};
    while (!chain.back().empty() && poly_degree(chain.back()) > 0) {
        QPoly r = poly_mod(chain[chain.size() - 2], chain.back());
        for (auto& c : r) c = -c;
        chain.push_back(r);
        if (chain.back().empty()) break;
    }
    auto variations = [&](int dir) {
        unsigned v = 0;
        int prev = 0;
        for (const auto& p : chain) {
            int s = detail::sign_at_infinity(p, dir);
            if (s == 0) continue;
            if (prev != 0 && s != prev) ++v;
            prev = s;
        }
        return v;
    };
    return variations(-1) - variations(+1);
}

}  // namespace nfmodel
