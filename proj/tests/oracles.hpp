// Test-side oracles, independent of the library implementation paths they
// check: Newton-identity power sums, polynomial multiplication modulo f,
// and plain double-precision Newton iteration for roots.
#pragma once

#include <cmath>
#include <vector>

#include "nfmodel/nf.hpp"
#include "nfmodel/poly.hpp"

namespace oracles {

// Power sums p_k = sum of k-th powers of the roots of a monic integer
// polynomial, by Newton's identities. p_0 = n.
inline std::vector<mpz_class> power_sums(const nfmodel::ZPoly& f, unsigned count) {
    long n = nfmodel::poly_degree(f);
    std::vector<mpz_class> e(n + 1);  // elementary symmetric functions
    e[0] = 1;
    for (long i = 1; i <= n; ++i) {
        mpz_class a = f[n - i];  // coefficient of x^(n-i)
        e[i] = (i % 2 == 0) ? a : mpz_class(-a);
    }
    std::vector<mpz_class> p(count + 1);
    p[0] = n;
    for (unsigned k = 1; k <= count; ++k) {
        mpz_class acc = 0;
        for (unsigned i = 1; i < k && i <= static_cast<unsigned>(n); ++i) {
            mpz_class term = e[i] * p[k - i];
            acc += (i % 2 == 1) ? term : mpz_class(-term);
        }
        if (k <= static_cast<unsigned>(n)) {
            mpz_class term = mpz_class(k) * e[k];
            acc += (k % 2 == 1) ? term : mpz_class(-term);
        }
        p[k] = acc;
    }
    return p;
}

// Trace form Gram of the power basis: G[i][j] = p_{i+j}.
inline nfmodel::ZMat power_basis_trace_gram(const nfmodel::ZPoly& f) {
    size_t n = static_cast<size_t>(nfmodel::poly_degree(f));
    auto p = power_sums(f, 2 * (n - 1));
    nfmodel::ZMat g(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) g(i, j) = p[i + j];
    return g;
}

// Product of two power-basis elements reduced modulo f; the independent
// route for checking the multiplication-table path.
inline nfmodel::QVec mul_mod_f(const nfmodel::QVec& a, const nfmodel::QVec& b,
                               const nfmodel::ZPoly& f) {
    nfmodel::QPoly pa(a.begin(), a.end()), pb(b.begin(), b.end());
    nfmodel::poly_trim(pa);
    nfmodel::poly_trim(pb);
    nfmodel::QPoly prod = nfmodel::poly_mod(nfmodel::poly_mul(pa, pb), nfmodel::to_rational(f));
    nfmodel::QVec out(a.size());
    for (size_t i = 0; i < prod.size(); ++i) out[i] = prod[i];
    return out;
}

// Plain double Newton iteration from a starting point.
inline double newton_root(const nfmodel::ZPoly& f, double start) {
    auto feval = [&](double x, double* dfx) {
        double p = 0, d = 0;
        for (size_t i = f.size(); i-- > 0;) {
            d = d * x + p;
            p = p * x + f[i].get_d();
        }
        *dfx = d;
        return p;
    };
    double x = start;
    for (int it = 0; it < 200; ++it) {
        double d;
        double v = feval(x, &d);
        if (d == 0) break;
        double nx = x - v / d;
        if (std::abs(nx - x) < 1e-15 * (1 + std::abs(nx))) return nx;
        x = nx;
    }
    return x;
}

}  // namespace oracles
