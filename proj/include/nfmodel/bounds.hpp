#pragma once

#include <string>

#include "nfmodel/model.hpp"
#include "nfmodel/util.hpp"

namespace nfmodel {

// High-precision base-10 logarithms of exact integers/rationals, computed in
// exact rational arithmetic: exponent extraction (digit counting in base 2)
// plus an atanh-series correction for the mantissa. Accurate to well below
// 1e-36, comfortably 30 significant digits after aggregation.
namespace logs {

inline const mpq_class& ln10() {
    static const mpq_class v = parse_rational(
        "2.302585092994045684017991454684364207601101488628772976033327900967572609677");
    return v;
}

inline const mpq_class& log10e() {
    static const mpq_class v = parse_rational(
        "0.434294481903251827651128918916605082294397005803666566114453783165864649209");
    return v;
}

// ln(m) for m in [1, 2], by 2*atanh((m-1)/(m+1)); argument pre-rounded to
// 2^-192 dyadic, 48 series terms (ratio <= 1/9 per term).
inline mpq_class ln_mantissa(const mpq_class& m) {
    mpq_class t = (m - 1) / (m + 1);
    t.canonicalize();
    mpz_class tn = t.get_num();
    mpz_mul_2exp(tn.get_mpz_t(), tn.get_mpz_t(), 192);
    t = make_q(floor_div(tn, t.get_den()), pow2_z(192));
    mpq_class t2 = t * t;
    mpq_class term = t, sum = 0;
    for (unsigned k = 0; k < 48; ++k) {
        sum += term / (2 * k + 1);
        term *= t2;
    }
    sum *= 2;
    sum.canonicalize();
    // round the result to keep downstream arithmetic light
    mpz_class sn = sum.get_num();
    mpz_mul_2exp(sn.get_mpz_t(), sn.get_mpz_t(), 160);
    return make_q(round_div(sn, sum.get_den()), pow2_z(160));
}

inline const mpq_class& ln2() {
    static const mpq_class v = ln_mantissa(mpq_class(2));
    return v;
}

inline mpq_class log10_z(const mpz_class& z) {
    if (z <= 0) throw input_error("log10_z: positive argument required");
    size_t e = mpz_sizeinbase(z.get_mpz_t(), 2) - 1;
    mpq_class mant = make_q(z, pow2_z(e));  // in [1, 2)
    mpq_class ln = ln_mantissa(mant) + mpq_class(static_cast<unsigned long>(e)) * ln2();
    mpq_class r = ln * log10e();
    r.canonicalize();
    return r;
}

inline mpq_class log10_q(const mpq_class& q) {
    if (q <= 0) throw input_error("log10_q: positive argument required");
    return log10_z(q.get_num()) - log10_z(q.get_den());
}

// 10^x for rational x with a moderate exponent: exact power of ten times
// exp(frac * ln 10) by series.
inline mpq_class pow10_approx(const mpq_class& x) {
    mpz_class ip = floor_q(x);
    if (!ip.fits_slong_p() || abs(ip) > 4096)
        throw input_error("pow10_approx: exponent out of supported range");
    mpq_class frac = x - mpq_class(ip);
    mpq_class y = frac * ln10();
    mpz_class yn = y.get_num();
    mpz_mul_2exp(yn.get_mpz_t(), yn.get_mpz_t(), 192);
    y = make_q(floor_div(yn, y.get_den()), pow2_z(192));
    mpq_class term = 1, sum = 0;
    for (unsigned k = 0; k < 60; ++k) {
        sum += term;
        term *= y;
        term /= (k + 1);
        // keep denominators dyadic-bounded
        mpz_class tn = term.get_num();
        mpz_mul_2exp(tn.get_mpz_t(), tn.get_mpz_t(), 256);
        term = make_q(round_div(tn, term.get_den()), pow2_z(256));
    }
    long e = ip.get_si();
    mpq_class p10 = (e >= 0) ? mpq_class(pow_z(10, e)) : make_q(1, pow_z(10, -e));
    mpq_class r = p10 * sum;
    r.canonicalize();
    return r;
}

}  // namespace logs

// Fully explicit count bound: every field of degree n with |disc| <= H has a
// model whose coefficients are bounded by B(H); the number of candidate
// models is (2 floor(B) + 1)^(r C), and each model carries at most d^r
// fields (the intersection number; r^r when d = r).
struct CountBound {
    unsigned n = 0;
    mpq_class log10H;
    unsigned r = 0, d = 0;
    mpz_class C, ell;
    mpq_class log10B;
    mpq_class log10_models;
    mpq_class log10_fields;
    mpq_class schmidt_exponent;   // (n+2)/4
    mpq_class h_exponent;   // (2d/n) r C, the slope of log10_fields in log10H
};

inline CountBound count_bound(unsigned n, const mpq_class& log10H, const PolicySpec& spec) {
    if (log10H < 0) throw input_error("count_bound: H >= 1 required");
    ModelParams p = choose_parameters(n, spec);
    CountBound out;
    out.n = n;
    out.log10H = log10H;
    out.r = p.r;
    out.d = p.d;
    out.C = p.C;
    out.ell = p.ell;

    mpz_class base = mpz_class(n) * n * p.d * (p.r + 1);
    out.log10B = make_q(p.ell, 2 * mpz_class(n)) * logs::log10_z(p.ell) +
                 mpq_class(1, 2) * logs::log10_z(p.C) +
                 mpq_class(p.d) * logs::log10_z(base) +
                 make_q(2 * mpz_class(p.d), mpz_class(n)) * log10H;
    out.log10B.canonicalize();

    mpq_class log10_2B1;
    if (out.log10B <= 40) {
        mpz_class bf = floor_q(logs::pow10_approx(out.log10B));
        if (bf < 0) bf = 0;
        log10_2B1 = logs::log10_z(2 * bf + 1);
    } else {
        // floor(B) is astronomically large: log10(2 floor(B) + 1) and
        // log10(2B) agree to far below the reported precision
        log10_2B1 = logs::log10_z(mpz_class(2)) + out.log10B;
    }
    out.log10_models = mpq_class(p.r) * mpq_class(p.C) * log10_2B1;
    out.log10_models.canonicalize();
    out.log10_fields = out.log10_models + mpq_class(p.r) * logs::log10_z(mpz_class(p.d));
    out.log10_fields.canonicalize();
    out.schmidt_exponent = make_q(mpz_class(n) + 2, mpz_class(4));
    out.schmidt_exponent.canonicalize();
    out.h_exponent = make_q(2 * mpz_class(p.d) * p.r * p.C, mpz_class(n));
    out.h_exponent.canonicalize();
    return out;
}

struct ExponentRow {
    unsigned n = 0, r = 0, d = 0;
    mpz_class C;
    mpq_class h_exponent;
    mpq_class schmidt_exponent;
    bool model_count_wins = false;  // honest at small n: usually false until n is large
};

inline ExponentRow exponent_summary(unsigned n, const PolicySpec& spec) {
    ModelParams p = choose_parameters(n, spec);
    ExponentRow row;
    row.n = n;
    row.r = p.r;
    row.d = p.d;
    row.C = p.C;
    row.h_exponent = make_q(2 * mpz_class(p.d) * p.r * p.C, mpz_class(n));
    row.h_exponent.canonicalize();
    row.schmidt_exponent = make_q(mpz_class(n) + 2, mpz_class(4));
    row.schmidt_exponent.canonicalize();
    row.model_count_wins = row.h_exponent < row.schmidt_exponent;
    return row;
}

}  // namespace nfmodel
