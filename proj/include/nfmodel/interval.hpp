#pragma once

#include <algorithm>
#include <string>

#include "nfmodel/util.hpp"

namespace nfmodel {

// Closed rational interval [lo, hi]. All operations are exact; round_out
// coarsens endpoints to dyadic rationals to keep denominators bounded.
struct QInterval {
    mpq_class lo, hi;

    QInterval() : lo(0), hi(0) {}
    explicit QInterval(const mpq_class& x) : lo(x), hi(x) {}
    QInterval(const mpq_class& l, const mpq_class& h) : lo(l), hi(h) {
        if (lo > hi) throw error("QInterval: lo > hi");
    }

    static QInterval from_mid_rad(const mpq_class& mid, const mpq_class& rad) {
        return QInterval(mid - rad, mid + rad);
    }

    mpq_class mid() const { return (lo + hi) / 2; }
    mpq_class rad() const { return (hi - lo) / 2; }
    mpq_class width() const { return hi - lo; }

    bool contains(const mpq_class& x) const { return lo <= x && x <= hi; }
    bool contains_zero() const { return lo <= 0 && 0 <= hi; }
    bool strictly_positive() const { return lo > 0; }
    bool strictly_negative() const { return hi < 0; }

    // subset of the interior of o
    bool inside(const QInterval& o) const { return o.lo < lo && hi < o.hi; }

    bool disjoint(const QInterval& o) const { return hi < o.lo || o.hi < lo; }
};

inline QInterval operator-(const QInterval& a) { return {-a.hi, -a.lo}; }

inline QInterval operator+(const QInterval& a, const QInterval& b) {
    return {a.lo + b.lo, a.hi + b.hi};
}

inline QInterval operator-(const QInterval& a, const QInterval& b) {
    return {a.lo - b.hi, a.hi - b.lo};
}

inline QInterval operator*(const QInterval& a, const QInterval& b) {
    mpq_class p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return {std::min(std::min(p1, p2), std::min(p3, p4)),
            std::max(std::max(p1, p2), std::max(p3, p4))};
}

inline QInterval operator*(const mpq_class& c, const QInterval& a) {
    return (c >= 0) ? QInterval{c * a.lo, c * a.hi} : QInterval{c * a.hi, c * a.lo};
}

inline QInterval operator+(const QInterval& a, const mpq_class& c) {
    return {a.lo + c, a.hi + c};
}

inline QInterval operator-(const mpq_class& c, const QInterval& a) {
    return {c - a.hi, c - a.lo};
}

// Divisor must not contain zero.
inline QInterval operator/(const QInterval& a, const QInterval& b) {
    if (b.contains_zero()) throw error("QInterval: division by interval containing 0");
    mpq_class p1 = a.lo / b.lo, p2 = a.lo / b.hi, p3 = a.hi / b.lo, p4 = a.hi / b.hi;
    return {std::min(std::min(p1, p2), std::min(p3, p4)),
            std::max(std::max(p1, p2), std::max(p3, p4))};
}

inline QInterval abs_i(const QInterval& a) {
    if (a.lo >= 0) return a;
    if (a.hi <= 0) return -a;
    return {mpq_class(0), std::max(mpq_class(-a.lo), a.hi)};
}

inline QInterval square_i(const QInterval& a) {
    QInterval b = abs_i(a);
    return {b.lo * b.lo, b.hi * b.hi};
}

inline QInterval intersect(const QInterval& a, const QInterval& b) {
    mpq_class lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
    if (lo > hi) throw error("QInterval: empty intersection");
    return {lo, hi};
}

inline mpq_class dyadic_floor(const mpq_class& x, unsigned long bits) {
    mpz_class num = x.get_num();
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), bits);
    return make_q(floor_div(num, x.get_den()), pow2_z(bits));
}

inline mpq_class dyadic_ceil(const mpq_class& x, unsigned long bits) {
    mpz_class num = x.get_num();
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), bits);
    return make_q(ceil_div(num, x.get_den()), pow2_z(bits));
}

// Outward rounding to denominator 2^bits; the result contains the input.
inline QInterval round_out(const QInterval& a, unsigned long bits) {
    return {dyadic_floor(a.lo, bits), dyadic_ceil(a.hi, bits)};
}

// Certified dyadic bounds for sqrt(x), x >= 0, with error < 2^-bits.
inline mpq_class sqrt_lower(const mpq_class& x, unsigned long bits) {
    if (x < 0) throw error("sqrt_lower: negative argument");
    mpz_class a = x.get_num(), b = x.get_den();
    mpz_class scaled = a * b;
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * bits);
    return make_q(isqrt_floor(scaled), b * pow2_z(bits));
}

inline mpq_class sqrt_upper(const mpq_class& x, unsigned long bits) {
    if (x < 0) throw error("sqrt_upper: negative argument");
    mpz_class a = x.get_num(), b = x.get_den();
    mpz_class scaled = a * b;
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * bits);
    return make_q(isqrt_ceil(scaled), b * pow2_z(bits));
}

// Enclosure of sqrt over an interval with nonnegative lower end.
inline QInterval sqrt_i(const QInterval& a, unsigned long bits) {
    if (a.lo < 0) throw error("sqrt_i: interval extends below 0");
    return {sqrt_lower(a.lo, bits), sqrt_upper(a.hi, bits)};
}

inline QInterval hull(const QInterval& a, const QInterval& b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

// Axis-aligned complex box re + i*im.
struct QBox {
    QInterval re, im;

    QBox() = default;
    QBox(const QInterval& r, const QInterval& i) : re(r), im(i) {}
    QBox(const mpq_class& r, const mpq_class& i) : re(r), im(i) {}

    bool inside(const QBox& o) const { return re.inside(o.re) && im.inside(o.im); }
    bool disjoint(const QBox& o) const { return re.disjoint(o.re) || im.disjoint(o.im); }
    QInterval abs_sq() const { return square_i(re) + square_i(im); }
    bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }
};

inline QBox operator+(const QBox& a, const QBox& b) { return {a.re + b.re, a.im + b.im}; }
inline QBox operator-(const QBox& a, const QBox& b) { return {a.re - b.re, a.im - b.im}; }

inline QBox operator*(const QBox& a, const QBox& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

inline QBox conj(const QBox& a) { return {a.re, -a.im}; }

// a / b via a * conj(b) / |b|^2; |b|^2 must not contain zero.
inline QBox operator/(const QBox& a, const QBox& b) {
    QInterval n = b.abs_sq();
    if (n.contains_zero()) throw error("QBox: division by box containing 0");
    QBox num = a * conj(b);
    return {num.re / n, num.im / n};
}

inline QBox round_out(const QBox& a, unsigned long bits) {
    return {round_out(a.re, bits), round_out(a.im, bits)};
}

inline QInterval abs_box(const QBox& a, unsigned long bits) { return sqrt_i(a.abs_sq(), bits); }

}  // namespace nfmodel
