#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace nfmodel {

using ZVec = std::vector<mpz_class>;
using QVec = std::vector<mpq_class>;

// Error taxonomy. input_error maps to CLI exit code 2; precision_error is a
// retry signal (caller doubles the working precision); integrity_error marks
// conditions that are impossible for well-formed inputs.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct input_error : error {
    using error::error;
};
struct precision_error : error {
    unsigned suggested_bits;
    explicit precision_error(const std::string& msg, unsigned bits = 0)
        : error(msg), suggested_bits(bits) {}
};
struct not_positive_definite : precision_error {
    using precision_error::precision_error;
};
struct search_exhausted : error {
    uint64_t tries;
    explicit search_exhausted(const std::string& msg, uint64_t t) : error(msg), tries(t) {}
};
struct integrity_error : error {
    using error::error;
};

inline mpz_class floor_div(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline mpz_class ceil_div(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

// Nearest integer to a/b, ties rounded up. |a - round*b| <= |b|/2.
inline mpz_class round_div(const mpz_class& a, const mpz_class& b) {
    if (b < 0) return round_div(mpz_class(-a), mpz_class(-b));
    return floor_div(2 * a + b, 2 * b);
}

inline mpz_class floor_q(const mpq_class& q) { return floor_div(q.get_num(), q.get_den()); }
inline mpz_class ceil_q(const mpq_class& q) { return ceil_div(q.get_num(), q.get_den()); }
inline mpz_class round_q(const mpq_class& q) { return round_div(q.get_num(), q.get_den()); }

inline mpz_class pow_z(const mpz_class& b, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

inline mpq_class pow_q(const mpq_class& b, unsigned long e) {
    mpq_class r(pow_z(b.get_num(), e), pow_z(b.get_den(), e));
    r.canonicalize();
    return r;
}

inline mpz_class pow2_z(unsigned long e) {
    mpz_class r = 1;
    mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), e);
    return r;
}

// 2^-e as an exact rational.
inline mpq_class pow2_q(long e) {
    if (e >= 0) return mpq_class(pow2_z(static_cast<unsigned long>(e)));
    mpq_class r(1, pow2_z(static_cast<unsigned long>(-e)));
    r.canonicalize();
    return r;
}

inline mpz_class isqrt_floor(const mpz_class& x) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
    return r;
}

inline mpz_class isqrt_ceil(const mpz_class& x) {
    mpz_class r = isqrt_floor(x);
    if (r * r != x) r += 1;
    return r;
}

// floor(x^(1/k)) for x >= 0; exact flag set when x is a perfect k-th power.
inline mpz_class root_floor(const mpz_class& x, unsigned long k, bool* exact = nullptr) {
    mpz_class r;
    int ex = mpz_root(r.get_mpz_t(), x.get_mpz_t(), k);
    if (exact) *exact = (ex != 0);
    return r;
}

inline mpz_class root_ceil(const mpz_class& x, unsigned long k, bool* exact = nullptr) {
    bool ex;
    mpz_class r = root_floor(x, k, &ex);
    if (exact) *exact = ex;
    if (!ex) r += 1;
    return r;
}

inline mpz_class binomial(unsigned long n, unsigned long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

inline mpq_class make_q(const mpz_class& num, const mpz_class& den) {
    mpq_class r(num, den);
    r.canonicalize();
    return r;
}

inline mpq_class abs_q(const mpq_class& x) { return x < 0 ? mpq_class(-x) : x; }

// Parses "p/q", plain integers, and decimal literals like "-3.25" or
// "1.5e-8".
inline mpq_class parse_rational(const std::string& s) {
    if (s.empty()) throw input_error("empty rational literal");
    if (s.find('/') != std::string::npos) {
        mpq_class q;
        if (q.set_str(s, 10) != 0) throw input_error("bad rational literal: " + s);
        if (q.get_den() == 0) throw input_error("zero denominator: " + s);
        q.canonicalize();
        return q;
    }
    std::string body = s;
    long exp10 = 0;
    auto epos = s.find_first_of("eE");
    if (epos != std::string::npos) {
        body = s.substr(0, epos);
        std::string es = s.substr(epos + 1);
        if (es.empty() || body.empty()) throw input_error("bad literal: " + s);
        try {
            size_t used = 0;
            exp10 = std::stol(es, &used);
            if (used != es.size()) throw std::invalid_argument(es);
        } catch (const std::exception&) {
            throw input_error("bad exponent: " + s);
        }
    }
    mpq_class base;
    auto dot = body.find('.');
    if (dot == std::string::npos) {
        mpz_class z;
        if (z.set_str(body, 10) != 0) throw input_error("bad integer literal: " + s);
        base = mpq_class(z);
    } else {
        std::string digits = body.substr(0, dot) + body.substr(dot + 1);
        size_t frac_len = body.size() - dot - 1;
        if (digits.empty() || frac_len == 0) throw input_error("bad decimal literal: " + s);
        mpz_class z;
        if (z.set_str(digits, 10) != 0) throw input_error("bad decimal literal: " + s);
        base = make_q(z, pow_z(10, frac_len));
    }
    if (exp10 > 0) base *= pow_z(10, exp10);
    if (exp10 < 0) base /= pow_z(10, -exp10);
    base.canonicalize();
    return base;
}

// Decimal rendering with `sig` significant digits, truncated toward zero.
// Fixed notation for moderate exponents, scientific otherwise.
inline std::string format_decimal(const mpq_class& x, unsigned sig = 12) {
    if (sig == 0) sig = 1;
    if (x == 0) return "0";
    mpq_class a = abs_q(x);
    // initial exponent estimate from digit counts
    long e10 = static_cast<long>(mpz_sizeinbase(a.get_num().get_mpz_t(), 10)) -
               static_cast<long>(mpz_sizeinbase(a.get_den().get_mpz_t(), 10));
    auto mantissa_for = [&](long e) {
        // floor(a * 10^(sig-1-e))
        long sh = static_cast<long>(sig) - 1 - e;
        mpq_class scaled = (sh >= 0) ? mpq_class(a * pow_z(10, sh))
                                     : make_q(a.get_num(), a.get_den() * pow_z(10, -sh));
        return floor_q(scaled);
    };
    mpz_class lo = pow_z(10, sig - 1), hi = pow_z(10, sig);
    mpz_class m = mantissa_for(e10);
    while (m >= hi) { ++e10; m = mantissa_for(e10); }
    while (m < lo) { --e10; m = mantissa_for(e10); }
    std::string digs = m.get_str();
    std::string sign = (x < 0) ? "-" : "";
    if (e10 >= 0 && e10 < 18) {
        if (static_cast<size_t>(e10) + 1 >= digs.size()) {
            return sign + digs + std::string(e10 + 1 - digs.size(), '0');
        }
        std::string out = sign + digs.substr(0, e10 + 1) + "." + digs.substr(e10 + 1);
        while (out.back() == '0') out.pop_back();
        if (out.back() == '.') out.pop_back();
        return out;
    }
    if (e10 < 0 && e10 >= -6) {
        std::string frac = std::string(-e10 - 1, '0') + digs;
        while (frac.back() == '0') frac.pop_back();
        return sign + "0." + frac;
    }
    std::string out = sign + digs.substr(0, 1);
    std::string rest = digs.substr(1);
    while (!rest.empty() && rest.back() == '0') rest.pop_back();
    if (!rest.empty()) out += "." + rest;
    out += "e" + std::to_string(e10);
    return out;
}

// Deterministic bounded draws from a seeded mt19937_64; avoids the
// implementation-defined std::uniform_int_distribution.
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t below(uint64_t n) {
        if (n == 0) throw error("Rng::below(0)");
        uint64_t threshold = (0 - n) % n;
        uint64_t v;
        do {
            v = eng_();
        } while (v < threshold);
        return v % n;
    }

    // uniform in [lo, hi], inclusive
    int64_t range(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace nfmodel
