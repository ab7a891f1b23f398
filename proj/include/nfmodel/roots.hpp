#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "nfmodel/interval.hpp"
#include "nfmodel/poly.hpp"
#include "nfmodel/util.hpp"

namespace nfmodel {

// Certified archimedean root data for a monic squarefree integer polynomial:
// one interval per real root (ascending) and one box per conjugate pair
// (imaginary part strictly positive; ordered by real part, then imaginary
// part). Every enclosure is certified by interval Newton contraction to
// contain exactly one root, all enclosures are pairwise disjoint, and the
// counts match the Sturm signature.
struct RootEnclosures {
    unsigned precision = 0;  // requested bits; every radius is <= 2^-precision
    std::vector<QInterval> reals;
    std::vector<QBox> complex_pairs;
    mpq_class max_radius;
};

namespace detail {

struct QC {
    mpq_class re, im;
};

inline QC qc_mul(const QC& a, const QC& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

inline QC qc_sub(const QC& a, const QC& b) { return {a.re - b.re, a.im - b.im}; }

inline QC qc_div(const QC& a, const QC& b) {
    mpq_class n = b.re * b.re + b.im * b.im;
    if (n == 0) throw error("qc_div: division by zero");
    QC r{(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    r.re.canonicalize();
    r.im.canonicalize();
    return r;
}

inline QC qc_eval(const ZPoly& p, const QC& x) {
    QC acc{mpq_class(0), mpq_class(0)};
    for (size_t i = p.size(); i-- > 0;) {
        acc = qc_mul(acc, x);
        acc.re += p[i];
    }
    return acc;
}

inline mpq_class round_dyadic(const mpq_class& x, unsigned long bits) {
    mpz_class num = x.get_num();
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), bits);
    return make_q(round_div(num, x.get_den()), pow2_z(bits));
}

inline QInterval eval_interval(const ZPoly& p, const QInterval& x) {
    QInterval acc;
    for (size_t i = p.size(); i-- > 0;) {
        acc = acc * x + mpq_class(p[i]);
    }
    return acc;
}

inline QBox eval_box(const ZPoly& p, const QBox& x) {
    QBox acc(mpq_class(0), mpq_class(0));
    for (size_t i = p.size(); i-- > 0;) {
        acc = acc * x;
        acc.re = acc.re + mpq_class(p[i]);
    }
    return acc;
}

inline std::vector<std::complex<double>> aberth_double(const ZPoly& f, unsigned salt) {
    size_t n = static_cast<size_t>(poly_degree(f));
    std::vector<double> c(f.size());
    for (size_t i = 0; i < f.size(); ++i) c[i] = f[i].get_d();
    double radius = 1.0;
    for (size_t i = 0; i + 1 < f.size(); ++i) radius = std::max(radius, std::abs(c[i]));
    radius = 1.0 + radius;
    auto eval = [&](std::complex<double> z, std::complex<double>* dz) {
        std::complex<double> p = 0.0, d = 0.0;
        for (size_t i = f.size(); i-- > 0;) {
            d = d * z + p;
            p = p * z + c[i];
        }
        *dz = d;
        return p;
    };
    std::vector<std::complex<double>> z(n);
    for (size_t k = 0; k < n; ++k) {
        double ang = 2.0 * M_PI * (static_cast<double>(k) + 0.31) / static_cast<double>(n) +
                     0.17 * (salt + 1);
        double rk = radius * (0.6 + 0.4 * static_cast<double>(k + 1) / static_cast<double>(n));
        z[k] = std::polar(rk, ang);
    }
    for (int it = 0; it < 400; ++it) {
        double worst = 0.0;
        for (size_t k = 0; k < n; ++k) {
            std::complex<double> dz;
            std::complex<double> p = eval(z[k], &dz);
            if (dz == 0.0) {
                z[k] += std::complex<double>(1e-8, 1e-8);
                worst = 1.0;
                continue;
            }
            std::complex<double> w = p / dz;
            std::complex<double> acc = 0.0;
            for (size_t j = 0; j < n; ++j)
                if (j != k) acc += 1.0 / (z[k] - z[j]);
            std::complex<double> denom = 1.0 - w * acc;
            std::complex<double> corr = (denom == 0.0) ? w : w / denom;
            z[k] -= corr;
            worst = std::max(worst, std::abs(corr) / (1.0 + std::abs(z[k])));
        }
        if (worst < 1e-14) break;
    }
    return z;
}

// Newton refinement in exact rational arithmetic, endpoints rounded to
// dyadics with `bits` fractional bits after every step.
inline bool polish_newton(const ZPoly& f, const ZPoly& fp, QC& z, unsigned long bits,
                          const mpq_class& tol) {
    for (int it = 0; it < 80; ++it) {
        QC val = qc_eval(f, z);
        QC der = qc_eval(fp, z);
        if (der.re == 0 && der.im == 0) return false;
        QC corr = qc_div(val, der);
        z.re = round_dyadic(z.re - corr.re, bits);
        z.im = round_dyadic(z.im - corr.im, bits);
        mpq_class mag = abs_q(corr.re) + abs_q(corr.im);
        if (mag <= tol) return true;
    }
    return false;
}

// Interval Newton certification for a real candidate. On success the
// returned interval contains exactly one root and has radius <= 2^-prec.
inline bool certify_real(const ZPoly& f, const ZPoly& fp, const mpq_class& center,
                         unsigned prec, QInterval* out) {
    unsigned long work = prec + 64;
    for (int grow = 0; grow < 24; ++grow) {
        mpq_class h = pow2_q(-static_cast<long>(prec) - 4 + 6 * grow);
        if (h > mpq_class(1, 4)) break;
        QInterval x = round_out(QInterval::from_mid_rad(center, h), work);
        QInterval dfx = eval_interval(fp, x);
        if (dfx.contains_zero()) continue;
        mpq_class m = x.mid();
        mpq_class fm = poly_eval(to_rational(f), m);
        QInterval newton = QInterval(m) - QInterval(fm) / dfx;
        if (!newton.inside(x)) continue;
        // contract until the target radius is met
        for (int it = 0; it < 80; ++it) {
            x = round_out(intersect(newton, x), work);
            if (x.rad() <= pow2_q(-static_cast<long>(prec))) {
                *out = x;
                return true;
            }
            dfx = eval_interval(fp, x);
            if (dfx.contains_zero()) break;
            m = round_dyadic(x.mid(), work);
            if (!x.contains(m)) m = x.mid();
            fm = poly_eval(to_rational(f), m);
            newton = QInterval(m) - QInterval(fm) / dfx;
            try {
                newton = intersect(newton, x);
            } catch (const error&) {
                break;
            }
        }
        return false;
    }
    return false;
}

inline bool certify_box(const ZPoly& f, const ZPoly& fp, const QC& center, unsigned prec,
                        QBox* out) {
    unsigned long work = prec + 64;
    for (int grow = 0; grow < 24; ++grow) {
        mpq_class h = pow2_q(-static_cast<long>(prec) - 4 + 6 * grow);
        if (h > mpq_class(1, 4)) break;
        QBox x(QInterval::from_mid_rad(center.re, h), QInterval::from_mid_rad(center.im, h));
        x = round_out(x, work);
        QBox dfx = eval_box(fp, x);
        if (dfx.abs_sq().contains_zero()) continue;
        QC m{x.re.mid(), x.im.mid()};
        QC fm = qc_eval(f, m);
        QBox newton =
            QBox(QInterval(m.re), QInterval(m.im)) - QBox(QInterval(fm.re), QInterval(fm.im)) / dfx;
        if (!newton.inside(x)) continue;
        for (int it = 0; it < 80; ++it) {
            x = round_out(QBox(intersect(newton.re, x.re), intersect(newton.im, x.im)), work);
            if (x.re.rad() <= pow2_q(-static_cast<long>(prec)) &&
                x.im.rad() <= pow2_q(-static_cast<long>(prec))) {
                *out = x;
                return true;
            }
            dfx = eval_box(fp, x);
            if (dfx.abs_sq().contains_zero()) break;
            m = {round_dyadic(x.re.mid(), work), round_dyadic(x.im.mid(), work)};
            if (!x.re.contains(m.re) || !x.im.contains(m.im)) m = {x.re.mid(), x.im.mid()};
            fm = qc_eval(f, m);
            newton = QBox(QInterval(m.re), QInterval(m.im)) -
                     QBox(QInterval(fm.re), QInterval(fm.im)) / dfx;
            try {
                newton = QBox(intersect(newton.re, x.re), intersect(newton.im, x.im));
            } catch (const error&) {
                break;
            }
        }
        return false;
    }
    return false;
}

}  // namespace detail

// Certified enclosures of all complex roots. Throws precision_error when the
// requested precision cannot be certified after internal retries; callers
// retry with doubled precision.
inline RootEnclosures complex_roots(const ZPoly& fin, unsigned precision = 128) {
    ZPoly f = fin;
    poly_trim(f);
    long deg = poly_degree(f);
    if (deg < 1) throw input_error("complex_roots: nonconstant polynomial required");
    if (f.back() != 1) throw input_error("complex_roots: monic polynomial required");
    size_t n = static_cast<size_t>(deg);
    unsigned r1 = count_real_roots(f);
    size_t s = (n - r1) / 2;
    ZPoly fp = poly_derivative(f);

    for (unsigned attempt = 0; attempt < 4; ++attempt) {
        auto approx = detail::aberth_double(f, attempt);
        // force the Sturm-certified real count: the r1 smallest |Im|
        std::vector<size_t> idx(n);
        for (size_t i = 0; i < n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
            return std::abs(approx[a].imag()) < std::abs(approx[b].imag());
        });
        std::vector<double> real_seeds;
        std::vector<std::complex<double>> pair_seeds;
        for (size_t t = 0; t < n; ++t) {
            if (t < r1) {
                real_seeds.push_back(approx[idx[t]].real());
            } else if (approx[idx[t]].imag() > 0) {
                pair_seeds.push_back(approx[idx[t]]);
            }
        }
        if (pair_seeds.size() != s) continue;

        unsigned long polish_bits = precision + 96 + 32 * attempt;
        mpq_class tol = pow2_q(-static_cast<long>(precision) - 16);
        bool ok = true;

        std::vector<QInterval> reals;
        for (double seed : real_seeds) {
            detail::QC z{detail::round_dyadic(mpq_class(seed), 60), mpq_class(0)};
            // real Newton: imaginary part stays zero
            bool conv = false;
            for (int it = 0; it < 80 && !conv; ++it) {
                mpq_class val = poly_eval(to_rational(f), z.re);
                mpq_class der = poly_eval(to_rational(fp), z.re);
                if (der == 0) break;
                mpq_class corr = val / der;
                z.re = detail::round_dyadic(z.re - corr, polish_bits);
                if (abs_q(corr) <= tol) conv = true;
            }
            QInterval enc;
            if (!conv || !detail::certify_real(f, fp, z.re, precision, &enc)) {
                ok = false;
                break;
            }
            reals.push_back(enc);
        }
        if (!ok) continue;

        std::vector<QBox> pairs;
        for (auto seed : pair_seeds) {
            detail::QC z{detail::round_dyadic(mpq_class(seed.real()), 60),
                         detail::round_dyadic(mpq_class(seed.imag()), 60)};
            if (!detail::polish_newton(f, fp, z, polish_bits, tol)) {
                ok = false;
                break;
            }
            if (z.im < 0) z.im = -z.im;
            QBox enc;
            if (!detail::certify_box(f, fp, z, precision, &enc) || !(enc.im.lo > 0)) {
                ok = false;
                break;
            }
            pairs.push_back(enc);
        }
        if (!ok) continue;

        std::sort(reals.begin(), reals.end(),
                  [](const QInterval& a, const QInterval& b) { return a.mid() < b.mid(); });
        std::sort(pairs.begin(), pairs.end(), [](const QBox& a, const QBox& b) {
            mpq_class ar = a.re.mid(), br = b.re.mid();
            if (ar != br) return ar < br;
            return a.im.mid() < b.im.mid();
        });
        for (size_t i = 0; ok && i + 1 < reals.size(); ++i)
            if (!reals[i].disjoint(reals[i + 1])) ok = false;
        for (size_t i = 0; ok && i < pairs.size(); ++i)
            for (size_t j = i + 1; ok && j < pairs.size(); ++j)
                if (!pairs[i].disjoint(pairs[j])) ok = false;
        if (!ok) continue;

        RootEnclosures out;
        out.precision = precision;
        out.reals = std::move(reals);
        out.complex_pairs = std::move(pairs);
        out.max_radius = 0;
        for (const auto& r : out.reals) out.max_radius = std::max(out.max_radius, r.rad());
        for (const auto& b : out.complex_pairs) {
            out.max_radius = std::max(out.max_radius, b.re.rad());
            out.max_radius = std::max(out.max_radius, b.im.rad());
        }
        return out;
    }
    throw precision_error("complex_roots: could not certify enclosures; retry with higher precision",
                          precision * 2);
}

}  // namespace nfmodel
