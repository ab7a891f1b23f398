#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "nfmodel/util.hpp"

namespace nfmodel {

// Dense row-major matrix over an exact coefficient type (mpz_class or
// mpq_class). Kept minimal: the algorithms below are what the rest of the
// library needs, nothing more.
template <class T>
class Mat {
  public:
    Mat() = default;
    Mat(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static Mat identity(size_t n) {
        Mat m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    T& operator()(size_t i, size_t j) { return a_[i * cols_ + j]; }
    const T& operator()(size_t i, size_t j) const { return a_[i * cols_ + j]; }

    void swap_rows(size_t i, size_t j) {
        if (i == j) return;
        for (size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
    }

    std::vector<T> row(size_t i) const {
        return std::vector<T>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
    }

    void set_row(size_t i, const std::vector<T>& r) {
        std::copy(r.begin(), r.end(), a_.begin() + i * cols_);
    }

    bool operator==(const Mat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

  private:
    size_t rows_ = 0, cols_ = 0;
    std::vector<T> a_;
};

using ZMat = Mat<mpz_class>;
using QMat = Mat<mpq_class>;

template <class T>
Mat<T> transpose(const Mat<T>& m) {
    Mat<T> t(m.cols(), m.rows());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
    return t;
}

template <class T>
Mat<T> mat_mul(const Mat<T>& a, const Mat<T>& b) {
    if (a.cols() != b.rows()) throw error("mat_mul: shape mismatch");
    Mat<T> c(a.rows(), b.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0) continue;
            for (size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

inline QMat to_rational(const ZMat& m) {
    QMat q(m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) q(i, j) = mpq_class(m(i, j));
    return q;
}

// Clears denominators row by row; rank and kernel are unchanged.
inline ZMat scale_rows_to_integer(const QMat& m, ZVec* scales = nullptr) {
    ZMat z(m.rows(), m.cols());
    if (scales) scales->assign(m.rows(), 1);
    for (size_t i = 0; i < m.rows(); ++i) {
        mpz_class l = 1;
        for (size_t j = 0; j < m.cols(); ++j) {
            mpz_class d = m(i, j).get_den();
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
            l = l / g * d;
        }
        for (size_t j = 0; j < m.cols(); ++j) {
            mpq_class v = m(i, j) * l;
            z(i, j) = v.get_num();  // denominator is 1 by construction
        }
        if (scales) (*scales)[i] = l;
    }
    return z;
}

// Fraction-free (Bareiss) elimination. Deterministic: pivots are chosen as
// the first nonzero entry scanning down each column.
inline size_t bareiss_rank(ZMat m) {
    size_t rank = 0, row = 0;
    mpz_class prev = 1;
    for (size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        size_t piv = row;
        while (piv < m.rows() && m(piv, col) == 0) ++piv;
        if (piv == m.rows()) continue;
        m.swap_rows(row, piv);
        for (size_t i = row + 1; i < m.rows(); ++i) {
            for (size_t j = col + 1; j < m.cols(); ++j) {
                mpz_class t = m(row, col) * m(i, j) - m(i, col) * m(row, j);
                mpz_divexact(m(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            m(i, col) = 0;
        }
        prev = m(row, col);
        ++row;
        ++rank;
    }
    return rank;
}

inline size_t bareiss_rank(const QMat& m) { return bareiss_rank(scale_rows_to_integer(m)); }

inline mpz_class bareiss_det(ZMat m) {
    if (m.rows() != m.cols()) throw error("bareiss_det: square matrix required");
    size_t n = m.rows();
    if (n == 0) return 1;
    mpz_class prev = 1;
    int sign = 1;
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && m(piv, col) == 0) ++piv;
        if (piv == n) return 0;
        if (piv != col) {
            m.swap_rows(col, piv);
            sign = -sign;
        }
        for (size_t i = col + 1; i < n; ++i) {
            for (size_t j = col + 1; j < n; ++j) {
                mpz_class t = m(col, col) * m(i, j) - m(i, col) * m(col, j);
                mpz_divexact(m(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            m(i, col) = 0;
        }
        prev = m(col, col);
    }
    return sign > 0 ? m(n - 1, n - 1) : mpz_class(-m(n - 1, n - 1));
}

inline mpq_class det(const QMat& m) {
    if (m.rows() != m.cols()) throw error("det: square matrix required");
    ZVec scales;
    ZMat z = scale_rows_to_integer(m, &scales);
    mpz_class dz = bareiss_det(z);
    mpz_class denom = 1;
    for (const auto& s : scales) denom *= s;
    return make_q(dz, denom);
}

inline int cmpabs(const mpz_class& a, const mpz_class& b) {
    return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t());
}

// Row Hermite normal form with unimodular transform: U * A = H, det U = +-1.
// Pivots positive, entries above each pivot reduced into [0, pivot),
// pivot columns strictly increasing. Zero rows sink to the bottom.
inline std::pair<ZMat, ZMat> hnf_rows(const ZMat& a) {
    ZMat h = a;
    ZMat u = ZMat::identity(a.rows());
    size_t row = 0;
    for (size_t col = 0; col < h.cols() && row < h.rows(); ++col) {
        // Euclidean elimination below `row` in this column
        for (;;) {
            size_t best = h.rows();
            for (size_t i = row; i < h.rows(); ++i) {
                if (h(i, col) == 0) continue;
                if (best == h.rows() || cmpabs(h(i, col), h(best, col)) < 0) best = i;
            }
            if (best == h.rows()) break;  // column exhausted
            h.swap_rows(row, best);
            u.swap_rows(row, best);
            bool clean = true;
            for (size_t i = row + 1; i < h.rows(); ++i) {
                if (h(i, col) == 0) continue;
                mpz_class q = round_div(h(i, col), h(row, col));
                if (q != 0) {
                    for (size_t j = 0; j < h.cols(); ++j) h(i, j) -= q * h(row, j);
                    for (size_t j = 0; j < u.cols(); ++j) u(i, j) -= q * u(row, j);
                }
                if (h(i, col) != 0) clean = false;
            }
            if (clean) break;
        }
        if (h(row, col) == 0) continue;
        if (h(row, col) < 0) {
            for (size_t j = 0; j < h.cols(); ++j) h(row, j) = -h(row, j);
            for (size_t j = 0; j < u.cols(); ++j) u(row, j) = -u(row, j);
        }
        for (size_t i = 0; i < row; ++i) {
            mpz_class q = floor_div(h(i, col), h(row, col));
            if (q != 0) {
                for (size_t j = 0; j < h.cols(); ++j) h(i, j) -= q * h(row, j);
                for (size_t j = 0; j < u.cols(); ++j) u(i, j) -= q * u(row, j);
            }
        }
        ++row;
    }
    return {h, u};
}

inline bool is_zero_row(const ZMat& m, size_t i) {
    for (size_t j = 0; j < m.cols(); ++j)
        if (m(i, j) != 0) return false;
    return true;
}

// Basis of { v in Z^N : M v^t = 0 } as rows, HNF-canonicalized. The result
// is saturated: kernels of integer matrices are direct summands of Z^N.
inline ZMat kernel_basis(const ZMat& m) {
    ZMat a = transpose(m);  // N x n
    auto [h, u] = hnf_rows(a);
    std::vector<size_t> zero_rows;
    for (size_t i = 0; i < h.rows(); ++i)
        if (is_zero_row(h, i)) zero_rows.push_back(i);
    ZMat k(zero_rows.size(), m.cols());
    for (size_t t = 0; t < zero_rows.size(); ++t)
        for (size_t j = 0; j < m.cols(); ++j) k(t, j) = u(zero_rows[t], j);
    if (k.rows() == 0) return k;
    auto [kh, ku] = hnf_rows(k);
    return kh;
}

// Gaussian elimination over Q; returns std::nullopt for singular systems.
inline std::optional<QVec> solve(QMat a, QVec b) {
    if (a.rows() != a.cols() || b.size() != a.rows()) throw error("solve: shape mismatch");
    size_t n = a.rows();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && a(piv, col) == 0) ++piv;
        if (piv == n) return std::nullopt;
        a.swap_rows(col, piv);
        std::swap(b[col], b[piv]);
        for (size_t i = col + 1; i < n; ++i) {
            if (a(i, col) == 0) continue;
            mpq_class f = a(i, col) / a(col, col);
            for (size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
            b[i] -= f * b[col];
        }
    }
    QVec x(n);
    for (size_t i = n; i-- > 0;) {
        mpq_class s = b[i];
        for (size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
        x[i].canonicalize();
    }
    return x;
}

inline std::optional<QMat> inverse(const QMat& a) {
    if (a.rows() != a.cols()) throw error("inverse: square matrix required");
    size_t n = a.rows();
    QMat inv(n, n);
    for (size_t c = 0; c < n; ++c) {
        QVec e(n);
        e[c] = 1;
        auto col = solve(a, e);
        if (!col) return std::nullopt;
        for (size_t i = 0; i < n; ++i) inv(i, c) = (*col)[i];
    }
    return inv;
}

}  // namespace nfmodel
