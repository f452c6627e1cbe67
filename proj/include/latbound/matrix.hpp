#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "latbound/types.hpp"

namespace latbound {

// Dense matrices over Int / Rat, value semantics, row-major.
template <typename T>
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<T> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a((size_t)r * c) {}

    T& operator()(int r, int c) { return a[(size_t)r * cols + c]; }
    const T& operator()(int r, int c) const { return a[(size_t)r * cols + c]; }

    bool operator==(const Mat& o) const {
        return rows == o.rows && cols == o.cols && a == o.a;
    }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    Mat transposed() const {
        Mat m(cols, rows);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) m(c, r) = (*this)(r, c);
        return m;
    }
};

using IntMat = Mat<Int>;
using RatMat = Mat<Rat>;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

template <typename T>
Mat<T> mat_mul(const Mat<T>& x, const Mat<T>& y) {
    if (x.cols != y.rows) throw BadInput("matrix product shape mismatch");
    Mat<T> z(x.rows, y.cols);
    for (int r = 0; r < x.rows; ++r)
        for (int k = 0; k < x.cols; ++k) {
            const T& v = x(r, k);
            if (v == 0) continue;
            for (int c = 0; c < y.cols; ++c) z(r, c) += v * y(k, c);
        }
    return z;
}

inline RatMat to_rat(const IntMat& m) {
    RatMat r(m.rows, m.cols);
    for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = Rat(m.a[i]);
    return r;
}

inline IntMat from_rows(const std::vector<IntVec>& rows) {
    if (rows.empty()) return IntMat(0, 0);
    IntMat m((int)rows.size(), (int)rows[0].size());
    for (int r = 0; r < m.rows; ++r) {
        if ((int)rows[r].size() != m.cols) throw BadInput("ragged matrix rows");
        for (int c = 0; c < m.cols; ++c) m(r, c) = rows[r][c];
    }
    return m;
}

// Fraction-free (Bareiss) determinant with row pivoting.
inline Int det_int(IntMat m) {
    if (m.rows != m.cols) throw BadInput("determinant of non-square matrix");
    int n = m.rows;
    if (n == 0) return 1;
    Int sign = 1, prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m(k, k) == 0) {
            int p = -1;
            for (int r = k + 1; r < n; ++r)
                if (m(r, k) != 0) { p = r; break; }
            if (p < 0) return 0;
            for (int c = k; c < n; ++c) std::swap(m(k, c), m(p, c));
            sign = -sign;
        }
        for (int r = k + 1; r < n; ++r)
            for (int c = k + 1; c < n; ++c)
                m(r, c) = (m(r, c) * m(k, k) - m(r, k) * m(k, c)) / prev;
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

// Leading principal minors D_1..D_n of a symmetric matrix, via pivot-free
// Bareiss: after step k the (k,k) entry equals D_k.  Stops early (returning
// the partial list) if a zero pivot blocks the elimination; callers testing
// definiteness only need the minors up to the first non-positive one.
inline std::vector<Int> leading_minors(IntMat m) {
    if (m.rows != m.cols) throw BadInput("minors of non-square matrix");
    int n = m.rows;
    std::vector<Int> mins;
    Int prev = 1;
    for (int k = 0; k < n; ++k) {
        mins.push_back(m(k, k));
        if (m(k, k) == 0) break;
        for (int r = k + 1; r < n; ++r)
            for (int c = k + 1; c < n; ++c)
                m(r, c) = (m(r, c) * m(k, k) - m(r, k) * m(k, c)) / prev;
        prev = m(k, k);
    }
    return mins;
}

// Exact inverse over Q.  Throws SingularGram on singular input.
inline RatMat inverse_rat(const IntMat& m) {
    if (m.rows != m.cols) throw BadInput("inverse of non-square matrix");
    int n = m.rows;
    RatMat w = to_rat(m);
    RatMat inv = RatMat::identity(n);
    for (int k = 0; k < n; ++k) {
        int p = -1;
        for (int r = k; r < n; ++r)
            if (w(r, k) != 0) { p = r; break; }
        if (p < 0) throw SingularGram("matrix is singular");
        if (p != k)
            for (int c = 0; c < n; ++c) {
                std::swap(w(k, c), w(p, c));
                std::swap(inv(k, c), inv(p, c));
            }
        Rat piv = w(k, k);
        for (int c = 0; c < n; ++c) { w(k, c) /= piv; inv(k, c) /= piv; }
        for (int r = 0; r < n; ++r) {
            if (r == k || w(r, k) == 0) continue;
            Rat f = w(r, k);
            for (int c = 0; c < n; ++c) {
                w(r, c) -= f * w(k, c);
                inv(r, c) -= f * inv(k, c);
            }
        }
    }
    return inv;
}

// Row-style Hermite form: pivots positive, entries above each pivot reduced
// into [0, pivot), zero rows dropped.  Row operations are unimodular, so the
// result is a canonical basis of the row lattice.
inline IntMat hnf_rows(IntMat m) {
    int r0 = 0;
    for (int c = 0; c < m.cols && r0 < m.rows; ++c) {
        // gcd-reduce column c below r0 until one nonzero entry remains
        for (;;) {
            int p = -1;
            for (int r = r0; r < m.rows; ++r)
                if (m(r, c) != 0 && (p < 0 || abs_int(m(r, c)) < abs_int(m(p, c)))) p = r;
            if (p < 0) break;
            if (p != r0)
                for (int cc = 0; cc < m.cols; ++cc) std::swap(m(r0, cc), m(p, cc));
            bool again = false;
            for (int r = r0 + 1; r < m.rows; ++r) {
                if (m(r, c) == 0) continue;
                Int q = m(r, c) / m(r0, c);
                for (int cc = 0; cc < m.cols; ++cc) m(r, cc) -= q * m(r0, cc);
                if (m(r, c) != 0) again = true;
            }
            if (!again) break;
        }
        if (m(r0, c) == 0) continue;
        if (m(r0, c) < 0)
            for (int cc = 0; cc < m.cols; ++cc) m(r0, cc) = -m(r0, cc);
        for (int r = 0; r < r0; ++r) {
            Int q = m(r, c) / m(r0, c);
            if (m(r, c) - q * m(r0, c) < 0) q -= 1;
            if (q != 0)
                for (int cc = 0; cc < m.cols; ++cc) m(r, cc) -= q * m(r0, cc);
        }
        ++r0;
    }
    IntMat out(r0, m.cols);
    for (int r = 0; r < r0; ++r)
        for (int c = 0; c < m.cols; ++c) out(r, c) = m(r, c);
    return out;
}

// Z-basis of { x in Z^n : A x = 0 }, returned as rows in Hermite form.
// Column reduction with an accumulated unimodular transform keeps the kernel
// saturated, so no rational solve or clearing of denominators is needed.
inline IntMat kernel_int(const IntMat& A) {
    int mrows = A.rows, n = A.cols;
    IntMat M = A;
    IntMat U = IntMat::identity(n);
    int cdone = 0;
    for (int r = 0; r < mrows && cdone < n; ++r) {
        for (;;) {
            int p = -1;
            for (int c = cdone; c < n; ++c)
                if (M(r, c) != 0 && (p < 0 || abs_int(M(r, c)) < abs_int(M(r, p)))) p = c;
            if (p < 0) break;
            if (p != cdone)
                for (int rr = 0; rr < mrows; ++rr) std::swap(M(rr, cdone), M(rr, p));
            if (p != cdone)
                for (int rr = 0; rr < n; ++rr) std::swap(U(rr, cdone), U(rr, p));
            bool again = false;
            for (int c = cdone + 1; c < n; ++c) {
                if (M(r, c) == 0) continue;
                Int q = M(r, c) / M(r, cdone);
                for (int rr = 0; rr < mrows; ++rr) M(rr, c) -= q * M(rr, cdone);
                for (int rr = 0; rr < n; ++rr) U(rr, c) -= q * U(rr, cdone);
                if (M(r, c) != 0) again = true;
            }
            if (!again) break;
        }
        if (M(r, cdone) != 0) ++cdone;
    }
    IntMat K(n - cdone, n);
    for (int c = cdone; c < n; ++c)
        for (int r = 0; r < n; ++r) K(c - cdone, r) = U(r, c);
    return hnf_rows(K);
}

// Solve A x = b over Q: particular solution plus a basis of the rational
// kernel, or nullopt when inconsistent.
inline std::optional<std::pair<RatVec, std::vector<RatVec>>>
solve_rat(const RatMat& A, const RatVec& b) {
    int m = A.rows, n = A.cols;
    if ((int)b.size() != m) throw BadInput("solve shape mismatch");
    RatMat w(m, n + 1);
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < n; ++c) w(r, c) = A(r, c);
        w(r, n) = b[r];
    }
    std::vector<int> pivot_col;
    int rr = 0;
    for (int c = 0; c < n && rr < m; ++c) {
        int p = -1;
        for (int r = rr; r < m; ++r)
            if (w(r, c) != 0) { p = r; break; }
        if (p < 0) continue;
        if (p != rr)
            for (int cc = 0; cc <= n; ++cc) std::swap(w(rr, cc), w(p, cc));
        Rat piv = w(rr, c);
        for (int cc = 0; cc <= n; ++cc) w(rr, cc) /= piv;
        for (int r = 0; r < m; ++r) {
            if (r == rr || w(r, c) == 0) continue;
            Rat f = w(r, c);
            for (int cc = 0; cc <= n; ++cc) w(r, cc) -= f * w(rr, cc);
        }
        pivot_col.push_back(c);
        ++rr;
    }
    for (int r = rr; r < m; ++r)
        if (w(r, n) != 0) return std::nullopt;
    RatVec x(n, Rat(0));
    for (int i = 0; i < (int)pivot_col.size(); ++i) x[pivot_col[i]] = w(i, n);
    std::vector<RatVec> ker;
    std::vector<bool> is_pivot(n, false);
    for (int c : pivot_col) is_pivot[c] = true;
    for (int c = 0; c < n; ++c) {
        if (is_pivot[c]) continue;
        RatVec v(n, Rat(0));
        v[c] = 1;
        for (int i = 0; i < (int)pivot_col.size(); ++i) v[pivot_col[i]] = -w(i, c);
        ker.push_back(std::move(v));
    }
    return std::make_pair(std::move(x), std::move(ker));
}

} // namespace latbound
