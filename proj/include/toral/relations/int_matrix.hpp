#pragma once

#include "toral/arith/numbers.hpp"
#include "toral/error.hpp"

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <utility>
#include <vector>

namespace toral {

/// Dense matrix of arbitrary-precision integers. Row-major; rows may be zero
/// in number while `cols` still records the ambient dimension.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, Integer(0)) {}
    IntMatrix(std::initializer_list<std::initializer_list<long>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        for (const auto& r : init) {
            if (r.size() != cols_)
                throw InputError("IntMatrix: ragged initializer");
            for (long v : r)
                a_.emplace_back(v);
        }
    }

    static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols) {
        IntMatrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols)
                throw InputError("IntMatrix: row length mismatch");
            for (std::size_t j = 0; j < cols; ++j)
                m(i, j) = rows[i][j];
        }
        return m;
    }
    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Integer& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    IntVector row(std::size_t i) const {
        return IntVector(a_.begin() + static_cast<long>(i * cols_), a_.begin() + static_cast<long>((i + 1) * cols_));
    }
    std::vector<IntVector> row_list() const {
        std::vector<IntVector> out;
        for (std::size_t i = 0; i < rows_; ++i)
            out.push_back(row(i));
        return out;
    }
    void set_row(std::size_t i, const IntVector& v) {
        for (std::size_t j = 0; j < cols_; ++j)
            (*this)(i, j) = v[j];
    }
    void append_row(const IntVector& v) {
        if (rows_ == 0 && cols_ == 0)
            cols_ = v.size();
        if (v.size() != cols_)
            throw InputError("IntMatrix: row length mismatch");
        a_.insert(a_.end(), v.begin(), v.end());
        ++rows_;
    }
    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j)
            return;
        for (std::size_t k = 0; k < cols_; ++k)
            std::swap((*this)(i, k), (*this)(j, k));
    }
    void swap_cols(std::size_t i, std::size_t j) {
        if (i == j)
            return;
        for (std::size_t k = 0; k < rows_; ++k)
            std::swap((*this)(k, i), (*this)(k, j));
    }
    /// row_i += f * row_j
    void add_row_multiple(std::size_t i, std::size_t j, const Integer& f) {
        for (std::size_t k = 0; k < cols_; ++k)
            (*this)(i, k) += f * (*this)(j, k);
    }
    void add_col_multiple(std::size_t i, std::size_t j, const Integer& f) {
        for (std::size_t k = 0; k < rows_; ++k)
            (*this)(k, i) += f * (*this)(k, j);
    }
    void negate_row(std::size_t i) {
        for (std::size_t k = 0; k < cols_; ++k)
            (*this)(i, k) = -(*this)(i, k);
    }

    IntMatrix transposed() const {
        IntMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    bool is_zero() const {
        for (const auto& x : a_)
            if (x != 0)
                return false;
        return true;
    }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
        if (a.cols_ != b.rows_)
            throw InputError("IntMatrix: dimension mismatch in product");
        IntMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (a(i, k) == 0)
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    c(i, j) += a(i, k) * b(k, j);
            }
        return c;
    }
    friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    friend std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
        os << "[";
        for (std::size_t i = 0; i < m.rows_; ++i) {
            os << (i ? ", " : "") << "[";
            for (std::size_t j = 0; j < m.cols_; ++j)
                os << (j ? ", " : "") << m(i, j);
            os << "]";
        }
        return os << "]";
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> a_;
};

inline IntVector operator*(const IntVector& v, const IntMatrix& m) {
    IntVector out(m.cols(), Integer(0));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out[j] += v[i] * m(i, j);
    return out;
}

inline IntVector operator*(const IntMatrix& m, const IntVector& v) {
    IntVector out(m.rows(), Integer(0));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out[i] += m(i, j) * v[j];
    return out;
}

inline Integer dot(const IntVector& a, const IntVector& b) {
    Integer s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

/// Exact determinant by fraction-free (Bareiss) elimination.
inline Integer determinant(IntMatrix m) {
    std::size_t n = m.rows();
    if (n != m.cols())
        throw InputError("determinant: matrix is not square");
    if (n == 0)
        return 1;
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && m(p, k) == 0)
                ++p;
            if (p == n)
                return 0;
            m.swap_rows(p, k);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

/// Rank over Q.
inline std::size_t rank(IntMatrix m) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c) == 0)
            ++p;
        if (p == m.rows())
            continue;
        m.swap_rows(p, r);
        for (std::size_t i = r + 1; i < m.rows(); ++i) {
            if (m(i, c) == 0)
                continue;
            Integer a = m(r, c), b = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                m(i, j) = m(i, j) * a - m(r, j) * b;
            Integer g = 0;
            for (std::size_t j = c; j < m.cols(); ++j)
                g = gcd(g, m(i, j));
            if (g > 1)
                for (std::size_t j = c; j < m.cols(); ++j)
                    m(i, j) /= g;
        }
        ++r;
    }
    return r;
}

inline bool is_unimodular(const IntMatrix& m) {
    if (m.rows() != m.cols())
        return false;
    Integer d = determinant(m);
    return d == 1 || d == -1;
}

/// Rational matrix inverse of a square integer matrix; throws RankError if singular.
inline std::vector<RatVector> rational_inverse(const IntMatrix& a) {
    std::size_t n = a.rows();
    std::vector<RatVector> m(n, RatVector(2 * n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            m[i][j] = a(i, j);
        m[i][n + i] = 1;
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && m[p][k] == 0)
            ++p;
        if (p == n)
            throw RankError("rational_inverse: singular matrix");
        std::swap(m[p], m[k]);
        Rational d = m[k][k];
        for (auto& x : m[k])
            x /= d;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || m[i][k] == 0)
                continue;
            Rational f = m[i][k];
            for (std::size_t j = 0; j < 2 * n; ++j)
                m[i][j] -= f * m[k][j];
        }
    }
    std::vector<RatVector> inv(n, RatVector(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            inv[i][j] = m[i][n + j];
    return inv;
}

} // namespace toral
