#pragma once

#include "toral/arith/ball.hpp"
#include "toral/error.hpp"

#include <cstddef>
#include <numeric>
#include <vector>

namespace toral {

namespace detail {

inline Ball laplace_det(const BallMatrix& m) {
    std::size_t n = m.size();
    prec_t p = n ? m[0][0].prec() : kDefaultPrecBits;
    if (n == 0)
        return Ball::from_long(1, p);
    if (n == 1)
        return m[0][0];
    Ball acc(p);
    for (std::size_t j = 0; j < n; ++j) {
        BallMatrix minor;
        for (std::size_t i = 1; i < n; ++i) {
            BallVector row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j)
                    row.push_back(m[i][k]);
            minor.push_back(std::move(row));
        }
        Ball term = m[0][j] * laplace_det(minor);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

/// Hadamard bound ball: [-prod |row|, prod |row|].
inline Ball hadamard_ball(const BallMatrix& m, prec_t p) {
    double bound = 1;
    for (const auto& row : m) {
        double s = 0;
        for (const auto& x : row) {
            double u = x.mag_upper();
            s += u * u;
        }
        bound *= std::sqrt(s) * (1 + 1e-12);
    }
    return Ball::from_double(0, bound, p);
}

} // namespace detail

/// Determinant enclosure by Gaussian elimination with largest-midpoint
/// pivoting. A degenerate pivot falls back to cofactor expansion on the
/// remaining block (or a Hadamard bound when that block is large).
inline Ball ball_det(BallMatrix m) {
    std::size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n)
            throw InputError("ball_det: matrix is not square");
    prec_t p = n ? m[0][0].prec() : kDefaultPrecBits;
    Ball det = Ball::from_long(1, p);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = -1;
        for (std::size_t i = k; i < n; ++i) {
            if (m[i][k].contains_zero())
                continue;
            double v = std::fabs(m[i][k].mid_double());
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best < 0) {
            if (k + 1 == n)
                return det * m[k][k];
            BallMatrix rest;
            for (std::size_t i = k; i < n; ++i)
                rest.emplace_back(m[i].begin() + static_cast<long>(k), m[i].end());
            if (n - k <= 6)
                return det * detail::laplace_det(rest);
            return det * detail::hadamard_ball(rest, p);
        }
        if (piv != k) {
            std::swap(m[piv], m[k]);
            det = -det;
        }
        det *= m[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            Ball f = m[i][k] / m[k][k];
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] -= f * m[k][j];
        }
    }
    return det;
}

/// Structural zero certificate for odd-dimensional skew-symmetric matrices.
/// The caller asserts that the exact quantities behind the balls satisfy
/// M = -M^T; the balls must not refute that assertion.
inline bool det_exact_zero_by_skew(const BallMatrix& m, bool skew_asserted) {
    std::size_t n = m.size();
    if (!skew_asserted)
        throw StructureError("skew-symmetry not asserted");
    if (n % 2 == 0)
        throw StructureError("skew-symmetric determinant vanishes only in odd dimension");
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i].size() != n)
            throw StructureError("matrix is not square");
        for (std::size_t j = 0; j < n; ++j)
            if (!(m[i][j] + m[j][i]).contains_zero())
                throw StructureError("entries refute skew-symmetry");
    }
    return true;
}

/// Certified inverse; throws PrecisionExhausted when a pivot cannot be
/// separated from zero at the working precision.
inline BallMatrix ball_inverse(const BallMatrix& a) {
    std::size_t n = a.size();
    prec_t p = n ? a[0][0].prec() : kDefaultPrecBits;
    BallMatrix m = a;
    BallMatrix inv(n, BallVector(n, Ball(p)));
    for (std::size_t i = 0; i < n; ++i)
        inv[i][i] = Ball::from_long(1, p);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = n;
        double best = -1;
        for (std::size_t i = k; i < n; ++i) {
            if (m[i][k].contains_zero())
                continue;
            double v = std::fabs(m[i][k].mid_double());
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (piv == n)
            throw PrecisionExhausted("ball_inverse: pivot not separated from zero");
        std::swap(m[piv], m[k]);
        std::swap(inv[piv], inv[k]);
        Ball d = m[k][k];
        for (std::size_t j = 0; j < n; ++j) {
            m[k][j] = m[k][j] / d;
            inv[k][j] = inv[k][j] / d;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k)
                continue;
            Ball f = m[i][k];
            for (std::size_t j = 0; j < n; ++j) {
                m[i][j] -= f * m[k][j];
                inv[i][j] -= f * inv[k][j];
            }
        }
    }
    return inv;
}

inline BallMatrix transpose(const BallMatrix& a) {
    if (a.empty())
        return {};
    BallMatrix t(a[0].size(), BallVector(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j)
            t[j][i] = a[i][j];
    return t;
}

inline BallMatrix multiply(const BallMatrix& a, const BallMatrix& b) {
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    prec_t p = n ? a[0][0].prec() : kDefaultPrecBits;
    BallMatrix c(n, BallVector(m, Ball(p)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            Ball s(p);
            for (std::size_t l = 0; l < k; ++l)
                s += a[i][l] * b[l][j];
            c[i][j] = s;
        }
    return c;
}

/// Gram matrix of the rows.
inline BallMatrix gram(const BallMatrix& rows) {
    std::size_t n = rows.size();
    prec_t p = n ? rows[0][0].prec() : kDefaultPrecBits;
    BallMatrix g(n, BallVector(n, Ball(p)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            g[i][j] = dot(rows[i], rows[j]);
            g[j][i] = g[i][j];
        }
    return g;
}

} // namespace toral
