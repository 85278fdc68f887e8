#pragma once

#include "toral/relations/int_matrix.hpp"

#include <cstddef>
#include <vector>

namespace toral {

struct HnfResult {
    IntMatrix h;         ///< row Hermite form, zero rows last
    IntMatrix transform; ///< h = transform * M, unimodular
    std::size_t rank = 0;
};

struct SnfResult {
    IntMatrix d;     ///< diagonal, d_i | d_{i+1}, nonnegative
    IntMatrix left;  ///< d = left * M * right
    IntMatrix right;
    std::vector<Integer> divisors() const {
        std::vector<Integer> out;
        for (std::size_t i = 0; i < d.rows() && i < d.cols(); ++i)
            if (d(i, i) != 0)
                out.push_back(d(i, i));
        return out;
    }
};

namespace detail {

/// Replace rows (i, j) by a unimodular combination putting gcd(m(i,c), m(j,c))
/// in row i and zero in row j. Applied to `u` as well.
inline void gcd_rows(IntMatrix& m, IntMatrix& u, std::size_t i, std::size_t j, std::size_t c) {
    Integer a = m(i, c), b = m(j, c);
    if (b == 0)
        return;
    if (a != 0 && b % a == 0) {
        Integer q = -b / a;
        m.add_row_multiple(j, i, q);
        u.add_row_multiple(j, i, q);
        return;
    }
    Integer g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    Integer x = -b / g, y = a / g;
    auto combine = [&](IntMatrix& mat) {
        for (std::size_t k = 0; k < mat.cols(); ++k) {
            Integer ri = mat(i, k), rj = mat(j, k);
            mat(i, k) = s * ri + t * rj;
            mat(j, k) = x * ri + y * rj;
        }
    };
    combine(m);
    combine(u);
}

inline void gcd_cols(IntMatrix& m, IntMatrix& v, std::size_t i, std::size_t j, std::size_t r) {
    Integer a = m(r, i), b = m(r, j);
    if (b == 0)
        return;
    if (a != 0 && b % a == 0) {
        Integer q = -b / a;
        m.add_col_multiple(j, i, q);
        v.add_col_multiple(j, i, q);
        return;
    }
    Integer g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    Integer x = -b / g, y = a / g;
    auto combine = [&](IntMatrix& mat) {
        for (std::size_t k = 0; k < mat.rows(); ++k) {
            Integer ci = mat(k, i), cj = mat(k, j);
            mat(k, i) = s * ci + t * cj;
            mat(k, j) = x * ci + y * cj;
        }
    };
    combine(m);
    combine(v);
}

} // namespace detail

/// Row Hermite normal form: echelon, positive pivots, entries above each
/// pivot reduced into [0, pivot).
inline HnfResult hnf_with_transform(const IntMatrix& m) {
    IntMatrix h = m;
    IntMatrix u = IntMatrix::identity(m.rows());
    std::size_t r = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < h.cols() && r < h.rows(); ++c) {
        std::size_t p = r;
        while (p < h.rows() && h(p, c) == 0)
            ++p;
        if (p == h.rows())
            continue;
        h.swap_rows(p, r);
        u.swap_rows(p, r);
        for (std::size_t i = r + 1; i < h.rows(); ++i)
            detail::gcd_rows(h, u, r, i, c);
        if (h(r, c) < 0) {
            h.negate_row(r);
            u.negate_row(r);
        }
        for (std::size_t k = 0; k < r; ++k) {
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), h(k, c).get_mpz_t(), h(r, c).get_mpz_t());
            if (q != 0) {
                h.add_row_multiple(k, r, -q);
                u.add_row_multiple(k, r, -q);
            }
        }
        pivots.push_back(c);
        ++r;
    }
    return {h, u, r};
}

inline IntMatrix hnf(const IntMatrix& m) { return hnf_with_transform(m).h; }

/// Nonzero rows of the Hermite form: a canonical basis of the row lattice.
inline IntMatrix lattice_basis(const IntMatrix& m) {
    HnfResult r = hnf_with_transform(m);
    IntMatrix out(0, m.cols());
    for (std::size_t i = 0; i < r.rank; ++i)
        out.append_row(r.h.row(i));
    return out;
}

inline SnfResult snf(const IntMatrix& m) {
    IntMatrix d = m;
    IntMatrix u = IntMatrix::identity(m.rows());
    IntMatrix v = IntMatrix::identity(m.cols());
    const std::size_t rows = d.rows(), cols = d.cols();
    for (std::size_t t = 0; t < rows && t < cols; ++t) {
        // smallest nonzero entry of the trailing block goes to (t, t)
        std::size_t bi = rows, bj = cols;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (d(i, j) != 0 && (bi == rows || abs(d(i, j)) < abs(d(bi, bj)))) {
                    bi = i;
                    bj = j;
                }
        if (bi == rows)
            break;
        d.swap_rows(t, bi);
        u.swap_rows(t, bi);
        d.swap_cols(t, bj);
        v.swap_cols(t, bj);
        for (;;) {
            bool changed = false;
            for (std::size_t i = t + 1; i < rows; ++i)
                if (d(i, t) != 0) {
                    detail::gcd_rows(d, u, t, i, t);
                    changed = true;
                }
            for (std::size_t j = t + 1; j < cols; ++j)
                if (d(t, j) != 0) {
                    detail::gcd_cols(d, v, t, j, t);
                    changed = true;
                }
            if (changed)
                continue;
            // divisibility of the trailing block
            std::size_t bad = rows;
            for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (d(i, j) % d(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (bad == rows)
                break;
            d.add_row_multiple(t, bad, 1);
            u.add_row_multiple(t, bad, 1);
        }
        if (d(t, t) < 0) {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    return {d, u, v};
}

/// Basis (rows) of {x in Z^cols : m x = 0}, in Hermite form.
inline IntMatrix integer_kernel(const IntMatrix& m) {
    IntMatrix t = m.transposed();
    HnfResult r = hnf_with_transform(t);
    IntMatrix k(0, m.cols());
    for (std::size_t i = r.rank; i < t.rows(); ++i)
        k.append_row(r.transform.row(i));
    return lattice_basis(k);
}

/// (Q-span of the rows) intersected with Z^n, as a Hermite basis.
inline IntMatrix saturate(const IntMatrix& l) {
    std::size_t n = l.cols();
    if (l.rows() == 0 || l.is_zero())
        return IntMatrix(0, n);
    IntMatrix k = integer_kernel(l);
    if (k.rows() == 0)
        return IntMatrix::identity(n);
    return integer_kernel(k);
}

/// Index of the row lattice of `l` in its saturation (1 when saturated).
inline Integer saturation_index(const IntMatrix& l) {
    IntMatrix b = lattice_basis(l);
    SnfResult s = snf(b);
    Integer idx = 1;
    for (const auto& x : s.divisors())
        idx *= x;
    return idx;
}

} // namespace toral
