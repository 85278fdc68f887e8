#pragma once

#include "toral/relations/int_matrix.hpp"

#include <cstddef>
#include <vector>

namespace toral {

struct LllResult {
    IntMatrix reduced;
    IntMatrix transform; ///< reduced = transform * basis, unimodular
};

namespace detail {

/// Nearest integer to a/b for b > 0, ties rounded up.
inline Integer round_div(const Integer& a, const Integer& b) {
    Integer num = 2 * a + b;
    Integer den = 2 * b;
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

} // namespace detail

/// Integral LLL reduction of the rows of `basis` (Cohen, Alg. 2.6.7): all
/// Gram-Schmidt data is kept as exact integers. `delta` must lie in (1/4, 1].
inline LllResult lll_reduce(const IntMatrix& basis, const Rational& delta = Rational(99, 100)) {
    if (!(delta > Rational(1, 4) && delta <= 1))
        throw InputError("lll_reduce: delta must lie in (1/4, 1]");
    const std::size_t n = basis.rows();
    IntMatrix b = basis;
    IntMatrix h = IntMatrix::identity(n);
    if (n == 0)
        return {b, h};

    // d[i] = det of the Gram matrix of the first i vectors; d[0] = 1.
    std::vector<Integer> d(n + 1, Integer(0));
    std::vector<std::vector<Integer>> lam(n, std::vector<Integer>(n, Integer(0)));
    const Integer dp = delta.get_num(), dq = delta.get_den();

    auto row_dot = [&](std::size_t i, std::size_t j) {
        Integer s = 0;
        for (std::size_t c = 0; c < b.cols(); ++c)
            s += b(i, c) * b(j, c);
        return s;
    };
    auto reduce = [&](std::size_t k, std::size_t l) {
        if (2 * abs(lam[k][l]) <= d[l + 1])
            return;
        Integer q = detail::round_div(lam[k][l], d[l + 1]);
        b.add_row_multiple(k, l, -q);
        h.add_row_multiple(k, l, -q);
        lam[k][l] -= q * d[l + 1];
        for (std::size_t i = 0; i < l; ++i)
            lam[k][i] -= q * lam[l][i];
    };

    d[0] = 1;
    d[1] = row_dot(0, 0);
    if (d[1] == 0)
        throw InputError("lll_reduce: rows are linearly dependent");
    std::size_t k = 1, kmax = 0;
    while (k < n) {
        if (k > kmax) {
            kmax = k;
            for (std::size_t j = 0; j <= k; ++j) {
                Integer u = row_dot(k, j);
                for (std::size_t i = 0; i < j; ++i)
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) / d[i];
                if (j < k)
                    lam[k][j] = u;
                else
                    d[k + 1] = u;
            }
            if (d[k + 1] == 0)
                throw InputError("lll_reduce: rows are linearly dependent");
        }
        reduce(k, k - 1);
        // Lovasz: d_k d_{k-2} < delta d_{k-1}^2 - lambda^2 triggers a swap
        if (dq * d[k + 1] * d[k - 1] < dp * d[k] * d[k] - dq * lam[k][k - 1] * lam[k][k - 1]) {
            b.swap_rows(k, k - 1);
            h.swap_rows(k, k - 1);
            for (std::size_t j = 0; j + 1 < k; ++j)
                std::swap(lam[k][j], lam[k - 1][j]);
            Integer l = lam[k][k - 1];
            Integer bb = (d[k - 1] * d[k + 1] + l * l) / d[k];
            for (std::size_t i = k + 1; i <= kmax; ++i) {
                Integer t = lam[i][k];
                lam[i][k] = (d[k + 1] * lam[i][k - 1] - l * t) / d[k];
                lam[i][k - 1] = (bb * t + l * lam[i][k]) / d[k + 1];
            }
            d[k] = bb;
            if (k > 1)
                --k;
        } else {
            for (std::size_t l = k - 1; l-- > 0;)
                reduce(k, l);
            ++k;
        }
    }
    return {b, h};
}

} // namespace toral
