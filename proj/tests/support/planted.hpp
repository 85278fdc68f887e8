#pragma once

// Planted-relation inputs and an exhaustive-search oracle for them.
//
// Values are x_i = sum_j K[i][j] log p_j over distinct primes p_j. Logs of
// distinct primes are Q-linearly independent (unique factorization), so the
// exact relation lattice of x is {c : c K = 0}. The oracle enumerates every
// c in a box and tests that identity in machine integers.

#include "toral/relations/normal_form.hpp"
#include "toral/relations/relations.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace planted {

using toral::Integer;
using toral::IntMatrix;
using toral::IntVector;

struct Instance {
    std::size_t n = 0;
    IntMatrix k;        // n x (n - r): coefficients on log p_j
    IntMatrix planted;  // r x n relations used to build the instance
};

inline const long kPrimes[] = {2, 3, 5, 7, 11, 13};

inline Instance make(std::mt19937_64& rng, std::size_t n, std::size_t r, long entry_bound) {
    std::uniform_int_distribution<long> d(-entry_bound, entry_bound);
    for (;;) {
        IntMatrix rel(r, n);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < n; ++j)
                rel(i, j) = d(rng);
        if (toral::rank(rel) != r)
            continue;
        // columns of K span the right kernel of rel
        IntMatrix ker = toral::integer_kernel(rel); // (n - r) x n
        Instance in;
        in.n = n;
        in.k = ker.transposed();
        in.planted = rel;
        return in;
    }
}

inline toral::ScalarSource source(const Instance& in) {
    return [in](toral::prec_t p) {
        toral::BallVector logs;
        for (std::size_t j = 0; j < in.k.cols(); ++j)
            logs.push_back(toral::log_rational(kPrimes[j], p));
        toral::BallVector x;
        for (std::size_t i = 0; i < in.n; ++i) {
            toral::Ball s(p);
            for (std::size_t j = 0; j < in.k.cols(); ++j)
                s += toral::Ball::from_integer(in.k(i, j), p) * logs[j];
            x.push_back(s);
        }
        return x;
    };
}

inline bool is_exact_relation(const Instance& in, const IntVector& c) {
    for (std::size_t j = 0; j < in.k.cols(); ++j) {
        Integer s = 0;
        for (std::size_t i = 0; i < in.n; ++i)
            s += c[i] * in.k(i, j);
        if (s != 0)
            return false;
    }
    return true;
}

/// Every nonzero c with max|c_i| <= box satisfying c K = 0.
inline std::vector<IntVector> exhaustive(const Instance& in, long box) {
    std::vector<std::vector<long>> k(in.n, std::vector<long>(in.k.cols()));
    for (std::size_t i = 0; i < in.n; ++i)
        for (std::size_t j = 0; j < in.k.cols(); ++j)
            k[i][j] = in.k(i, j).get_si();
    std::vector<IntVector> out;
    std::vector<long> c(in.n, -box);
    for (;;) {
        bool nonzero = false, hit = true;
        for (long v : c)
            nonzero = nonzero || v != 0;
        for (std::size_t j = 0; j < in.k.cols() && hit; ++j) {
            std::int64_t s = 0;
            for (std::size_t i = 0; i < in.n; ++i)
                s += static_cast<std::int64_t>(c[i]) * k[i][j];
            hit = s == 0;
        }
        if (nonzero && hit) {
            IntVector v;
            for (long x : c)
                v.emplace_back(x);
            out.push_back(v);
        }
        std::size_t i = 0;
        while (i < in.n && c[i] == box)
            c[i++] = -box;
        if (i == in.n)
            break;
        ++c[i];
    }
    return out;
}

/// Hermite basis of the lattice spanned by `rows` (ambient dimension n).
inline IntMatrix lattice(const std::vector<IntVector>& rows, std::size_t n) {
    return toral::lattice_basis(IntMatrix::from_rows(rows, n));
}

} // namespace planted
