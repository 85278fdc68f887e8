#pragma once

#include "toral/error.hpp"

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

namespace toral {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

/// Working precision in bits.
using prec_t = mpfr_prec_t;

inline constexpr prec_t kDefaultPrecBits = 256;
inline constexpr prec_t kDefaultMaxPrecBits = 16384;
inline constexpr long kDefaultHeightBound = 1000000;

/// Precision schedule shared by every escalating computation.
struct PrecisionPolicy {
    prec_t start = kDefaultPrecBits;
    prec_t cap = kDefaultMaxPrecBits;
};

inline Rational make_rational(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0)
        throw DivisionByZero("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Integer abs_value(const Integer& x) { return abs(x); }

inline Integer max_abs(const IntVector& v) {
    Integer m = 0;
    for (const auto& x : v)
        if (abs(x) > m)
            m = abs(x);
    return m;
}

inline bool is_zero_vector(const IntVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

/// Sign of the first nonzero entry (0 for the zero vector).
inline int leading_sign(const IntVector& v) {
    for (const auto& x : v)
        if (x != 0)
            return sgn(x);
    return 0;
}

inline std::string to_string(const Integer& x) { return x.get_str(); }
inline std::string to_string(const Rational& x) { return x.get_str(); }

inline std::string to_string(const IntVector& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += ", ";
        s += v[i].get_str();
    }
    return s + ")";
}

inline Integer gcd_of(const IntVector& v) {
    Integer g = 0;
    for (const auto& x : v)
        g = gcd(g, x);
    return g;
}

inline Integer lcm_of_denominators(const RatVector& v) {
    Integer l = 1;
    for (const auto& q : v)
        l = lcm(l, q.get_den());
    return l;
}

/// Exact conversion of an MPFR value to a rational.
inline Rational to_rational(mpfr_srcptr x) {
    Rational q;
    mpfr_get_q(q.get_mpq_t(), x);
    return q;
}

} // namespace toral
