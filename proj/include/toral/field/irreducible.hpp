#pragma once

#include "toral/arith/poly.hpp"
#include "toral/arith/roots.hpp"
#include "toral/error.hpp"

#include <bitset>
#include <cstdint>
#include <optional>
#include <vector>

namespace toral {

namespace modp {

// Polynomials over F_p as coefficient vectors, constant term first, trimmed.
using P = std::vector<std::int64_t>;

inline void trim(P& a) {
    while (!a.empty() && a.back() == 0)
        a.pop_back();
}

inline std::int64_t inv(std::int64_t a, std::int64_t p) {
    std::int64_t r = 1, e = p - 2;
    a %= p;
    while (e) {
        if (e & 1)
            r = r * a % p;
        a = a * a % p;
        e >>= 1;
    }
    return r;
}

inline P reduce(const IntPoly& f, std::int64_t p) {
    P out;
    for (const auto& c : f.coeffs()) {
        Integer r;
        mpz_fdiv_r_ui(r.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(p));
        out.push_back(r.get_si());
    }
    trim(out);
    return out;
}

inline P sub(P a, const P& b, std::int64_t p) {
    if (a.size() < b.size())
        a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i)
        a[i] = ((a[i] - b[i]) % p + p) % p;
    trim(a);
    return a;
}

inline P mul(const P& a, const P& b, std::int64_t p) {
    if (a.empty() || b.empty())
        return {};
    P c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    trim(c);
    return c;
}

inline std::pair<P, P> divmod(P a, const P& b, std::int64_t p) {
    std::int64_t li = inv(b.back(), p);
    if (a.size() < b.size())
        return {P{}, a};
    P q(a.size() - b.size() + 1, 0);
    for (std::size_t i = a.size(); i-- >= b.size();) {
        std::int64_t f = a[i] * li % p;
        q[i - (b.size() - 1)] = f;
        if (f)
            for (std::size_t j = 0; j < b.size(); ++j) {
                std::size_t k = i - (b.size() - 1) + j;
                a[k] = ((a[k] - f * b[j]) % p + p) % p;
            }
        if (i == b.size() - 1)
            break;
    }
    trim(a);
    trim(q);
    return {q, a};
}

inline P gcd(P a, P b, std::int64_t p) {
    while (!b.empty()) {
        P r = divmod(a, b, p).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        std::int64_t li = inv(a.back(), p);
        for (auto& x : a)
            x = x * li % p;
    }
    return a;
}

inline P powmod(P base, std::int64_t e, const P& m, std::int64_t p) {
    P r{1};
    base = divmod(base, m, p).second;
    while (e) {
        if (e & 1)
            r = divmod(mul(r, base, p), m, p).second;
        base = divmod(mul(base, base, p), m, p).second;
        e >>= 1;
    }
    return r;
}

inline P derivative(const P& a, std::int64_t p) {
    P d;
    for (std::size_t i = 1; i < a.size(); ++i)
        d.push_back(static_cast<std::int64_t>(i) % p * a[i] % p);
    trim(d);
    return d;
}

/// Degrees of the irreducible factors of a squarefree g (distinct-degree factorization).
inline std::vector<long> factor_degrees(P g, std::int64_t p) {
    std::vector<long> out;
    P h{0, 1};
    const P x{0, 1};
    for (long i = 1; 2 * i <= static_cast<long>(g.size()) - 1; ++i) {
        h = powmod(h, p, g, p);
        P gi = gcd(g, sub(h, x, p), p);
        long dg = static_cast<long>(gi.size()) - 1;
        if (dg > 0) {
            for (long k = 0; k < dg / i; ++k)
                out.push_back(i);
            g = divmod(g, gi, p).first;
            h = divmod(h, g, p).second;
        }
    }
    if (g.size() > 1)
        out.push_back(static_cast<long>(g.size()) - 1);
    return out;
}

inline bool is_prime(std::int64_t n) {
    if (n < 2)
        return false;
    for (std::int64_t k = 2; k * k <= n; ++k)
        if (n % k == 0)
            return false;
    return true;
}

} // namespace modp

enum class Irreducibility { Irreducible, Reducible, Unknown };

struct IrreducibilityReport {
    Irreducibility verdict = Irreducibility::Unknown;
    std::optional<IntPoly> factor; ///< nontrivial factor when reducible
};

namespace detail {

constexpr std::size_t kMaxDegree = 64;

/// Degrees k for which a factor of degree k is compatible with the pattern.
inline std::bitset<kMaxDegree + 1> subset_sums(const std::vector<long>& degs) {
    std::bitset<kMaxDegree + 1> s;
    s[0] = true;
    for (long d : degs)
        s |= s << static_cast<std::size_t>(d);
    return s;
}

/// Searches for a factor of degree k among products of k certified roots.
/// Returns the factor, std::nullopt when every subset is refuted, and sets
/// `ambiguous` when a subset could be neither confirmed nor refuted.
inline std::optional<IntPoly> factor_from_roots(const IntPoly& f, const std::vector<ComplexBall>& roots, long k,
                                                bool& ambiguous) {
    const std::size_t d = roots.size();
    std::vector<std::size_t> idx(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = i;
    prec_t p = roots.front().prec();
    for (;;) {
        // lc(f) * prod (t - r_i) has integer coefficients for a true factor
        std::vector<ComplexBall> c{ComplexBall{Ball::from_integer(f.lc(), p), Ball::from_long(0, p)}};
        for (std::size_t i : idx) {
            std::vector<ComplexBall> nc(c.size() + 1, ComplexBall(p));
            for (std::size_t j = 0; j < c.size(); ++j) {
                nc[j + 1] = nc[j + 1] + c[j];
                nc[j] = nc[j] - roots[i] * c[j];
            }
            c = std::move(nc);
        }
        bool refuted = false, decided = true;
        std::vector<Integer> coeffs;
        for (const auto& z : c) {
            if (!z.im.contains_zero()) {
                refuted = true;
                break;
            }
            Rational lo = z.re.mid_rational() - z.re.rad_rational(), hi = z.re.mid_rational() + z.re.rad_rational();
            Integer a, b;
            mpz_cdiv_q(a.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
            mpz_fdiv_q(b.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
            if (a > b) {
                refuted = true;
                break;
            }
            if (a != b) {
                decided = false;
                break;
            }
            coeffs.push_back(a);
        }
        if (!refuted && !decided)
            ambiguous = true;
        if (!refuted && decided) {
            IntPoly g = primitive_part(IntPoly(coeffs));
            if (g.degree() == k && (to_rat(f) % to_rat(g)).is_zero())
                return g;
        }
        // next k-subset
        long i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == d - static_cast<std::size_t>(k - i))
            --i;
        if (i < 0)
            break;
        ++idx[static_cast<std::size_t>(i)];
        for (long j = i + 1; j < k; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return std::nullopt;
}

} // namespace detail

/// Irreducibility over Q of a primitive integer polynomial. Degree patterns
/// modulo small primes restrict the possible factor degrees; any degree that
/// survives is settled by a search over products of certified complex roots.
inline IrreducibilityReport check_irreducible(const IntPoly& f) {
    const long d = f.degree();
    if (d < 1)
        throw InputError("irreducibility: polynomial must be nonconstant");
    if (static_cast<std::size_t>(d) > detail::kMaxDegree)
        throw InputError("irreducibility: degree too large");
    if (content(f) != 1)
        throw InputError("irreducibility: polynomial must have content 1");
    if (d == 1)
        return {Irreducibility::Irreducible, std::nullopt};
    RatPoly g = gcd(to_rat(f), to_rat(f.derivative()));
    if (g.degree() > 0)
        return {Irreducibility::Reducible, primitive_part(g)};
    for (const auto& iv : isolate_real_roots(f))
        if (iv.lo == iv.hi)
            return {Irreducibility::Reducible, primitive_part(RatPoly{-iv.lo, Rational(1)})};

    std::bitset<detail::kMaxDegree + 1> possible;
    for (long k = 0; k <= d; ++k)
        possible[static_cast<std::size_t>(k)] = true;
    int good = 0;
    for (std::int64_t p = 2; p < 2000 && good < 40; ++p) {
        if (!modp::is_prime(p))
            continue;
        modp::P fp = modp::reduce(f, p);
        if (static_cast<long>(fp.size()) - 1 != d)
            continue;
        if (modp::gcd(fp, modp::derivative(fp, p), p).size() > 1)
            continue;
        ++good;
        possible &= detail::subset_sums(modp::factor_degrees(fp, p));
        bool only_trivial = true;
        for (long k = 1; k < d; ++k)
            if (possible[static_cast<std::size_t>(k)])
                only_trivial = false;
        if (only_trivial)
            return {Irreducibility::Irreducible, std::nullopt};
    }

    std::vector<ComplexBall> roots;
    bool ambiguous = true;
    for (prec_t prec = 128; prec <= 4096 && ambiguous; prec *= 2) {
        CertifiedRoots cr = certified_complex_roots(f, prec);
        roots = cr.real;
        for (const auto& z : cr.upper) {
            roots.push_back(z);
            roots.push_back(z.conj());
        }
        ambiguous = false;
        for (long k = 1; 2 * k <= d; ++k) {
            if (!possible[static_cast<std::size_t>(k)])
                continue;
            if (auto g = detail::factor_from_roots(f, roots, k, ambiguous))
                return {Irreducibility::Reducible, *g};
        }
    }
    if (ambiguous)
        return {Irreducibility::Unknown, std::nullopt};
    return {Irreducibility::Irreducible, std::nullopt};
}

} // namespace toral
