#pragma once

#include "toral/arith/ball.hpp"
#include "toral/arith/ball_matrix.hpp"
#include "toral/relations/lll.hpp"
#include "toral/relations/normal_form.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

namespace toral {

enum class RelationStatus { VerifiedExact, NumericOnly };

inline const char* to_string(RelationStatus s) {
    return s == RelationStatus::VerifiedExact ? "VerifiedExact" : "NumericOnly";
}

/// Outcome of an exact check performed by the caller on one relation.
enum class Verdict { Verified, Refuted, Unverifiable };

using RelationVerifier = std::function<Verdict(const IntVector&)>;

/// prec -> values. A scalar source yields one Ball per unknown; a vector
/// source yields one row of Balls per unknown.
using ScalarSource = std::function<BallVector(prec_t)>;
using VectorSource = std::function<BallMatrix(prec_t)>;

struct RelationOptions {
    Integer height = kDefaultHeightBound;
    prec_t prec = kDefaultPrecBits;
    prec_t max_prec = kDefaultMaxPrecBits;
    RelationVerifier verifier; ///< optional
};

struct RelationResult {
    std::vector<IntVector> relations;
    RelationStatus status = RelationStatus::NumericOnly;
    Integer height = kDefaultHeightBound;
    prec_t precision = kDefaultPrecBits; ///< precision of the re-certification
    std::vector<BallVector> residuals;   ///< one per relation

    bool verified_exact() const { return status == RelationStatus::VerifiedExact; }
    std::size_t rank() const { return relations.size(); }
    IntMatrix matrix(std::size_t n) const { return IntMatrix::from_rows(relations, n); }
};

namespace detail {

/// |x| < 2^e for every point of the ball.
inline bool below_pow2(const Ball& x, long e) {
    mpfr_t t;
    mpfr_init2(t, 64);
    mpfr_abs(t, x.mid(), MPFR_RNDU);
    mpfr_add(t, t, x.rad(), MPFR_RNDU);
    bool ok = mpfr_cmp_ui_2exp(t, 1, e) < 0;
    mpfr_clear(t);
    return ok;
}

/// |x| > 2^e for every point of the ball.
inline bool above_pow2(const Ball& x, long e) {
    mpfr_t t;
    mpfr_init2(t, 64);
    mpfr_abs(t, x.mid(), MPFR_RNDD);
    mpfr_sub(t, t, x.rad(), MPFR_RNDD);
    bool ok = mpfr_cmp_ui_2exp(t, 1, e) > 0;
    mpfr_clear(t);
    return ok;
}

inline Integer scaled_round(const Ball& x, long s) {
    mpfr_t t;
    mpfr_init2(t, std::max<prec_t>(x.prec(), 64));
    mpfr_mul_2si(t, x.mid(), s, MPFR_RNDN);
    Integer z;
    mpfr_get_z(z.get_mpz_t(), t, MPFR_RNDN);
    mpfr_clear(t);
    return z;
}

inline BallVector residual(const IntVector& c, const BallMatrix& v) {
    std::size_t m = v.empty() ? 0 : v[0].size();
    prec_t p = v.empty() ? kDefaultPrecBits : v[0][0].prec();
    BallVector r(m, Ball(p));
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0)
            continue;
        Ball k = Ball::from_integer(c[i], p);
        for (std::size_t j = 0; j < m; ++j)
            r[j] += k * v[i][j];
    }
    return r;
}

enum class Check { Pass, Fail, Ambiguous };

inline Check check_residual(const BallVector& r, long e) {
    bool all_below = true;
    for (const auto& x : r) {
        if (above_pow2(x, e))
            return Check::Fail;
        if (!below_pow2(x, e))
            all_below = false;
    }
    return all_below ? Check::Pass : Check::Ambiguous;
}

inline bool lex_less(const IntVector& a, const IntVector& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

} // namespace detail

/// Canonical presentation of a relation lattice: LLL-reduced, first nonzero
/// entry positive, ordered by Euclidean length then lexicographically.
inline std::vector<IntVector> canonical_basis(const std::vector<IntVector>& rows, std::size_t n) {
    if (rows.empty())
        return {};
    IntMatrix b = lattice_basis(IntMatrix::from_rows(rows, n));
    if (b.rows() == 0)
        return {};
    std::vector<IntVector> out = lll_reduce(b).reduced.row_list();
    for (auto& v : out)
        if (leading_sign(v) < 0)
            for (auto& x : v)
                x = -x;
    std::sort(out.begin(), out.end(), [](const IntVector& a, const IntVector& b) {
        Integer na = dot(a, a), nb = dot(b, b);
        if (na != nb)
            return na < nb;
        return detail::lex_less(a, b);
    });
    return out;
}

/// Integer vectors c with sum_i c_i * v_i = 0 in R^m, where v_i are the rows
/// produced by `source`. LLL on [I | round(2^s v)], survivors re-certified at
/// twice the precision, then saturated.
inline RelationResult find_vector_relations(const VectorSource& source, const RelationOptions& opt = {}) {
    if (opt.height < 1)
        throw InputError("relation search: height bound must be at least 1");
    prec_t p = std::max<prec_t>(opt.prec, 32);
    for (;; p *= 2) {
        if (2 * p > opt.max_prec)
            throw PrecisionExhausted("relation search: precision cap " + std::to_string(opt.max_prec) +
                                     " reached with ambiguous candidates");
        BallMatrix v = source(p);
        const std::size_t n = v.size();
        RelationResult res;
        res.height = opt.height;
        res.precision = 2 * p;
        if (n == 0)
            return res;
        const std::size_t m = v[0].size();

        long emax = 0;
        for (const auto& row : v) {
            if (row.size() != m)
                throw InputError("relation search: ragged value matrix");
            for (const auto& x : row) {
                if (!x.is_finite())
                    throw InputError("relation search: non-finite value");
                if (!mpfr_zero_p(x.mid()))
                    emax = std::max<long>(emax, mpfr_get_exp(x.mid()));
            }
        }
        long s = static_cast<long>(p) - 16 - emax;

        IntMatrix emb(n, n + m);
        for (std::size_t i = 0; i < n; ++i) {
            emb(i, i) = 1;
            for (std::size_t j = 0; j < m; ++j)
                emb(i, n + j) = detail::scaled_round(v[i][j], s);
        }
        IntMatrix red = lll_reduce(emb).reduced;

        std::vector<IntVector> cand;
        const long loose = -static_cast<long>(p) / 2;
        for (std::size_t r = 0; r < red.rows(); ++r) {
            IntVector row = red.row(r);
            IntVector c(row.begin(), row.begin() + static_cast<long>(n));
            if (is_zero_vector(c) || max_abs(c) > opt.height)
                continue;
            if (detail::check_residual(detail::residual(c, v), loose) == detail::Check::Pass)
                cand.push_back(c);
        }
        if (cand.empty())
            return res;

        BallMatrix v2 = source(2 * p);
        const long tight = -static_cast<long>(p);
        bool ambiguous = false;
        std::vector<IntVector> survivors;
        for (const auto& c : cand) {
            auto ch = detail::check_residual(detail::residual(c, v2), tight);
            if (ch == detail::Check::Pass)
                survivors.push_back(c);
            else if (ch == detail::Check::Ambiguous)
                ambiguous = true;
        }
        if (ambiguous)
            continue;
        if (survivors.empty())
            return res;

        IntMatrix sat = saturate(IntMatrix::from_rows(survivors, n));
        std::vector<IntVector> basis = canonical_basis(sat.row_list(), n);
        for (const auto& c : basis) {
            BallVector r = detail::residual(c, v2);
            auto ch = detail::check_residual(r, tight);
            if (ch == detail::Check::Ambiguous)
                ambiguous = true;
            if (ch != detail::Check::Pass)
                continue;
            res.relations.push_back(c);
            res.residuals.push_back(std::move(r));
        }
        if (ambiguous)
            continue;

        if (opt.verifier && !res.relations.empty()) {
            bool all_verified = true, refuted = false;
            for (const auto& c : res.relations) {
                Verdict vd = opt.verifier(c);
                if (vd == Verdict::Refuted)
                    refuted = true;
                if (vd != Verdict::Verified)
                    all_verified = false;
            }
            if (refuted)
                continue;
            if (all_verified)
                res.status = RelationStatus::VerifiedExact;
        }
        return res;
    }
}

inline RelationResult find_integer_relations(const ScalarSource& xs, const RelationOptions& opt = {}) {
    return find_vector_relations(
        [&](prec_t p) {
            BallVector v = xs(p);
            BallMatrix m;
            for (auto& x : v)
                m.push_back(BallVector{std::move(x)});
            return m;
        },
        opt);
}

/// Relations (c, k) in Z^(n+r) with sum_i c_i T[i][j] = k_j for every j.
/// T has one row per unknown c_i and one column per constraint.
inline RelationResult simultaneous_relations(const VectorSource& t, const RelationOptions& opt = {}) {
    return find_vector_relations(
        [&](prec_t p) {
            BallMatrix m = t(p);
            std::size_t r = m.empty() ? 0 : m[0].size();
            for (std::size_t j = 0; j < r; ++j) {
                BallVector row(r, Ball::from_long(0, p));
                row[j] = Ball::from_long(-1, p);
                m.push_back(std::move(row));
            }
            return m;
        },
        opt);
}

/// Integer vectors lying in the real span of the rows of V (k independent
/// vectors in R^n). Reduced to simultaneous_relations on A^-1 C, where A is
/// a certified nonsingular k x k column minor and C the remaining columns.
inline RelationResult rational_vectors_in_span(const VectorSource& vsrc, const RelationOptions& opt = {}) {
    // choose pivot columns by elimination with column pivoting
    std::vector<std::size_t> piv;
    std::size_t k = 0, n = 0;
    for (prec_t p = std::max<prec_t>(opt.prec, 32);; p *= 2) {
        if (p > opt.max_prec)
            throw PrecisionExhausted("rational_vectors_in_span: independence of V not certified");
        BallMatrix m = vsrc(p);
        k = m.size();
        n = k ? m[0].size() : 0;
        piv.clear();
        bool ok = true;
        std::vector<bool> used(n, false);
        for (std::size_t r = 0; r < k && ok; ++r) {
            std::size_t best = n;
            double bv = -1;
            for (std::size_t c = 0; c < n; ++c) {
                if (used[c] || m[r][c].contains_zero())
                    continue;
                double a = std::fabs(m[r][c].mid_double());
                if (a > bv) {
                    bv = a;
                    best = c;
                }
            }
            if (best == n) {
                ok = false;
                break;
            }
            used[best] = true;
            piv.push_back(best);
            for (std::size_t i = r + 1; i < k; ++i) {
                Ball f = m[i][best] / m[r][best];
                for (std::size_t c = 0; c < n; ++c)
                    m[i][c] -= f * m[r][c];
            }
        }
        if (ok)
            break;
    }
    if (k == 0) {
        RelationResult res;
        res.height = opt.height;
        res.precision = 2 * opt.prec;
        return res;
    }
    std::vector<std::size_t> rest;
    for (std::size_t c = 0; c < n; ++c)
        if (std::find(piv.begin(), piv.end(), c) == piv.end())
            rest.push_back(c);

    // relation (c, kk) maps to w with w[piv] = c, w[rest] = kk
    auto to_w = [&](const IntVector& rel) {
        IntVector w(n, Integer(0));
        for (std::size_t i = 0; i < k; ++i)
            w[piv[i]] = rel[i];
        for (std::size_t j = 0; j < rest.size(); ++j)
            w[rest[j]] = rel[k + j];
        return w;
    };

    RelationOptions o = opt;
    if (opt.verifier)
        o.verifier = [&](const IntVector& rel) { return opt.verifier(to_w(rel)); };

    RelationResult raw = simultaneous_relations(
        [&](prec_t p) {
            BallMatrix m = vsrc(p);
            BallMatrix a(k, BallVector(k)), c(k, BallVector(rest.size()));
            for (std::size_t i = 0; i < k; ++i) {
                for (std::size_t j = 0; j < k; ++j)
                    a[i][j] = m[i][piv[j]];
                for (std::size_t j = 0; j < rest.size(); ++j)
                    c[i][j] = m[i][rest[j]];
            }
            // w = y V with w_piv = y A  =>  y = w_piv A^-1, w_rest = w_piv A^-1 C
            BallMatrix t = multiply(ball_inverse(a), c);
            if (rest.empty())
                t.assign(k, BallVector{});
            return t;
        },
        o);

    std::vector<std::size_t> order(raw.relations.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<IntVector> ws;
    for (std::size_t i = 0; i < raw.relations.size(); ++i) {
        ws.push_back(to_w(raw.relations[i]));
        if (leading_sign(ws.back()) < 0) {
            for (auto& x : ws.back())
                x = -x;
            for (auto& b : raw.residuals[i])
                b = -b;
        }
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        Integer na = dot(ws[a], ws[a]), nb = dot(ws[b], ws[b]);
        if (na != nb)
            return na < nb;
        return detail::lex_less(ws[a], ws[b]);
    });
    RelationResult res = raw;
    res.relations.clear();
    res.residuals.clear();
    for (std::size_t i : order) {
        res.relations.push_back(ws[i]);
        res.residuals.push_back(raw.residuals[i]);
    }
    return res;
}

} // namespace toral
