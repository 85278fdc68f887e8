#pragma once

#include "toral/arith/ball_matrix.hpp"
#include "toral/field/number_field.hpp"
#include "toral/relations/normal_form.hpp"
#include "toral/relations/relations.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace toral {

enum class Maximality { Proven, Unverified };

inline const char* to_string(Maximality m) { return m == Maximality::Proven ? "Proven" : "Unverified"; }

struct UnitSystem {
    Field field;
    std::vector<FieldElement> gens;
    Maximality maximality = Maximality::Unverified;
    std::vector<int> norms; ///< +1 or -1 per generator
};

/// One embedding index per archimedean place: real embeddings, then the first
/// member of each complex pair.
inline std::vector<std::size_t> places(const Field& k) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < k->r1(); ++j)
        out.push_back(j);
    for (std::size_t i = 0; i < k->r2(); ++i)
        out.push_back(k->r1() + 2 * i);
    return out;
}

inline std::size_t unit_rank(const Field& k) { return k->r1() + k->r2() - 1; }

/// Dirichlet log vector (log|x|_v for every place but the last; complex places
/// weighted by 2).
inline BallVector unit_log_vector(const FieldElement& x, prec_t prec) {
    const Field& k = x.field();
    auto pl = places(k);
    BallVector v;
    for (std::size_t i = 0; i + 1 < pl.size(); ++i) {
        Ball l = log_abs_embed(x, pl[i], prec);
        if (!k->is_real_embedding(pl[i]))
            l = Ball::from_long(2, prec) * l;
        v.push_back(l);
    }
    return v;
}

namespace detail {

inline int unit_norm_sign(const FieldElement& u) {
    Rational n = norm(u);
    if (n == 1)
        return 1;
    if (n == -1)
        return -1;
    throw NotUnitError("element " + u.to_string() + " has norm " + n.get_str());
}

/// Certified nonvanishing of the regulator-style determinant of the log vectors.
inline bool logs_independent(const std::vector<FieldElement>& us) {
    if (us.empty())
        return true;
    for (prec_t p = 128; p <= 4096; p *= 2) {
        BallMatrix m;
        for (const auto& u : us)
            m.push_back(unit_log_vector(u, p));
        if (m.size() != m[0].size())
            return false;
        Ball det = ball_det(m);
        if (!det.contains_zero())
            return true;
        // an exact dependence never separates; stop once the radius is tiny
        if (det.rad_below_pow2(-static_cast<long>(p) / 2))
            return false;
    }
    return false;
}

inline bool canonical_unit_less(const FieldElement& a, const FieldElement& b) {
    double na = 0, nb = 0;
    for (const auto& x : unit_log_vector(a, 64))
        na += x.mid_double() * x.mid_double();
    for (const auto& x : unit_log_vector(b, 64))
        nb += x.mid_double() * x.mid_double();
    if (std::fabs(na - nb) > 1e-9)
        return na < nb;
    return std::lexicographical_compare(a.coeffs().begin(), a.coeffs().end(), b.coeffs().begin(), b.coeffs().end());
}

/// Make the embedding-0 value positive (multiplying by -1 keeps unit status).
inline FieldElement positive_at_zero(const FieldElement& u) {
    if (!u.field()->is_real_embedding(0))
        return u;
    return embed_real(u, 0, 64).mid_double() < 0 ? -u : u;
}

} // namespace detail

/// Fundamental unit of Z[sqrt D] for K = Q[t]/(t^2 - D), from the continued
/// fraction of sqrt D: the first convergent p/q with p^2 - D q^2 = +-1.
inline FieldElement quadratic_fundamental_unit(const Field& k) {
    const IntPoly& f = k->min_poly();
    if (f.degree() != 2 || f.coeff(2) != 1 || f.coeff(1) != 0 || f.coeff(0) >= -1)
        throw InputError("quadratic_fundamental_unit: field must be Q[t]/(t^2 - D) with D > 1");
    Integer d = -f.coeff(0);
    Integer a0;
    mpz_sqrt(a0.get_mpz_t(), d.get_mpz_t());
    Integer m = 0, den = 1, a = a0;
    Integer p_prev = 1, p = a0, q_prev = 0, q = 1;
    for (;;) {
        Integer n = p * p - d * q * q;
        if (n == 1 || n == -1)
            return FieldElement(k, RatVector{Rational(p), Rational(q)});
        m = den * a - m;
        den = (d - m * m) / den;
        a = (a0 + m) / den;
        Integer pn = a * p + p_prev, qn = a * q + q_prev;
        p_prev = p;
        q_prev = q;
        p = pn;
        q = qn;
    }
}

/// Checks user-supplied units: each is a unit, the count is the Dirichlet
/// rank, and the log vectors are independent.
inline UnitSystem verify_units(const Field& k, const std::vector<FieldElement>& gens) {
    UnitSystem u;
    u.field = k;
    for (const auto& g : gens) {
        if (g.field() != k && g.field()->min_poly() != k->min_poly())
            throw InputError("verify_units: element from a different field");
        if (!is_unit(g))
            throw NotUnitError("verify_units: " + g.to_string() + " is not a unit (norm " + norm(g).get_str() + ")");
        u.norms.push_back(detail::unit_norm_sign(g));
    }
    if (gens.size() != unit_rank(k))
        throw RankError("verify_units: expected " + std::to_string(unit_rank(k)) + " units, got " +
                        std::to_string(gens.size()));
    if (!detail::logs_independent(gens))
        throw RankError("verify_units: log vectors are not independent");
    u.gens = gens;
    u.maximality = Maximality::Unverified;
    return u;
}

/// Units a + b t + c t^2 of a totally real cubic whose log embedding lies in
/// the box |log|u_i|| <= log_bound. The lattice they generate is reduced and
/// returned as two generators.
inline UnitSystem cubic_unit_search(const Field& k, double log_bound) {
    if (k->degree() != 3 || !k->totally_real())
        throw InputError("cubic_unit_search: field must be a totally real cubic");
    if (k->min_poly().coeff(3) != 1)
        throw InputError("cubic_unit_search: minimal polynomial must be monic");
    if (!(log_bound > 0))
        throw InputError("cubic_unit_search: log bound must be positive");
    auto rb = k->roots(64);
    double al[3];
    for (int i = 0; i < 3; ++i)
        al[i] = rb[static_cast<std::size_t>(i)].re.mid_double();
    // inverse Vandermonde bounds: (a,b,c) = V^-1 u with |u_i| <= e^B
    double v[3][3], inv[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            v[i][j] = std::pow(al[i], j);
    double det = v[0][0] * (v[1][1] * v[2][2] - v[1][2] * v[2][1]) - v[0][1] * (v[1][0] * v[2][2] - v[1][2] * v[2][0]) +
                 v[0][2] * (v[1][0] * v[2][1] - v[1][1] * v[2][0]);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
            inv[i][j] = (v[r0][c0] * v[r1][c1] - v[r0][c1] * v[r1][c0]) / det;
        }
    const double eb = std::exp(log_bound);
    long bmax = 0, cmax = 0;
    {
        double sb = 0, sc = 0;
        for (int j = 0; j < 3; ++j) {
            sb += std::fabs(inv[1][j]);
            sc += std::fabs(inv[2][j]);
        }
        bmax = static_cast<long>(std::ceil(sb * eb)) + 1;
        cmax = static_cast<long>(std::ceil(sc * eb)) + 1;
    }
    // integer denominators never occur: the power basis of Z[t] is searched
    std::vector<FieldElement> found;
    for (long c = -cmax; c <= cmax; ++c)
        for (long b = -bmax; b <= bmax; ++b) {
            double w[3];
            for (int i = 0; i < 3; ++i)
                w[i] = b * al[i] + c * al[i] * al[i];
            // some |u_i| <= 1 when the norm is +-1
            std::vector<long> as;
            for (int i = 0; i < 3; ++i)
                for (long a = static_cast<long>(std::floor(-w[i] - 1)); a <= static_cast<long>(std::ceil(-w[i] + 1)); ++a)
                    as.push_back(a);
            std::sort(as.begin(), as.end());
            as.erase(std::unique(as.begin(), as.end()), as.end());
            for (long a : as) {
                if (b == 0 && c == 0)
                    continue; // +-1 and rationals
                double prod = 1;
                bool inside = true;
                for (int i = 0; i < 3 && inside; ++i) {
                    double ui = a + w[i];
                    if (ui == 0 || std::fabs(std::log(std::fabs(ui))) > log_bound + 1e-9)
                        inside = false;
                    prod *= ui;
                }
                if (!inside || std::fabs(std::fabs(prod) - 1) > 1e-6)
                    continue;
                FieldElement u(k, RatVector{Rational(a), Rational(b), Rational(c)});
                Rational n = norm(u);
                if (n != 1 && n != -1)
                    continue;
                found.push_back(u);
            }
        }
    if (found.empty())
        throw SearchEmpty("cubic_unit_search: no unit of infinite order within log bound " + std::to_string(log_bound));
    std::sort(found.begin(), found.end(), detail::canonical_unit_less);

    auto logv = [](const FieldElement& u) {
        BallVector b = unit_log_vector(u, 128);
        return std::pair<double, double>{b[0].mid_double(), b[1].mid_double()};
    };
    // first independent pair
    std::vector<FieldElement> basis{found[0]};
    for (std::size_t i = 1; i < found.size() && basis.size() < 2; ++i)
        if (detail::logs_independent({basis[0], found[i]}))
            basis.push_back(found[i]);
    if (basis.size() < 2)
        throw SearchEmpty("cubic_unit_search: found units have rank 1; raise the log bound");

    for (const auto& u : found) {
        auto [x0, y0] = logv(u);
        auto [x1, y1] = logv(basis[0]);
        auto [x2, y2] = logv(basis[1]);
        double dd = x1 * y2 - x2 * y1;
        double s = (x0 * y2 - x2 * y0) / dd, t = (x1 * y0 - x0 * y1) / dd;
        if (std::fabs(s - std::round(s)) < 1e-6 && std::fabs(t - std::round(t)) < 1e-6)
            continue;
        // u is outside the current lattice: c0 u + c1 e1 + c2 e2 = 0 in log space
        RelationOptions opt;
        opt.height = 1000;
        auto rel = find_vector_relations(
            [&](prec_t p) {
                return BallMatrix{unit_log_vector(u, p), unit_log_vector(basis[0], p), unit_log_vector(basis[1], p)};
            },
            opt);
        if (rel.relations.size() != 1 || rel.relations[0][0] == 0)
            throw InternalError("cubic_unit_search: unit lattice relation not found");
        const IntVector& c = rel.relations[0];
        Integer c0 = c[0];
        IntMatrix m{{0, 0}, {0, 0}, {0, 0}};
        m(0, 0) = c0;
        m(1, 1) = c0;
        m(2, 0) = -c[1];
        m(2, 1) = -c[2];
        HnfResult h = hnf_with_transform(m);
        std::vector<FieldElement> gens{basis[0], basis[1], u};
        std::vector<FieldElement> nb;
        for (std::size_t r = 0; r < 2; ++r) {
            FieldElement e = FieldElement::from_rational(k, 1);
            for (std::size_t j = 0; j < 3; ++j)
                if (h.transform(r, j) != 0)
                    e = e * gens[j].pow(h.transform(r, j));
            nb.push_back(e);
        }
        basis = nb;
    }
    // Gauss reduction of the 2D log lattice
    for (int it = 0; it < 200; ++it) {
        auto [x1, y1] = logv(basis[0]);
        auto [x2, y2] = logv(basis[1]);
        double n1 = x1 * x1 + y1 * y1, n2 = x2 * x2 + y2 * y2;
        if (n2 < n1) {
            std::swap(basis[0], basis[1]);
            continue;
        }
        double mu = (x1 * x2 + y1 * y2) / n1;
        long r = std::lround(mu);
        if (r == 0)
            break;
        basis[1] = basis[1] * basis[0].pow(Integer(-r));
    }
    for (auto& g : basis)
        g = detail::positive_at_zero(g);
    std::sort(basis.begin(), basis.end(), detail::canonical_unit_less);
    UnitSystem out = verify_units(k, basis);
    out.maximality = Maximality::Unverified;
    return out;
}

/// Generators of the norm-one part of <gens, -1> (free part; torsion +-1 is
/// implicit).
inline UnitSystem norm_one_subgroup(const UnitSystem& u) {
    UnitSystem out = u;
    const bool minus_one_has_norm_minus_one = u.field->degree() % 2 == 1;
    std::ptrdiff_t first = -1;
    for (std::size_t i = 0; i < u.gens.size(); ++i) {
        if (u.norms[i] == 1)
            continue;
        if (minus_one_has_norm_minus_one) {
            out.gens[i] = -u.gens[i];
        } else if (first < 0) {
            first = static_cast<std::ptrdiff_t>(i);
            out.gens[i] = u.gens[i] * u.gens[i];
        } else {
            out.gens[i] = u.gens[i] * u.gens[static_cast<std::size_t>(first)];
        }
        out.norms[i] = 1;
    }
    for (std::size_t i = 0; i < out.gens.size(); ++i)
        if (norm(out.gens[i]) != 1)
            throw InternalError("norm_one_subgroup: generator does not have norm 1");
    return out;
}

} // namespace toral
