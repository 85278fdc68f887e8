#pragma once

#include "toral/field/number_field.hpp"
#include "toral/relations/relations.hpp"

#include <vector>

namespace toral {

namespace detail {

inline NumberField::GaloisData compute_galois(const Field& k) {
    const std::size_t d = k->degree();
    if (k->r1() != 0 && k->r1() != d)
        throw NotGaloisError("galois: field " + k->to_string() + " has mixed signature, f does not split");
    const bool real = k->totally_real();
    NumberField::GaloisData g;
    FieldElement t = FieldElement::generator(k);
    g.images.push_back(t.coeffs());
    const prec_t p0 = 256;
    for (std::size_t j = 1; j < d; ++j) {
        auto source = [&](prec_t p) {
            std::vector<ComplexBall> r = k->roots(p);
            BallMatrix m;
            ComplexBall pw{Ball::from_long(1, r[0].prec()), Ball::from_long(0, r[0].prec())};
            for (std::size_t i = 0; i < d; ++i) {
                m.push_back(real ? BallVector{pw.re} : BallVector{pw.re, pw.im});
                pw = pw * r[0];
            }
            m.push_back(real ? BallVector{r[j].re} : BallVector{r[j].re, r[j].im});
            return m;
        };
        RelationOptions opt;
        opt.prec = p0;
        RelationResult rel;
        try {
            rel = find_vector_relations(source, opt);
        } catch (const PrecisionExhausted&) {
            throw NotGaloisError("galois: root " + std::to_string(j) + " not expressible in the field");
        }
        std::optional<FieldElement> img;
        for (const auto& c : rel.relations) {
            if (c[d] == 0)
                continue;
            RatVector coeffs(d);
            for (std::size_t i = 0; i < d; ++i)
                coeffs[i] = make_rational(Integer(-c[i]), c[d]);
            img = FieldElement(k, coeffs);
            break;
        }
        if (!img)
            throw NotGaloisError("galois: root " + std::to_string(j) + " of " + k->to_string() + " does not lie in the field");
        // exact check: f(img) = 0 in K
        FieldElement val = FieldElement::from_rational(k, 0);
        const auto& f = k->min_poly().coeffs();
        for (std::size_t i = f.size(); i-- > 0;)
            val = val * *img + FieldElement::from_rational(k, Rational(f[i]));
        if (!val.is_zero())
            throw NotGaloisError("galois: candidate image of t is not a root of f");
        // the image must sit at embedding j under embedding 0
        std::vector<ComplexBall> r = k->roots(p0);
        ComplexBall at0 = embed(*img, 0, p0);
        for (std::size_t i = 0; i < d; ++i) {
            bool hit = at0.re.overlaps(r[i].re) && at0.im.overlaps(r[i].im);
            if (hit != (i == j))
                throw NotGaloisError("galois: candidate image does not match embedding " + std::to_string(j));
        }
        g.images.push_back(img->coeffs());
    }
    g.compose.assign(d, std::vector<std::size_t>(d, d));
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
            // (sigma_a o sigma_b)(t) = sigma_a(g_b(t)) = g_b(g_a(t))
            FieldElement c = FieldElement(k, g.images[b]).substitute(FieldElement(k, g.images[a]));
            for (std::size_t m = 0; m < d; ++m)
                if (c.coeffs() == g.images[m])
                    g.compose[a][b] = m;
            if (g.compose[a][b] == d)
                throw NotGaloisError("galois: automorphisms not closed under composition");
        }
    return g;
}

} // namespace detail

/// The d automorphisms of a Galois field, as images of t. sigma_j sends the
/// root at embedding 0 to the root at embedding j, so that
/// embed(apply(sigma_j, x), 0) = embed(x, j).
inline std::vector<FieldElement> galois_automorphisms(const Field& k) {
    if (auto g = k->galois_cache()) {
        std::vector<FieldElement> out;
        for (const auto& c : g->images)
            out.emplace_back(k, c);
        return out;
    }
    if (k->galois_failed())
        throw NotGaloisError("galois: field " + k->to_string() + " is not Galois");
    try {
        k->set_galois_cache(detail::compute_galois(k));
    } catch (const NotGaloisError&) {
        k->set_galois_failed();
        throw;
    }
    return galois_automorphisms(k);
}

inline bool is_galois(const Field& k) {
    try {
        galois_automorphisms(k);
        return true;
    } catch (const NotGaloisError&) {
        return false;
    }
}

/// compose[a][b] = index of sigma_a o sigma_b.
inline std::vector<std::vector<std::size_t>> galois_composition(const Field& k) {
    galois_automorphisms(k);
    return k->galois_cache()->compose;
}

inline FieldElement apply_automorphism(const FieldElement& sigma_t, const FieldElement& x) {
    return x.substitute(sigma_t);
}

/// sigma_j(x) for every j.
inline std::vector<FieldElement> conjugates(const FieldElement& x) {
    std::vector<FieldElement> out;
    for (const auto& s : galois_automorphisms(x.field()))
        out.push_back(apply_automorphism(s, x));
    return out;
}

/// Multiplicative order of a root of unity, 0 when x is not one.
inline long root_of_unity_order(const FieldElement& x) {
    long bound = 2 * static_cast<long>(x.degree() * x.degree()) + 2;
    FieldElement p = x;
    for (long n = 1; n <= bound; ++n) {
        if (p.is_one())
            return n;
        p = p * x;
    }
    return 0;
}

struct ConjugateRank {
    std::size_t rank = 0;       ///< rank of the free part of <x_1, ..., x_d>
    RelationResult relations;   ///< exponent vectors c with prod sigma_j(x)^c_j = 1
    bool sign_torsion = false;  ///< some magnitude relation has product -1
};

/// Rank of the group generated by the conjugates of x (free part). Relations
/// among log|x_j| are found numerically; in a Galois field each is verified by
/// forming the product of conjugates exactly, and relations whose product is
/// -1 are folded into the kernel of the sign character.
inline ConjugateRank conjugate_group_rank(const FieldElement& x, const RelationOptions& opt = {}) {
    if (x.is_zero())
        throw InputError("conjugate_group_rank: x must be nonzero");
    const Field& k = x.field();
    const std::size_t d = k->degree();
    std::vector<FieldElement> conj;
    bool galois = is_galois(k);
    if (galois)
        conj = conjugates(x);

    auto product = [&](const IntVector& c) {
        FieldElement p = FieldElement::from_rational(k, 1);
        for (std::size_t j = 0; j < d; ++j)
            if (c[j] != 0)
                p = p * conj[j].pow(c[j]);
        return p;
    };
    ScalarSource src = [&](prec_t p) {
        BallVector v;
        for (std::size_t j = 0; j < d; ++j)
            v.push_back(log_abs_embed(x, j, p));
        return v;
    };
    RelationOptions o = opt;
    if (galois)
        o.verifier = [&](const IntVector& c) {
            return root_of_unity_order(product(c)) > 0 ? Verdict::Verified : Verdict::Unverifiable;
        };
    ConjugateRank out;
    out.relations = find_integer_relations(src, o);
    auto& rel = out.relations;
    out.rank = d - rel.relations.size();
    if (!galois || rel.relations.empty())
        return out;

    // torsion of each basis product; fold signs into the kernel
    std::vector<IntVector> basis = rel.relations;
    std::vector<long> order;
    for (const auto& c : basis)
        order.push_back(root_of_unity_order(product(c)));
    bool higher = false;
    std::ptrdiff_t first_sign = -1;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (order[i] == 2 && first_sign < 0)
            first_sign = static_cast<std::ptrdiff_t>(i);
        if (order[i] > 2 || order[i] == 0)
            higher = true;
    }
    if (first_sign >= 0) {
        out.sign_torsion = true;
        auto i0 = static_cast<std::size_t>(first_sign);
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (i == i0 || order[i] != 2)
                continue;
            for (std::size_t j = 0; j < d; ++j)
                basis[i][j] -= basis[i0][j];
            order[i] = 1;
        }
        for (auto& e : basis[i0])
            e *= 2;
        order[i0] = 1;
    }
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (order[i] > 2)
            for (auto& e : basis[i])
                e *= order[i];
    rel.relations = canonical_basis(basis, d);
    rel.residuals.clear();
    BallVector logs = src(rel.precision);
    for (const auto& c : rel.relations) {
        Ball s(rel.precision);
        for (std::size_t j = 0; j < d; ++j)
            s += Ball::from_integer(c[j], rel.precision) * logs[j];
        rel.residuals.push_back(BallVector{s});
    }
    // every reported relation now has product exactly 1
    bool all_one = !higher;
    for (const auto& c : rel.relations)
        all_one = all_one && product(c).is_one();
    rel.status = all_one ? RelationStatus::VerifiedExact : RelationStatus::NumericOnly;
    return out;
}

} // namespace toral
