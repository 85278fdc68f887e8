#pragma once

#include "toral/field/galois.hpp"
#include "toral/relations/normal_form.hpp"
#include "toral/relations/relations.hpp"
#include "toral/units/units.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace toral {

/// Finite group by its full multiplication table; element 0 is the identity.
struct GroupTable {
    std::vector<std::vector<std::size_t>> mul;
    std::size_t order() const { return mul.size(); }
    static GroupTable trivial() { return GroupTable{{{0}}}; }
};

/// Character lattice Z^rank with a left action of a finite group:
/// g . chi = action[g] * chi (chi a column vector).
struct CharacterLattice {
    std::size_t rank = 0;
    GroupTable group = GroupTable::trivial();
    std::vector<IntMatrix> action{IntMatrix()};

    IntVector apply(std::size_t g, const IntVector& chi) const { return action[g] * chi; }

    /// Matrices are unimodular and form a representation of the group.
    void validate() const {
        if (action.size() != group.order())
            throw StructureError("CharacterLattice: one matrix per group element required");
        if (action[0] != IntMatrix::identity(rank))
            throw StructureError("CharacterLattice: identity must act trivially");
        for (std::size_t a = 0; a < group.order(); ++a) {
            if (action[a].rows() != rank || action[a].cols() != rank || !is_unimodular(action[a]))
                throw StructureError("CharacterLattice: action matrix not in GL_n(Z)");
            for (std::size_t b = 0; b < group.order(); ++b)
                if (action[a] * action[b] != action[group.mul[a][b]])
                    throw StructureError("CharacterLattice: action does not respect the group law");
        }
    }

    /// Rank of the sublattice fixed by every group element.
    std::size_t fixed_rank() const {
        if (rank == 0)
            return 0;
        std::vector<IntVector> rows;
        for (std::size_t g = 0; g < group.order(); ++g)
            for (std::size_t i = 0; i < rank; ++i) {
                IntVector r = action[g].row(i);
                r[i] -= 1;
                rows.push_back(r);
            }
        return integer_kernel(IntMatrix::from_rows(rows, rank)).rows();
    }
};

enum class TorusKind { Restriction, NormOne, Product, Split, Sub };

inline const char* to_string(TorusKind k) {
    switch (k) {
    case TorusKind::Restriction: return "Restriction";
    case TorusKind::NormOne: return "NormOne";
    case TorusKind::Product: return "Product";
    case TorusKind::Split: return "Split";
    case TorusKind::Sub: return "Sub";
    }
    return "?";
}

/// A torus over Q, described by its character lattice. Restriction, NormOne
/// and their products carry a Galois field L; points are tuples of elements
/// of L, one per block.
struct TorusSpec {
    TorusKind kind = TorusKind::Split;
    CharacterLattice chars;
    Field field;                    ///< common Galois field (null for Split)
    std::vector<TorusKind> blocks;  ///< flattened Restriction/NormOne factors
    std::shared_ptr<const TorusSpec> parent; ///< Sub only
    IntMatrix kernel;     ///< Sub: saturated characters of the parent vanishing on it
    IntMatrix complement; ///< Sub: parent characters whose images form the basis of X*(Sub)

    std::size_t rank() const { return chars.rank; }
    std::size_t block_size(std::size_t b) const {
        return blocks[b] == TorusKind::NormOne ? field->degree() - 1 : field->degree();
    }
    std::string describe() const {
        std::string s = to_string(kind);
        if (kind == TorusKind::Product) {
            s += "(";
            for (std::size_t b = 0; b < blocks.size(); ++b)
                s += (b ? "," : "") + std::string(to_string(blocks[b]));
            s += ")";
        }
        return s + " rank " + std::to_string(rank());
    }
};

using TorusPoint = std::vector<FieldElement>;

namespace detail {

inline GroupTable galois_group_table(const Field& l) { return GroupTable{galois_composition(l)}; }

inline IntMatrix permutation_action(const GroupTable& g, std::size_t a) {
    std::size_t d = g.order();
    IntMatrix m(d, d);
    for (std::size_t j = 0; j < d; ++j)
        m(g.mul[a][j], j) = 1;
    return m;
}

} // namespace detail

/// R_{L/Q} G_m: characters Z^d, e_j = (z -> z_j); sigma_a e_j = e_{a o j}.
inline TorusSpec restriction_torus(const Field& l) {
    TorusSpec t;
    t.kind = TorusKind::Restriction;
    t.field = l;
    t.blocks = {TorusKind::Restriction};
    t.chars.rank = l->degree();
    t.chars.group = detail::galois_group_table(l);
    t.chars.action.clear();
    for (std::size_t a = 0; a < t.chars.group.order(); ++a)
        t.chars.action.push_back(detail::permutation_action(t.chars.group, a));
    t.chars.validate();
    return t;
}

/// (R_{L/Q} G_m)^1: characters Z^d / Z(1,...,1), basis the images of
/// e_0, ..., e_{d-2}.
inline TorusSpec norm_one_torus(const Field& l) {
    TorusSpec t;
    t.kind = TorusKind::NormOne;
    t.field = l;
    t.blocks = {TorusKind::NormOne};
    const std::size_t d = l->degree();
    t.chars.rank = d - 1;
    t.chars.group = detail::galois_group_table(l);
    t.chars.action.clear();
    for (std::size_t a = 0; a < t.chars.group.order(); ++a) {
        IntMatrix m(d - 1, d - 1);
        for (std::size_t j = 0; j + 1 < d; ++j) {
            std::size_t i = t.chars.group.mul[a][j];
            if (i + 1 < d)
                m(i, j) = 1;
            else
                for (std::size_t r = 0; r + 1 < d; ++r)
                    m(r, j) = -1;
        }
        t.chars.action.push_back(m);
    }
    t.chars.validate();
    return t;
}

/// G_m^n with trivial action.
inline TorusSpec split_torus(std::size_t n) {
    TorusSpec t;
    t.kind = TorusKind::Split;
    t.chars.rank = n;
    t.chars.action = {IntMatrix::identity(n)};
    return t;
}

/// Direct product; all factors must be over the same Galois field.
inline TorusSpec product(const std::vector<TorusSpec>& parts) {
    if (parts.empty())
        throw InputError("product: no factors");
    TorusSpec t;
    t.kind = TorusKind::Product;
    t.field = parts[0].field;
    std::size_t n = 0;
    for (const auto& p : parts) {
        if (p.kind == TorusKind::Sub || p.kind == TorusKind::Split)
            throw InputError("product: factors must be restriction, norm-one or product tori");
        if (p.field->min_poly() != t.field->min_poly())
            throw InputError("product: factors must share one Galois field; pass them over the compositum");
        t.blocks.insert(t.blocks.end(), p.blocks.begin(), p.blocks.end());
        n += p.rank();
    }
    t.chars.rank = n;
    t.chars.group = parts[0].chars.group;
    t.chars.action.clear();
    for (std::size_t a = 0; a < t.chars.group.order(); ++a) {
        IntMatrix m(n, n);
        std::size_t off = 0;
        for (const auto& p : parts) {
            for (std::size_t i = 0; i < p.rank(); ++i)
                for (std::size_t j = 0; j < p.rank(); ++j)
                    m(off + i, off + j) = p.chars.action[a](i, j);
            off += p.rank();
        }
        t.chars.action.push_back(m);
    }
    t.chars.validate();
    return t;
}

/// Characters chi of S with chi(a) a unit for all a in F.
struct CharSubgroup {
    TorusSpec torus;
    IntMatrix basis;                     ///< rows = exponent vectors
    std::vector<RelationStatus> verified; ///< per row
    Integer height = kDefaultHeightBound;
    prec_t precision = kDefaultPrecBits;
    std::size_t rank() const { return basis.rows(); }
};

namespace detail {

/// Unit group of L when it can be obtained automatically.
inline UnitSystem default_units(const Field& l) {
    if (unit_rank(l) == 0)
        return UnitSystem{l, {}, Maximality::Proven, {}};
    const IntPoly& f = l->min_poly();
    if (f.degree() == 2 && f.coeff(1) == 0 && f.coeff(2) == 1) {
        FieldElement e = quadratic_fundamental_unit(l);
        UnitSystem u = verify_units(l, {e});
        return u;
    }
    if (f.degree() == 3 && l->totally_real() && f.coeff(3) == 1) {
        for (double b = 4; b <= 16; b += 4) {
            try {
                return cubic_unit_search(l, b);
            } catch (const SearchEmpty&) {
            }
        }
    }
    throw InputError("units of " + l->to_string() + " must be supplied");
}

inline void check_point(const TorusSpec& s, const TorusPoint& a) {
    if (a.size() != s.blocks.size())
        throw InputError("point has " + std::to_string(a.size()) + " components, torus has " +
                         std::to_string(s.blocks.size()));
    for (std::size_t b = 0; b < a.size(); ++b) {
        if (a[b].field()->min_poly() != s.field->min_poly())
            throw InputError("point component lies in a different field");
        if (a[b].is_zero())
            throw InputError("point component is zero");
        if (s.blocks[b] == TorusKind::NormOne && norm(a[b]) != 1)
            throw InputError("point component " + a[b].to_string() + " of a norm-one factor has norm " +
                             norm(a[b]).get_str());
    }
}

} // namespace detail

/// chi_n(a) = prod over blocks b and coordinates j of sigma_j(a_b)^n, exactly in L.
inline FieldElement evaluate_character(const TorusSpec& s, const IntVector& n, const TorusPoint& a) {
    detail::check_point(s, a);
    FieldElement out = FieldElement::from_rational(s.field, 1);
    std::size_t off = 0;
    for (std::size_t b = 0; b < a.size(); ++b) {
        std::vector<FieldElement> conj;
        for (std::size_t j = 0; j < s.block_size(b); ++j) {
            if (n[off + j] == 0)
                continue;
            if (conj.empty())
                conj = conjugates(a[b]);
            out = out * conj[j].pow(n[off + j]);
        }
        off += s.block_size(b);
    }
    return out;
}

/// log|iota_i(chi_n(a))| for every embedding i, from log|iota_k(a_b)|.
inline BallVector character_log_row(const TorusSpec& s, std::size_t coord, const TorusPoint& a,
                                    const std::vector<std::vector<std::size_t>>& compose, prec_t p) {
    std::size_t b = 0, off = 0;
    while (coord >= off + s.block_size(b))
        off += s.block_size(b++);
    std::size_t j = coord - off;
    BallVector v;
    for (std::size_t i = 0; i < s.field->degree(); ++i)
        v.push_back(log_abs_embed(a[b], compose[i][j], p));
    return v;
}

/// X_F: exponent vectors n with chi_n(a) a unit for every a in F. Found by
/// simultaneous relations between conjugate log magnitudes and the unit log
/// lattice of L, then saturated; each basis row is checked exactly with
/// is_unit. Rows failing the exact check are retried at doubled precision and
/// dropped if they fail again.
inline CharSubgroup compute_XF(const TorusSpec& s, const std::vector<TorusPoint>& f,
                               const std::optional<UnitSystem>& units = std::nullopt, const RelationOptions& opt = {}) {
    if (!s.field || s.kind == TorusKind::Sub || s.kind == TorusKind::Split)
        throw InputError("compute_XF: torus must be a restriction, norm-one or product torus over a Galois field");
    const Field& l = s.field;
    auto compose = galois_composition(l);
    for (const auto& a : f)
        detail::check_point(s, a);
    const std::size_t n = s.rank(), d = l->degree();
    CharSubgroup out;
    out.torus = s;
    out.height = opt.height;
    out.precision = opt.prec;
    if (f.empty()) {
        out.basis = IntMatrix::identity(n);
        out.verified.assign(n, RelationStatus::VerifiedExact);
        return out;
    }
    UnitSystem u = units ? *units : detail::default_units(l);
    const std::size_t r = u.gens.size(), nf = f.size();

    auto all_units = [&](const IntVector& c) {
        for (const auto& a : f)
            if (!is_unit(evaluate_character(s, c, a)))
                return false;
        return true;
    };
    VectorSource src = [&](prec_t p) {
        BallMatrix rows;
        for (std::size_t k = 0; k < n; ++k) {
            BallVector row;
            for (const auto& a : f) {
                BallVector part = character_log_row(s, k, a, compose, p);
                row.insert(row.end(), part.begin(), part.end());
            }
            rows.push_back(row);
        }
        for (std::size_t fi = 0; fi < nf; ++fi)
            for (std::size_t e = 0; e < r; ++e) {
                BallVector row(nf * d, Ball::from_long(0, p));
                for (std::size_t i = 0; i < d; ++i)
                    row[fi * d + i] = log_abs_embed(u.gens[e], i, p);
                rows.push_back(row);
            }
        return rows;
    };

    RelationOptions o = opt;
    o.verifier = [&](const IntVector& c) {
        IntVector head(c.begin(), c.begin() + static_cast<long>(n));
        if (is_zero_vector(head))
            return Verdict::Unverifiable;
        return all_units(head) ? Verdict::Verified : Verdict::Unverifiable;
    };
    std::vector<IntVector> dropped;
    for (;;) {
        RelationResult rel = find_vector_relations(src, o);
        out.precision = rel.precision;
        std::vector<IntVector> proj;
        for (const auto& c : rel.relations)
            proj.emplace_back(c.begin(), c.begin() + static_cast<long>(n));
        IntMatrix sat = proj.empty() ? IntMatrix(0, n) : saturate(IntMatrix::from_rows(proj, n));
        std::vector<IntVector> good, bad;
        for (std::size_t i = 0; i < sat.rows(); ++i) {
            IntVector row = sat.row(i);
            (all_units(row) ? good : bad).push_back(row);
        }
        if (bad.empty() || 2 * o.prec > o.max_prec || bad == dropped) {
            IntMatrix g = good.empty() ? IntMatrix(0, n) : saturate(IntMatrix::from_rows(good, n));
            std::vector<IntVector> rows;
            for (std::size_t i = 0; i < g.rows(); ++i) {
                IntVector row = g.row(i);
                if (all_units(row))
                    rows.push_back(row);
            }
            rows = canonical_basis(rows, n);
            out.basis = rows.empty() ? IntMatrix(0, n) : IntMatrix::from_rows(rows, n);
            out.verified.assign(rows.size(), RelationStatus::VerifiedExact);
            return out;
        }
        dropped = bad;
        o.prec *= 2;
    }
}

/// Subtorus cut out by a saturated set of characters: X*(Sub) = X*(S)/K.
inline TorusSpec subtorus(const TorusSpec& s, const IntMatrix& kernel) {
    const std::size_t n = s.rank(), r = kernel.rows();
    TorusSpec t;
    t.kind = TorusKind::Sub;
    t.field = s.field;
    t.parent = std::make_shared<const TorusSpec>(s);
    t.kernel = kernel;
    t.chars.rank = n - r;
    t.chars.group = s.chars.group;
    t.chars.action.clear();
    // complete the kernel rows to a unimodular basis W = right^-1
    IntMatrix w = IntMatrix::identity(n), winv = IntMatrix::identity(n);
    if (r > 0) {
        SnfResult sn = snf(kernel);
        for (std::size_t i = 0; i < r; ++i)
            if (sn.d(i, i) != 1 && sn.d(i, i) != -1)
                throw InputError("subtorus: kernel characters are not saturated");
        winv = sn.right;
        auto inv = rational_inverse(sn.right);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                w(i, j) = inv[i][j].get_num();
    }
    t.complement = IntMatrix(n - r, n);
    for (std::size_t i = r; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            t.complement(i - r, j) = w(i, j);
    for (std::size_t g = 0; g < t.chars.group.order(); ++g) {
        IntMatrix m(n - r, n - r);
        for (std::size_t c = 0; c < n - r; ++c) {
            IntVector img = s.chars.apply(g, t.complement.row(c));
            IntVector coords = img * winv; // coordinates in the rows of W
            for (std::size_t i = 0; i < n - r; ++i)
                m(i, c) = coords[r + i];
        }
        t.chars.action.push_back(m);
    }
    t.chars.validate();
    return t;
}

struct ZariskiClosure {
    TorusSpec subtorus;
    std::size_t dim = 0;
    CharSubgroup xf;
    RelationStatus status = RelationStatus::VerifiedExact; ///< of the X_F rows
    bool conditional = true; ///< X_F might be larger than found (height/precision bounded)
};

/// Connected Zariski closure of the group generated by F: the subtorus
/// annihilated by X_F.
inline ZariskiClosure zariski_closure(const TorusSpec& s, const std::vector<TorusPoint>& f,
                                      const std::optional<UnitSystem>& units = std::nullopt,
                                      const RelationOptions& opt = {}) {
    ZariskiClosure z;
    z.xf = compute_XF(s, f, units, opt);
    z.subtorus = subtorus(s, z.xf.basis);
    z.dim = s.rank() - z.xf.rank();
    for (auto v : z.xf.verified)
        if (v != RelationStatus::VerifiedExact)
            z.status = RelationStatus::NumericOnly;
    z.conditional = z.dim != 0;
    return z;
}

/// Data of T -> prod (R_{K_i/Q} G_m)^1 from the surjection
/// sum Z[G/H_i] -> X*(T).
struct NormOneEmbedding {
    std::vector<Field> fields;                        ///< K_i = L^{H_i}
    std::vector<std::vector<std::size_t>> stabilizers; ///< H_i
    std::vector<std::vector<std::size_t>> cosets;      ///< representatives of G/H_i
    IntMatrix char_map; ///< one row per coset g H_i: the character g . e_i
    std::vector<Integer> divisors; ///< elementary divisors of char_map
};

namespace detail {

inline IntPoly primitive_integer_poly(const RatPoly& p) {
    Integer den = lcm_of_denominators(p.coeffs());
    std::vector<Integer> v;
    for (const auto& c : p.coeffs())
        v.push_back(Rational(c * den).get_num());
    IntPoly q(v);
    Integer g = content(q);
    std::vector<Integer> w;
    for (const auto& c : q.coeffs())
        w.push_back(c / g);
    return IntPoly(w);
}

/// Fixed field of a subgroup H of Gal(L/Q), from a primitive element of it.
inline Field fixed_field(const Field& l, const std::vector<std::size_t>& h) {
    const std::size_t d = l->degree();
    if (h.size() == 1)
        return l;
    const std::size_t want = d / h.size();
    auto auts = galois_automorphisms(l);
    FieldElement t = FieldElement::generator(l);
    for (long c = 0; c < 50; ++c) {
        for (int kind = 0; kind < 2; ++kind) {
            FieldElement x = FieldElement::from_rational(l, kind == 0 ? 0 : 1);
            FieldElement y = t + FieldElement::from_rational(l, Rational(c));
            for (std::size_t g : h) {
                FieldElement img = apply_automorphism(auts[g], y);
                x = kind == 0 ? x + img : x * img;
            }
            RatPoly mp = minimal_polynomial(x);
            if (static_cast<std::size_t>(mp.degree()) == want)
                return make_field(primitive_integer_poly(mp));
        }
    }
    throw InternalError("fixed_field: no primitive element found");
}

} // namespace detail

inline NormOneEmbedding embed_in_norm_one_product(const TorusSpec& t) {
    const CharacterLattice& x = t.chars;
    if (x.fixed_rank() > 0)
        throw IsotropicError("embed_in_norm_one_product: torus has a Galois-fixed character (rank " +
                             std::to_string(x.fixed_rank()) + ")");
    if (!t.field)
        throw InputError("embed_in_norm_one_product: torus must carry its splitting field");
    const std::size_t n = x.rank, g = x.group.order();
    NormOneEmbedding e;
    std::vector<IntVector> rows;
    for (std::size_t i = 0; i < n; ++i) {
        IntVector ei(n, Integer(0));
        ei[i] = 1;
        std::vector<std::size_t> stab, reps;
        std::vector<IntVector> seen;
        for (std::size_t a = 0; a < g; ++a) {
            IntVector img = x.apply(a, ei);
            if (img == ei)
                stab.push_back(a);
            if (std::find(seen.begin(), seen.end(), img) == seen.end()) {
                seen.push_back(img);
                reps.push_back(a);
                rows.push_back(img);
            }
        }
        e.stabilizers.push_back(stab);
        e.cosets.push_back(reps);
        e.fields.push_back(detail::fixed_field(t.field, stab));
    }
    e.char_map = IntMatrix::from_rows(rows, n);
    // equivariance: g permutes the coset rows
    for (std::size_t a = 0; a < g; ++a)
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (std::find(rows.begin(), rows.end(), x.apply(a, rows[r])) == rows.end())
                throw InternalError("embed_in_norm_one_product: character map is not equivariant");
    SnfResult sn = snf(e.char_map);
    for (Integer dv : sn.divisors())
        e.divisors.push_back(dv < 0 ? Integer(-dv) : dv);
    if (e.divisors.size() != n)
        throw InternalError("embed_in_norm_one_product: character map is not surjective");
    for (const auto& dv : e.divisors)
        if (dv != 1)
            throw InternalError("embed_in_norm_one_product: character map is not surjective");
    return e;
}

} // namespace toral
