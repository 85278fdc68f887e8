#pragma once

#include "toral/arith/ball_matrix.hpp"
#include "toral/relations/normal_form.hpp"
#include "toral/relations/relations.hpp"
#include "toral/torus/torus.hpp"
#include "toral/units/units.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace toral {

/// Log coordinates of a point of a product of norm-one tori (or of a split
/// torus, as a tuple over a degree-one field): for each component the
/// Dirichlet log vector without its last place; for rational components
/// just log|x|.
inline BallVector log_embedding(const TorusPoint& x, prec_t prec) {
    BallVector v;
    for (const auto& c : x) {
        if (c.is_zero())
            throw DomainError("log_embedding: zero component");
        if (c.field()->degree() == 1) {
            v.push_back(log_abs_embed(c, 0, prec));
        } else {
            BallVector part = unit_log_vector(c, prec);
            v.insert(v.end(), part.begin(), part.end());
        }
    }
    return v;
}

/// Multiplies points componentwise, with integer exponents.
inline TorusPoint point_power_product(const std::vector<TorusPoint>& pts, const IntVector& e) {
    TorusPoint out;
    for (std::size_t c = 0; c < pts[0].size(); ++c) {
        FieldElement acc = FieldElement::from_rational(pts[0][c].field(), 1);
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (e[i] != 0)
                acc = acc * pts[i][c].pow(e[i]);
        out.push_back(acc);
    }
    return out;
}

/// Every component a root of unity.
inline bool is_torsion_point(const TorusPoint& x) {
    for (const auto& c : x)
        if (root_of_unity_order(c) == 0)
            return false;
    return true;
}

/// Lattice in R^n spanned by log embeddings of exact points.
struct LogLattice {
    std::size_t n = 0;
    std::vector<TorusPoint> provenance; ///< one per basis vector
    Maximality maximality = Maximality::Unverified;

    BallMatrix basis(prec_t p) const {
        BallMatrix b;
        for (const auto& x : provenance)
            b.push_back(log_embedding(x, p));
        return b;
    }
};

/// Certified sign of det of the basis matrix, escalating precision.
inline Sign lattice_orientation(const LogLattice& l, prec_t prec = 128, prec_t max_prec = kDefaultMaxPrecBits) {
    if (l.n == 0)
        return Sign::Positive;
    for (prec_t p = prec; p <= max_prec; p *= 2) {
        Sign s = sign_certified(ball_det(l.basis(p)));
        if (s != Sign::Unknown)
            return s;
    }
    return Sign::Unknown;
}

inline LogLattice make_log_lattice(std::vector<TorusPoint> gens, Maximality m) {
    LogLattice l;
    l.provenance = std::move(gens);
    l.maximality = m;
    l.n = l.provenance.empty() ? 0 : log_embedding(l.provenance[0], 64).size();
    if (l.provenance.size() != l.n)
        throw RankError("log lattice: " + std::to_string(l.provenance.size()) + " generators in dimension " +
                        std::to_string(l.n));
    if (lattice_orientation(l) == Sign::Unknown)
        throw RankError("log lattice: independence of the generators not certified");
    return l;
}

/// Norm-one units of U, as a lattice in the norm-one log space of their field.
inline LogLattice unit_log_lattice(const UnitSystem& u) {
    std::vector<TorusPoint> gens;
    for (const auto& g : u.gens)
        gens.push_back({g});
    LogLattice l;
    l.maximality = u.maximality;
    l.provenance = gens;
    l.n = unit_rank(u.field);
    if (gens.size() != l.n)
        throw RankError("unit_log_lattice: expected " + std::to_string(l.n) + " generators");
    if (lattice_orientation(l) == Sign::Unknown)
        throw RankError("unit_log_lattice: regulator sign not certified");
    return l;
}

/// Lambda^m for the product of m copies of one norm-one torus.
inline LogLattice power_lattice(const LogLattice& l, std::size_t m) {
    LogLattice out;
    out.n = l.n * m;
    out.maximality = l.maximality;
    for (std::size_t b = 0; b < m; ++b)
        for (const auto& g : l.provenance) {
            TorusPoint x;
            for (std::size_t c = 0; c < m; ++c)
                x.push_back(c == b ? g[0] : FieldElement::from_rational(g[0].field(), 1));
            out.provenance.push_back(x);
        }
    return out;
}

/// Rows m_i with <m_i, b_j> = delta_ij.
inline BallMatrix dual_basis(const BallMatrix& b) {
    if (b.empty())
        return {};
    return transpose(ball_inverse(b));
}

inline BallMatrix dual_basis(const LogLattice& l, prec_t p) { return dual_basis(l.basis(p)); }

enum class Algebraicity { Algebraic, NotAlgebraic, Unknown };

inline const char* to_string(Algebraicity a) {
    switch (a) {
    case Algebraicity::Algebraic: return "Algebraic";
    case Algebraicity::NotAlgebraic: return "NotAlgebraic";
    case Algebraicity::Unknown: return "Unknown";
    }
    return "?";
}

struct ClosureReport {
    std::size_t n = 0;
    std::size_t dim = 0;
    IntMatrix kernel_chars; ///< rows: integer coordinates in the dual basis
    bool dense = false;
    Algebraicity algebraic = Algebraicity::Unknown;
    IntMatrix subtorus_chars; ///< when Algebraic: integer characters cutting out the closure
    RelationStatus status = RelationStatus::NumericOnly;
    Integer height = kDefaultHeightBound;
    prec_t precision = kDefaultPrecBits;
    Maximality maximality = Maximality::Unverified;
};

/// Coordinates of the points in the lattice basis: T[i][j] = <m_i, u_j>.
inline BallMatrix lattice_coordinates(const LogLattice& l, const std::vector<TorusPoint>& pts, prec_t p) {
    BallMatrix dual = dual_basis(l, p);
    BallMatrix t(l.n, BallVector(pts.size(), Ball(p)));
    for (std::size_t j = 0; j < pts.size(); ++j) {
        BallVector u = log_embedding(pts[j], p);
        if (u.size() != l.n)
            throw InputError("closure: point dimension does not match the lattice");
        for (std::size_t i = 0; i < l.n; ++i)
            t[i][j] = dot(dual[i], u);
    }
    return t;
}

/// Identity component of the closure of the group generated by the points in
/// R^n / Lambda. K = integer dual vectors pairing integrally with every point;
/// dim = n - rank K. When K has full rank each point is a rational combination
/// of lattice vectors and that is checked exactly on the provenance.
inline ClosureReport closure(const LogLattice& l, const std::vector<TorusPoint>& pts, const RelationOptions& opt = {}) {
    ClosureReport rep;
    rep.n = l.n;
    rep.height = opt.height;
    rep.maximality = l.maximality;
    rep.precision = opt.prec;
    if (l.n == 0 || pts.empty()) {
        rep.kernel_chars = IntMatrix::identity(l.n);
        rep.dim = 0;
        rep.dense = l.n == 0;
        rep.status = RelationStatus::VerifiedExact;
        return rep;
    }
    // escalate until the dual is certified
    VectorSource src = [&](prec_t p) {
        for (prec_t q = p;; q *= 2) {
            try {
                return lattice_coordinates(l, pts, q);
            } catch (const PrecisionExhausted&) {
                if (2 * q > opt.max_prec)
                    throw;
            }
        }
    };
    RelationResult rel = simultaneous_relations(src, opt);
    rep.precision = rel.precision;
    std::vector<IntVector> proj;
    for (const auto& c : rel.relations)
        proj.emplace_back(c.begin(), c.begin() + static_cast<long>(l.n));
    IntMatrix k = proj.empty() ? IntMatrix(0, l.n) : lattice_basis(IntMatrix::from_rows(proj, l.n));
    std::vector<IntVector> rows = canonical_basis(k.row_list(), l.n);
    rep.kernel_chars = rows.empty() ? IntMatrix(0, l.n) : IntMatrix::from_rows(rows, l.n);
    rep.dim = l.n - rep.kernel_chars.rows();
    rep.dense = rep.kernel_chars.rows() == 0;

    if (rep.dim == 0) {
        // u_j = C^-1 k_j with C the kernel basis: x_j^q = prod b_i^a_i up to torsion
        BallMatrix t = src(rel.precision);
        auto cinv = rational_inverse(rep.kernel_chars);
        bool exact = true;
        for (std::size_t j = 0; j < pts.size() && exact; ++j) {
            IntVector kj;
            for (std::size_t r = 0; r < l.n; ++r) {
                Ball s(rel.precision);
                for (std::size_t i = 0; i < l.n; ++i)
                    s += Ball::from_integer(rep.kernel_chars(r, i), rel.precision) * t[i][j];
                Integer near = detail::scaled_round(s, 0);
                kj.push_back(near);
            }
            RatVector coord(l.n, Rational(0));
            for (std::size_t i = 0; i < l.n; ++i)
                for (std::size_t r = 0; r < l.n; ++r)
                    coord[i] += cinv[i][r] * kj[r];
            Integer q = lcm_of_denominators(coord);
            IntVector e{q};
            std::vector<TorusPoint> gens{pts[j]};
            for (std::size_t i = 0; i < l.n; ++i) {
                Rational a = coord[i] * q;
                a.canonicalize();
                e.push_back(-a.get_num());
                gens.push_back(l.provenance[i]);
            }
            exact = is_torsion_point(point_power_product(gens, e));
        }
        rep.status = exact ? RelationStatus::VerifiedExact : RelationStatus::NumericOnly;
    }
    return rep;
}

/// Intersection of two sublattices of Z^n given by row bases.
inline IntMatrix lattice_intersection(const IntMatrix& a, const IntMatrix& b) {
    const std::size_t n = a.cols();
    if (a.rows() == 0 || b.rows() == 0)
        return IntMatrix(0, n);
    // x a = y b  <=>  (x, y) in ker [a; -b]^T
    std::vector<IntVector> cols;
    IntMatrix m(n, a.rows() + b.rows());
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i)
            m(j, i) = a(i, j);
        for (std::size_t i = 0; i < b.rows(); ++i)
            m(j, a.rows() + i) = -b(i, j);
    }
    IntMatrix ker = integer_kernel(m);
    std::vector<IntVector> rows;
    for (std::size_t r = 0; r < ker.rows(); ++r) {
        IntVector x(a.rows());
        for (std::size_t i = 0; i < a.rows(); ++i)
            x[i] = ker(r, i);
        rows.push_back(x * a);
    }
    if (rows.empty())
        return IntMatrix(0, n);
    return lattice_basis(IntMatrix::from_rows(rows, n));
}

/// Dimension of the join of several closures (the product of compact
/// subgroups): n minus the rank of the intersection of their kernels.
inline std::size_t join_dim(const std::vector<ClosureReport>& reps) {
    if (reps.empty())
        return 0;
    IntMatrix k = reps[0].kernel_chars;
    for (std::size_t i = 1; i < reps.size(); ++i)
        k = lattice_intersection(k, reps[i].kernel_chars);
    return reps[0].n - k.rows();
}

/// Sign of det [r u + lambda; l_1; ...; l_{n-1}] with everything given in
/// lattice coordinates (exact rationals): a certified Zero refutes density.
inline Sign lemma1c_determinant_check(const std::vector<RatVector>& basis, const RatVector& u, const Integer& r,
                                      const IntVector& lambda, const IntMatrix& ells) {
    const std::size_t n = u.size();
    if (r == 0)
        throw InputError("lemma1c: r must be nonzero");
    if (ells.rows() + 1 != n)
        throw InputError("lemma1c: need n-1 lattice vectors");
    // rows in ambient coordinates
    std::vector<RatVector> m;
    RatVector first(n, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
        first[j] = Rational(r) * u[j];
        for (std::size_t i = 0; i < n; ++i)
            first[j] += Rational(lambda[i]) * basis[i][j];
    }
    m.push_back(first);
    for (std::size_t k = 0; k < ells.rows(); ++k) {
        RatVector row(n, Rational(0));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i)
                row[j] += Rational(ells(k, i)) * basis[i][j];
        m.push_back(row);
    }
    // exact Gaussian elimination
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0)
            ++p;
        if (p == n)
            return Sign::Zero;
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            Rational f = m[i][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j)
                m[i][j] -= f * m[c][j];
        }
    }
    return det > 0 ? Sign::Positive : Sign::Negative;
}

/// Same determinant for a log lattice and an exact point; certified by balls.
/// Only Positive, Negative or Unknown can come out for transcendental entries.
inline Sign lemma1c_determinant_check(const LogLattice& l, const TorusPoint& x, const Integer& r,
                                      const IntVector& lambda, const IntMatrix& ells, prec_t prec = 256,
                                      prec_t max_prec = 4096) {
    if (r == 0)
        throw InputError("lemma1c: r must be nonzero");
    if (ells.rows() + 1 != l.n)
        throw InputError("lemma1c: need n-1 lattice vectors");
    for (prec_t p = prec; p <= max_prec; p *= 2) {
        BallMatrix b = l.basis(p);
        BallVector u = log_embedding(x, p);
        BallMatrix m;
        BallVector first(l.n, Ball(p));
        for (std::size_t j = 0; j < l.n; ++j) {
            first[j] = Ball::from_integer(r, p) * u[j];
            for (std::size_t i = 0; i < l.n; ++i)
                first[j] += Ball::from_integer(lambda[i], p) * b[i][j];
        }
        m.push_back(first);
        for (std::size_t k = 0; k < ells.rows(); ++k) {
            BallVector row(l.n, Ball(p));
            for (std::size_t j = 0; j < l.n; ++j)
                for (std::size_t i = 0; i < l.n; ++i)
                    row[j] += Ball::from_integer(ells(k, i), p) * b[i][j];
            m.push_back(row);
        }
        Sign s = sign_certified(ball_det(m));
        if (s != Sign::Unknown)
            return s;
    }
    return Sign::Unknown;
}

/// Algebraicity of the closure in split coordinates: the closure is W/(W cap
/// Lambda) with W the annihilator of K; it comes from a subtorus iff span(K),
/// written in the standard character coordinates, is spanned by integer
/// vectors.
inline void closure_is_algebraic_split(ClosureReport& rep, const LogLattice& l, const RelationOptions& opt = {}) {
    const std::size_t k = rep.kernel_chars.rows();
    if (k == 0) {
        rep.algebraic = Algebraicity::Algebraic;
        rep.subtorus_chars = IntMatrix(0, rep.n);
        return;
    }
    if (k == rep.n) {
        rep.algebraic = Algebraicity::Algebraic;
        rep.subtorus_chars = IntMatrix::identity(rep.n);
        return;
    }
    VectorSource v = [&](prec_t p) {
        BallMatrix dual = dual_basis(l, p);
        BallMatrix out;
        for (std::size_t r = 0; r < k; ++r) {
            BallVector f(rep.n, Ball(p));
            for (std::size_t i = 0; i < rep.n; ++i)
                for (std::size_t j = 0; j < rep.n; ++j)
                    f[j] += Ball::from_integer(rep.kernel_chars(r, i), p) * dual[i][j];
            out.push_back(f);
        }
        return out;
    };
    RelationResult ints = rational_vectors_in_span(v, opt);
    if (ints.relations.size() == k) {
        rep.algebraic = Algebraicity::Algebraic;
        rep.subtorus_chars = saturate(IntMatrix::from_rows(ints.relations, rep.n));
    } else {
        rep.algebraic = Algebraicity::NotAlgebraic;
        rep.subtorus_chars = ints.relations.empty() ? IntMatrix(0, rep.n) : IntMatrix::from_rows(ints.relations, rep.n);
        rep.status = RelationStatus::NumericOnly;
    }
}

/// Algebraicity in the structured context (products of norm-one tori of a
/// totally real Galois field): the Euclidean closure always lies in the real
/// points of the Zariski closure, so the two agree iff the dimensions agree.
/// The inclusion is also checked exactly: every X_F character must have
/// absolute value 1 on every unit in the annihilator of span(K).
inline void closure_is_algebraic_structured(ClosureReport& rep, const LogLattice& l, const ZariskiClosure& z) {
    if (!z.subtorus.field || !z.subtorus.field->totally_real()) {
        rep.algebraic = Algebraicity::Unknown;
        return;
    }
    const TorusSpec& s = *z.subtorus.parent;
    IntMatrix perp = rep.kernel_chars.rows() == 0 ? IntMatrix::identity(rep.n) : integer_kernel(rep.kernel_chars);
    for (std::size_t i = 0; i < z.xf.basis.rows(); ++i)
        for (std::size_t r = 0; r < perp.rows(); ++r) {
            TorusPoint unit = point_power_product(l.provenance, perp.row(r));
            FieldElement y = evaluate_character(s, z.xf.basis.row(i), unit);
            if (!y.is_one() && !y.is_minus_one()) {
                rep.algebraic = Algebraicity::Unknown;
                return;
            }
        }
    if (rep.dim == z.dim) {
        rep.algebraic = Algebraicity::Algebraic;
        rep.subtorus_chars = z.xf.basis;
    } else {
        rep.algebraic = Algebraicity::NotAlgebraic;
    }
}

enum class Conjecture2Verdict { Consistent, DeviationCandidate };

inline const char* to_string(Conjecture2Verdict v) {
    return v == Conjecture2Verdict::Consistent ? "CONSISTENT" : "DEVIATION-CANDIDATE";
}

struct Conjecture2Report {
    ClosureReport euclidean;
    ZariskiClosure zariski;
    std::size_t euclidean_dim = 0;
    std::size_t zariski_dim = 0;
    Conjecture2Verdict verdict = Conjecture2Verdict::Consistent;
};

/// Euclidean versus Zariski closure of F in a product of norm-one tori of
/// one field, with the arithmetic group built from the norm-one units.
inline Conjecture2Report conjecture2_test(const TorusSpec& s, const std::vector<TorusPoint>& f, const UnitSystem& u,
                                          const RelationOptions& opt = {}) {
    for (auto b : s.blocks)
        if (b != TorusKind::NormOne)
            throw InputError("conjecture2_test: torus must be a product of norm-one tori");
    if (s.chars.fixed_rank() != 0)
        throw IsotropicError("conjecture2_test: torus is isotropic");
    Conjecture2Report rep;
    LogLattice lam = power_lattice(unit_log_lattice(norm_one_subgroup(u)), s.blocks.size());
    rep.euclidean = closure(lam, f, opt);
    rep.zariski = zariski_closure(s, f, u, opt);
    closure_is_algebraic_structured(rep.euclidean, lam, rep.zariski);
    rep.euclidean_dim = rep.euclidean.dim;
    rep.zariski_dim = rep.zariski.dim;
    if (rep.euclidean_dim > rep.zariski_dim)
        throw InternalError("conjecture2_test: Euclidean closure larger than Zariski closure");
    rep.verdict = rep.euclidean_dim == rep.zariski_dim ? Conjecture2Verdict::Consistent
                                                       : Conjecture2Verdict::DeviationCandidate;
    return rep;
}

} // namespace toral
