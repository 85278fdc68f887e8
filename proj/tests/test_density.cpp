#include "toral/density/density.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace toral;

namespace {

IntPoly ip(std::initializer_list<long> c) {
    std::vector<Integer> v;
    for (long x : c)
        v.emplace_back(x);
    return IntPoly(v);
}

FieldElement el(const Field& k, std::initializer_list<long> c) {
    RatVector v;
    for (long x : c)
        v.emplace_back(x);
    v.resize(k->degree(), Rational(0));
    return FieldElement(k, v);
}

FieldElement q(const Field& k, long a, long b = 1) { return FieldElement::from_rational(k, make_rational(a, b)); }

Field sqrt2() { return make_field(ip({-2, 0, 1})); }
Field rationals() { return make_field(ip({0, 1})); }
Field cyclic_cubic() { return make_field(ip({-1, -3, 0, 1})); }

FieldElement eleven(const Field& k) { return FieldElement(k, {make_rational(11, 7), make_rational(6, 7)}); }

// The split lattice generated by x = (1,2,3), y = (1/2,1,5), z = (7,1,2).
LogLattice split_lattice() {
    auto k = rationals();
    return make_log_lattice({{q(k, 1), q(k, 2), q(k, 3)}, {q(k, 1, 2), q(k, 1), q(k, 5)}, {q(k, 7), q(k, 1), q(k, 2)}},
                            Maximality::Unverified);
}

// (3 - t) / sigma(3 - t): norm one, not a unit.
FieldElement cubic_point(const Field& k) {
    FieldElement y = el(k, {3, -1});
    FieldElement s = galois_automorphisms(k)[1];
    return y / apply_automorphism(s, y);
}

UnitSystem cubic_units(const Field& k) { return verify_units(k, {el(k, {0, 1}), el(k, {1, 1})}); }

} // namespace

TEST(LogEmbedding, Examples) {
    auto k = sqrt2();
    EXPECT_TRUE(log_embedding({q(k, 1)}, 128)[0].contains(Ball::from_long(0, 128)));
    // embedding 0 sends t to -sqrt2 (real roots ascending)
    long double s2 = -std::sqrt(2.0L);
    BallVector a = log_embedding({el(k, {3, 2})}, 128);
    ASSERT_EQ(a.size(), 1u);
    EXPECT_NEAR(a[0].mid_double(), static_cast<double>(std::log(std::fabs(3 + 2 * s2))), 1e-15);
    EXPECT_NEAR(a[0].mid_double(), -1.7627, 1e-4);
    BallVector b = log_embedding({eleven(k)}, 128);
    EXPECT_NEAR(b[0].mid_double(), static_cast<double>(std::log((11 + 6 * s2) / 7)), 1e-15);
    EXPECT_NEAR(b[0].mid_double(), -1.0238, 1e-4);
}

TEST(UnitLattice, Examples) {
    auto k = sqrt2();
    LogLattice l = unit_log_lattice(verify_units(k, {el(k, {3, 2})}));
    EXPECT_EQ(l.n, 1u);
    EXPECT_NEAR(std::fabs(l.basis(128)[0][0].mid_double()), 1.7627471740390860, 1e-14);

    auto c = cyclic_cubic();
    LogLattice lc = unit_log_lattice(cubic_units(c));
    EXPECT_EQ(lc.n, 2u);
    EXPECT_NE(lattice_orientation(lc), Sign::Unknown);

    auto i = make_field(ip({1, 0, 1}));
    LogLattice li = unit_log_lattice(verify_units(i, {}));
    EXPECT_EQ(li.n, 0u);
    // dependent generators are rejected
    auto r = rationals();
    EXPECT_THROW(make_log_lattice({{q(r, 2), q(r, 3)}, {q(r, 4), q(r, 9)}}, Maximality::Unverified), RankError);
}

TEST(Dual, Examples) {
    const prec_t p = 256;
    BallMatrix id{{Ball::from_long(1, p), Ball::from_long(0, p)}, {Ball::from_long(0, p), Ball::from_long(1, p)}};
    BallMatrix d = dual_basis(id);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            EXPECT_TRUE(d[i][j].contains(Ball::from_long(i == j, p)));
    Ball l = log_rational(Rational(7), p);
    BallMatrix d1 = dual_basis(BallMatrix{{l}});
    EXPECT_NEAR(d1[0][0].mid_double(), 1.0 / std::log(7.0), 1e-15);

    LogLattice s = split_lattice();
    BallMatrix b = s.basis(p), m = dual_basis(s, p);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            Ball e = dot(m[i], b[j]) - Ball::from_long(i == j, p);
            EXPECT_TRUE(detail::below_pow2(e, -100)) << i << j;
        }
    // dual of dual is the original
    BallMatrix back = dual_basis(m);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            EXPECT_TRUE(detail::below_pow2(back[i][j] - b[i][j], -100));
}

TEST(Closure, QuadraticExamples) {
    auto k = sqrt2();
    LogLattice l = unit_log_lattice(verify_units(k, {el(k, {3, 2})}));
    ClosureReport zero = closure(l, {{q(k, 1)}});
    EXPECT_EQ(zero.dim, 0u);
    EXPECT_FALSE(zero.dense);
    EXPECT_EQ(zero.kernel_chars, IntMatrix::identity(1));
    EXPECT_EQ(zero.status, RelationStatus::VerifiedExact);

    ClosureReport unit = closure(l, {{el(k, {3, 2})}});
    EXPECT_EQ(unit.dim, 0u);
    EXPECT_EQ(unit.status, RelationStatus::VerifiedExact);

    // 17 - 12 sqrt2 = (3 + 2 sqrt2)^-2 and its negative: still in Gamma up to torsion
    ClosureReport neg = closure(l, {{el(k, {-17, 12})}});
    EXPECT_EQ(neg.dim, 0u);
    EXPECT_EQ(neg.status, RelationStatus::VerifiedExact);

    ClosureReport x = closure(l, {{eleven(k)}});
    EXPECT_EQ(x.dim, 1u);
    EXPECT_TRUE(x.dense);
    EXPECT_EQ(x.status, RelationStatus::NumericOnly);
    EXPECT_EQ(x.dim + x.kernel_chars.rows(), x.n);
    // brute force: x^a = +-eps^b has no solution with 0 < |a| <= 12, |b| <= 12
    FieldElement e = el(k, {3, 2}), y = eleven(k);
    for (long a = 1; a <= 12; ++a)
        for (long b = -12; b <= 12; ++b) {
            FieldElement lhs = y.pow(Integer(a)), rhs = e.pow(Integer(b));
            EXPECT_FALSE(lhs == rhs || lhs == -rhs);
        }
}

TEST(Closure, SplitCounterexample) {
    LogLattice s = split_lattice();
    auto r = rationals();
    TorusPoint w{q(r, 3), q(r, 5), q(r, 1)};
    ClosureReport rep = closure(s, {w});
    EXPECT_EQ(rep.dim, 2u);
    ASSERT_EQ(rep.kernel_chars.rows(), 1u);
    EXPECT_EQ(rep.kernel_chars.row(0), (IntVector{Integer(0), Integer(0), Integer(1)}));
    closure_is_algebraic_split(rep, s);
    EXPECT_EQ(rep.algebraic, Algebraicity::NotAlgebraic);
    EXPECT_EQ(rep.status, RelationStatus::NumericOnly);

    // a point with coordinates in the lattice is trivial; a rational point of
    // the lattice span gives a finite closure
    ClosureReport in = closure(s, {{q(r, 1, 2), q(r, 2), q(r, 15)}});
    EXPECT_EQ(in.dim, 0u);
    EXPECT_EQ(in.status, RelationStatus::VerifiedExact);
    closure_is_algebraic_split(in, s);
    EXPECT_EQ(in.algebraic, Algebraicity::Algebraic);
}

TEST(Closure, MonotoneAndJoin) {
    LogLattice s = split_lattice();
    auto r = rationals();
    std::vector<TorusPoint> pts{{q(r, 3), q(r, 5), q(r, 1)}, {q(r, 1), q(r, 1), q(r, 11)}, {q(r, 13), q(r, 1), q(r, 1)}};
    std::size_t prev = 0;
    std::vector<ClosureReport> singles;
    for (std::size_t i = 1; i <= pts.size(); ++i) {
        std::vector<TorusPoint> sub(pts.begin(), pts.begin() + static_cast<long>(i));
        ClosureReport rep = closure(s, sub);
        EXPECT_GE(rep.dim, prev);
        EXPECT_EQ(rep.dim + rep.kernel_chars.rows(), 3u);
        prev = rep.dim;
        singles.push_back(closure(s, {pts[i - 1]}));
        EXPECT_EQ(join_dim(singles), rep.dim) << i;
    }
    EXPECT_EQ(prev, 3u);
}

TEST(Closure, CubicPointIsDense) {
    auto k = cyclic_cubic();
    FieldElement x = cubic_point(k);
    ASSERT_EQ(norm(x), 1);
    EXPECT_FALSE(is_unit(x));
    LogLattice l = unit_log_lattice(norm_one_subgroup(cubic_units(k)));
    ClosureReport rep = closure(l, {{x}});
    EXPECT_EQ(rep.dim, 2u);
    EXPECT_TRUE(rep.dense);
    // a unit of norm one sits in Gamma
    ClosureReport u = closure(l, {{el(k, {0, 1})}});
    EXPECT_EQ(u.dim, 0u);
    EXPECT_EQ(u.status, RelationStatus::VerifiedExact);
}

TEST(Lemma1c, Rational) {
    std::vector<RatVector> z{{Rational(1)}};
    IntMatrix none(0, 1);
    EXPECT_EQ(lemma1c_determinant_check(z, {make_rational(1, 2)}, Integer(2), {Integer(-1)}, none), Sign::Zero);
    EXPECT_EQ(lemma1c_determinant_check(z, {make_rational(1, 2)}, Integer(1), {Integer(0)}, none), Sign::Positive);
    EXPECT_THROW(lemma1c_determinant_check(z, {make_rational(1, 2)}, Integer(0), {Integer(0)}, none), InputError);
}

TEST(Lemma1c, CubicSweep) {
    auto k = cyclic_cubic();
    FieldElement x = cubic_point(k);
    LogLattice l = unit_log_lattice(norm_one_subgroup(cubic_units(k)));
    ASSERT_TRUE(closure(l, {{x}}).dense);
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> h(-10, 10);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        long r = h(rng);
        if (r == 0)
            continue;
        IntVector lam{Integer(h(rng)), Integer(h(rng))};
        IntMatrix ell(1, 2);
        ell(0, 0) = h(rng);
        ell(0, 1) = h(rng);
        if (ell(0, 0) == 0 && ell(0, 1) == 0)
            continue;
        Sign s = lemma1c_determinant_check(l, {x}, Integer(r), lam, ell);
        EXPECT_TRUE(s == Sign::Positive || s == Sign::Negative);
        ++checked;
    }
    EXPECT_GT(checked, 20);
}

TEST(Conjecture2, Examples) {
    auto k = sqrt2();
    UnitSystem u = verify_units(k, {el(k, {1, 1})});
    TorusSpec s = norm_one_torus(k);
    Conjecture2Report a = conjecture2_test(s, {{el(k, {3, 2})}}, u);
    EXPECT_EQ(a.euclidean_dim, 0u);
    EXPECT_EQ(a.zariski_dim, 0u);
    EXPECT_EQ(a.verdict, Conjecture2Verdict::Consistent);
    Conjecture2Report b = conjecture2_test(s, {{eleven(k)}}, u);
    EXPECT_EQ(b.euclidean_dim, 1u);
    EXPECT_EQ(b.zariski_dim, 1u);
    EXPECT_EQ(b.euclidean.status, RelationStatus::NumericOnly);
    EXPECT_EQ(b.euclidean.algebraic, Algebraicity::Algebraic);
    EXPECT_EQ(b.verdict, Conjecture2Verdict::Consistent);

    auto c = cyclic_cubic();
    Conjecture2Report d = conjecture2_test(norm_one_torus(c), {{cubic_point(c)}}, cubic_units(c));
    EXPECT_EQ(d.euclidean_dim, 2u);
    EXPECT_EQ(d.zariski_dim, 2u);
    EXPECT_EQ(d.verdict, Conjecture2Verdict::Consistent);

    // product of two copies: (x, x) lies on the diagonal subtorus
    TorusSpec p = product({norm_one_torus(k), norm_one_torus(k)});
    Conjecture2Report e = conjecture2_test(p, {{eleven(k), eleven(k)}}, u);
    EXPECT_EQ(e.zariski_dim, 1u);
    EXPECT_EQ(e.euclidean_dim, 1u);
    EXPECT_EQ(e.euclidean.algebraic, Algebraicity::Algebraic);
    EXPECT_THROW(conjecture2_test(restriction_torus(k), {{eleven(k)}}, u), InputError);
}
