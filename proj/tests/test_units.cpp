#include "toral/units/units.hpp"

#include <gtest/gtest.h>

#include <cmath>

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

// Smallest unit > 1 of Z[sqrt D] by brute force: the least b >= 1 with
// D b^2 +- 1 a square.
std::pair<long, long> brute_unit(long d) {
    for (long b = 1; b < 100000; ++b)
        for (long s : {-1L, 1L}) {
            long n = d * b * b + s;
            long a = std::lround(std::sqrt(static_cast<double>(n)));
            for (long x = a - 1; x <= a + 1; ++x)
                if (x > 0 && x * x == n)
                    return {x, b};
        }
    return {0, 0};
}

// |det| of the log matrix of two units of a totally real cubic, in long double.
long double log_det(const FieldElement& u, const FieldElement& v) {
    long double m[2][2];
    const FieldElement* us[2] = {&u, &v};
    for (int r = 0; r < 2; ++r)
        for (int j = 0; j < 2; ++j)
            m[r][j] = std::log(std::fabs(static_cast<long double>(embed_real(*us[r], j, 128).mid_double())));
    return std::fabs(m[0][0] * m[1][1] - m[0][1] * m[1][0]);
}

} // namespace

TEST(Quadratic, SmallCases) {
    auto k2 = make_field(ip({-2, 0, 1}));
    FieldElement e2 = quadratic_fundamental_unit(k2);
    EXPECT_EQ(e2, el(k2, {1, 1}));
    EXPECT_EQ(norm(e2), -1);
    EXPECT_TRUE((e2 * el(k2, {-1, 1})).is_one());

    auto k3 = make_field(ip({-3, 0, 1}));
    FieldElement e3 = quadratic_fundamental_unit(k3);
    EXPECT_EQ(e3, el(k3, {2, 1}));
    EXPECT_EQ(norm(e3), 1);

    auto ki = make_field(ip({1, 0, 1}));
    EXPECT_THROW(quadratic_fundamental_unit(ki), InputError);
}

TEST(Quadratic, MatchesBruteForceUpTo50) {
    for (long d = 2; d <= 50; ++d) {
        long r = std::lround(std::sqrt(static_cast<double>(d)));
        if (r * r == d)
            continue;
        auto k = make_field(ip({-d, 0, 1}));
        FieldElement e = quadratic_fundamental_unit(k);
        auto [a, b] = brute_unit(d);
        ASSERT_GT(b, 0) << d;
        EXPECT_EQ(e, el(k, {a, b})) << "D=" << d;
        EXPECT_TRUE(is_unit(e));
    }
}

TEST(Cubic, SimplestCubicUnits) {
    auto k = make_field(ip({-1, -3, 0, 1}));
    // exact norms of t and t+1 from f: N(t) = -f(0), N(t+1) = -f(-1)
    EXPECT_EQ(norm(el(k, {0, 1})), 1);
    EXPECT_EQ(norm(el(k, {1, 1})), -1);

    UnitSystem u = cubic_unit_search(k, 5.0);
    ASSERT_EQ(u.gens.size(), 2u);
    EXPECT_EQ(u.maximality, Maximality::Unverified);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_TRUE(is_unit(u.gens[i]));
        EXPECT_EQ(Rational(u.norms[i]), norm(u.gens[i]));
    }
    // same lattice as <t, t+1>: equal covolume
    long double want = log_det(el(k, {0, 1}), el(k, {1, 1}));
    long double got = log_det(u.gens[0], u.gens[1]);
    EXPECT_NEAR(static_cast<double>(got), static_cast<double>(want), 1e-9);
    EXPECT_NO_THROW(verify_units(k, u.gens));
}

TEST(Cubic, TinyBoxIsEmpty) {
    auto k = make_field(ip({-1, -3, 0, 1}));
    EXPECT_THROW(cubic_unit_search(k, 0.01), SearchEmpty);
}

TEST(Cubic, RejectsNonTotallyReal) {
    auto k = make_field(ip({-2, 0, 0, 1}));
    EXPECT_THROW(cubic_unit_search(k, 3.0), InputError);
}

TEST(Verify, Cases) {
    auto k2 = make_field(ip({-2, 0, 1}));
    EXPECT_NO_THROW(verify_units(k2, {el(k2, {1, 1})}));
    EXPECT_THROW(verify_units(k2, {el(k2, {3, 1})}), NotUnitError);
    EXPECT_THROW(verify_units(k2, {}), RankError);
    auto k = make_field(ip({-1, -3, 0, 1}));
    EXPECT_THROW(verify_units(k, {el(k, {0, 1})}), RankError);
    FieldElement t = el(k, {0, 1});
    EXPECT_THROW(verify_units(k, {t, t * t}), RankError);
    EXPECT_NO_THROW(verify_units(k, {t, el(k, {1, 1})}));
    // imaginary quadratic: rank 0
    auto ki = make_field(ip({1, 0, 1}));
    EXPECT_NO_THROW(verify_units(ki, {}));
}

TEST(NormOne, Cases) {
    auto k2 = make_field(ip({-2, 0, 1}));
    UnitSystem u = norm_one_subgroup(verify_units(k2, {el(k2, {1, 1})}));
    ASSERT_EQ(u.gens.size(), 1u);
    EXPECT_EQ(u.gens[0], el(k2, {3, 2}));

    auto k3 = make_field(ip({-3, 0, 1}));
    UnitSystem v = norm_one_subgroup(verify_units(k3, {el(k3, {2, 1})}));
    EXPECT_EQ(v.gens[0], el(k3, {2, 1}));

    // odd degree: -1 has norm -1, so a norm -1 unit is replaced by its negative
    auto k = make_field(ip({-1, -3, 0, 1}));
    FieldElement t = el(k, {0, 1}), t1 = el(k, {1, 1});
    UnitSystem w = norm_one_subgroup(verify_units(k, {t, t1}));
    EXPECT_EQ(w.gens[0], t);
    EXPECT_EQ(w.gens[1], -t1);
    for (const auto& g : w.gens)
        EXPECT_EQ(norm(g), 1);

    // even degree with two norm -1 generators: the second is multiplied by the first
    FieldElement e = el(k2, {1, 1});
    UnitSystem two{k2, {e, e.pow(Integer(3))}, Maximality::Unverified, {-1, -1}};
    UnitSystem x = norm_one_subgroup(two);
    EXPECT_EQ(x.gens[0], e * e);
    EXPECT_EQ(x.gens[1], e.pow(Integer(4)));
}
