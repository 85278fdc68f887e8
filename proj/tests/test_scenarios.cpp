#include "toral/scenarios/scenarios.hpp"

#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <cmath>

using namespace toral;

namespace {

using Dec = boost::multiprecision::cpp_dec_float_50;

IntPoly ip(std::initializer_list<long> c) {
    std::vector<Integer> v;
    for (long x : c)
        v.emplace_back(x);
    return IntPoly(v);
}

Field cyclic_cubic() { return make_field(ip({-1, -3, 0, 1})); }

std::vector<std::vector<Rational>> mat(std::initializer_list<std::initializer_list<long>> rows) {
    std::vector<std::vector<Rational>> out;
    for (const auto& r : rows) {
        std::vector<Rational> row;
        for (long x : r)
            row.emplace_back(x);
        out.push_back(row);
    }
    return out;
}

} // namespace

TEST(Counterexample, Conclusions) {
    CounterexampleReport rep = run_counterexample();
    EXPECT_TRUE(rep.skew_det_zero);
    EXPECT_EQ(rep.det2_sign, Sign::Positive);
    EXPECT_TRUE(rep.det2.rad_below_pow2(-100));
    // independent oracle: log2 * (log2^2 + log5 * log7) in 50-digit decimal arithmetic
    Dec l2 = log(Dec(2)), l5 = log(Dec(5)), l7 = log(Dec(7));
    Dec want = l2 * (l2 * l2 + l5 * l7);
    Dec got(rep.det2.mid_string());
    EXPECT_LT(abs(got - want), Dec("1e-20"));
    EXPECT_NEAR(rep.det2.mid_double(), 2.5040, 1e-3);
    EXPECT_EQ(rep.closure.dim, 2u);
    EXPECT_EQ(rep.closure.dim + rep.closure.kernel_chars.rows(), 3u);
    EXPECT_EQ(rep.closure.algebraic, Algebraicity::NotAlgebraic);
    EXPECT_EQ(rep.closure.status, RelationStatus::NumericOnly);
    EXPECT_EQ(rep.coordinate_rank, 2u);
    EXPECT_TRUE(rep.expected);
}

TEST(Example2, Points) {
    auto k = cyclic_cubic();
    FieldElement t = FieldElement::generator(k);
    Example2Report unit = run_example2(k, t);
    EXPECT_EQ(unit.closure.dim, 0u);
    Example2Report one = run_example2(k, FieldElement::from_rational(k, 1));
    EXPECT_EQ(one.closure.dim, 0u);

    FieldElement x = example2_default_point(k);
    EXPECT_EQ(norm(x), 1);
    Example2Report d = run_example2(k, x);
    EXPECT_TRUE(d.closure.dense);
    EXPECT_EQ(d.closure.status, RelationStatus::NumericOnly);
    EXPECT_TRUE(d.rational_multiple.relations.empty());
    for (const auto& det : d.four_exp_dets)
        EXPECT_NE(sign_certified(det), Sign::Unknown);
    // brute force: no x^a eps1^b eps2^c = +-1 with 0 < a <= 4 and |b|,|c| <= 4
    const auto& u = d.units.gens;
    for (long a = 1; a <= 4; ++a)
        for (long b = -4; b <= 4; ++b)
            for (long c = -4; c <= 4; ++c) {
                FieldElement p = x.pow(Integer(a)) * u[0].pow(Integer(b)) * u[1].pow(Integer(c));
                EXPECT_FALSE(p.is_one() || p.is_minus_one());
            }
    EXPECT_THROW(run_example2(k, FieldElement(k, {Rational(3), Rational(-1), Rational(0)})), InputError);
}

TEST(FourExp, Examples) {
    FourExpReport a = four_exp_matrix_check(mat({{2, 3}, {3, 2}}));
    EXPECT_TRUE(a.preconditions);
    EXPECT_EQ(a.det_sign, Sign::Negative);
    double l2 = std::log(2.0), l3 = std::log(3.0);
    EXPECT_NEAR(a.det->mid_double(), l2 * l2 - l3 * l3, 1e-12);

    FourExpReport b = four_exp_matrix_check(mat({{2, 4}, {3, 9}}));
    EXPECT_FALSE(b.preconditions);
    ASSERT_EQ(b.col_relations.relations.size(), 1u);
    EXPECT_EQ(b.col_relations.relations[0], (IntVector{Integer(2), Integer(-1)}));
    EXPECT_EQ(b.col_relations.status, RelationStatus::VerifiedExact);
    EXPECT_TRUE(b.row_relations.relations.empty());

    FourExpReport c = four_exp_matrix_check(mat({{2, 3, 5}, {3, 5, 2}}));
    EXPECT_TRUE(c.preconditions);
    EXPECT_EQ(c.certified_rank, 2u);

    EXPECT_THROW(four_exp_matrix_check(mat({{2, -3}, {3, 2}})), InputError);
    EXPECT_THROW(four_exp_matrix_check(mat({{2}, {3}})), InputError);
}

TEST(Scenarios, Deterministic) {
    CounterexampleReport a = run_counterexample(), b = run_counterexample();
    EXPECT_EQ(a.det2.mid_string(), b.det2.mid_string());
    EXPECT_EQ(a.det2.rad_string(), b.det2.rad_string());
    EXPECT_EQ(a.closure.kernel_chars, b.closure.kernel_chars);
    EXPECT_EQ(a.conclusion, b.conclusion);
}
