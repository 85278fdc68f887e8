#include "toral/arith/ball.hpp"
#include "toral/arith/ball_matrix.hpp"
#include "toral/arith/roots.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <gtest/gtest.h>

#include <random>

using namespace toral;
using Dec = boost::multiprecision::number<boost::multiprecision::cpp_dec_float<120>>;

namespace {

// Decimal oracle evaluated with an independent arbitrary precision library.
Rational dec_to_rational(const Dec& x) {
    std::string s = x.str(110, std::ios_base::scientific);
    mpf_class f(s, 512);
    return Rational(f);
}

Dec dlog(long v) { return boost::multiprecision::log(Dec(v)); }

// log 2 = sum_{k>=1} 1/(k 2^k); tail after N terms is below 1/(N 2^N).
std::pair<Rational, Rational> log2_series(int terms) {
    Rational s = 0;
    for (int k = 1; k <= terms; ++k)
        s += Rational(1) / (Rational(k) * Rational(Integer(1) << k));
    Rational tail = Rational(1) / (Rational(terms) * Rational(Integer(1) << terms));
    return {s, tail};
}

BallMatrix log_matrix(const std::vector<std::vector<long>>& entries, prec_t prec) {
    // entries: positive integer v -> log v, negative -> -log |v|, 0 -> 0
    BallMatrix m;
    for (const auto& row : entries) {
        BallVector r;
        for (long v : row) {
            if (v == 0)
                r.emplace_back(prec);
            else if (v > 0)
                r.push_back(log_rational(Rational(v), prec));
            else
                r.push_back(-log_rational(Rational(-v), prec));
        }
        m.push_back(std::move(r));
    }
    return m;
}

} // namespace

TEST(BallLog, LogOfOneIsZero) {
    Ball r = log(Ball::from_long(1, 128));
    EXPECT_TRUE(r.contains(Rational(0)));
    EXPECT_TRUE(r.is_exact());
}

TEST(BallLog, LogTwoMatchesSeriesOracle) {
    Ball r = log(Ball::from_long(2, 64));
    auto [s, tail] = log2_series(120);
    // the true value lies in [s, s + tail]; the ball must contain it
    EXPECT_LE(abs(r.mid_rational() - s), r.rad_rational() + tail);
    EXPECT_LT(r.rad_double(), 1e-18);
}

TEST(BallLog, ZeroStraddlingBallIsDomainError) {
    EXPECT_THROW(log(Ball::from_double(0, 0.5, 64)), DomainError);
    EXPECT_THROW(log(Ball::from_long(-2, 64)), DomainError);
}

TEST(SignCertified, Examples) {
    EXPECT_EQ(sign_certified(Ball::from_double(1, 0.5, 64)), Sign::Positive);
    EXPECT_EQ(sign_certified(Ball::from_double(0, 0.1, 64)), Sign::Unknown);
    EXPECT_EQ(sign_certified(Ball::from_double(-3, 1, 64)), Sign::Negative);
    EXPECT_EQ(sign_certified(Ball::from_long(0, 64)), Sign::Unknown);
}

TEST(BallDet, IdentityIsOne) {
    BallMatrix id(3, BallVector(3, Ball(128)));
    for (int i = 0; i < 3; ++i)
        id[i][i] = Ball::from_long(1, 128);
    Ball d = ball_det(id);
    EXPECT_TRUE(d.contains(Rational(1)));
    EXPECT_TRUE(d.is_exact());
}

TEST(BallDet, SecondCounterexampleMatrixAgainstClosedForm) {
    BallMatrix m = log_matrix({{0, 2, 3}, {-2, 0, 5}, {7, 0, 2}}, 256);
    Ball d = ball_det(m);
    Dec expect = dlog(2) * (dlog(2) * dlog(2) + dlog(5) * dlog(7));
    EXPECT_EQ(sign_certified(d), Sign::Positive);
    EXPECT_LT(abs(d.mid_rational() - dec_to_rational(expect)), Rational(1, 1) / Rational(Integer(10) * Integer("1000000000000000000000000000000000000000")));
    EXPECT_TRUE(d.rad_below_pow2(100));
    EXPECT_NEAR(d.mid_double(), 2.5040, 5e-4);
}

TEST(BallDet, SkewMatrixContainsZero) {
    BallMatrix m = log_matrix({{0, 2, 3}, {-2, 0, 5}, {-3, -5, 0}}, 256);
    Ball d = ball_det(m);
    EXPECT_EQ(sign_certified(d), Sign::Unknown);
    EXPECT_TRUE(det_exact_zero_by_skew(m, true));
}

TEST(SkewZero, Errors) {
    BallMatrix two = log_matrix({{0, 2}, {-2, 0}}, 64);
    EXPECT_THROW(det_exact_zero_by_skew(two, true), StructureError);
    BallMatrix m = log_matrix({{0, 2, 3}, {-2, 0, 5}, {7, 0, 2}}, 64);
    EXPECT_THROW(det_exact_zero_by_skew(m, false), StructureError);
    EXPECT_THROW(det_exact_zero_by_skew(m, true), StructureError);
}

TEST(RealRoots, SqrtTwo) {
    IntPoly f{-2, 0, 1};
    auto roots = isolate_real_roots(f);
    ASSERT_EQ(roots.size(), 2u);
    Rational s(1414213562, 1000000000);
    EXPECT_TRUE(roots[0].lo < -s && -s - Rational(1, 1000000) < roots[0].hi);
    Ball b = real_root_ball(f, roots[1], 256);
    // oracle: s^2 < 2 < (s + 1e-9)^2 brackets sqrt 2; the ball must meet the bracket
    EXPECT_TRUE(b.mid_rational() > s && b.mid_rational() < s + Rational(1, 1000000000));
    Ball sq = b * b;
    EXPECT_TRUE(sq.contains(Rational(2)));
    EXPECT_TRUE(b.rad_below_pow2(250));
}

TEST(RealRoots, NoRealRoots) {
    EXPECT_TRUE(isolate_real_roots(IntPoly{1, 0, 1}).empty());
}

TEST(RealRoots, CyclicCubic) {
    IntPoly f{-1, -3, 0, 1};
    auto roots = isolate_real_roots(f);
    ASSERT_EQ(roots.size(), 3u);
    // oracle: Newton in long double from the stated approximations
    double starts[] = {-1.532, -0.347, 1.879};
    for (int i = 0; i < 3; ++i) {
        long double x = starts[i];
        for (int it = 0; it < 30; ++it)
            x -= (x * x * x - 3 * x - 1) / (3 * x * x - 3);
        Ball b = real_root_ball(f, roots[static_cast<std::size_t>(i)], 128);
        EXPECT_NEAR(b.mid_double(), static_cast<double>(x), 1e-15);
        EXPECT_TRUE(f.eval_ball(b).contains_zero());
    }
}

TEST(RealRoots, Errors) {
    EXPECT_THROW(isolate_real_roots(IntPoly{}), InputError);
    EXPECT_THROW(isolate_real_roots(IntPoly{1, -2, 1}), InputError);
}

TEST(RealRoots, RationalRootsAreExact) {
    // (2t - 1)(t + 3)(t^2 - 5)
    IntPoly f = IntPoly{-1, 2} * IntPoly{3, 1} * IntPoly{-5, 0, 1};
    auto roots = isolate_real_roots(f);
    ASSERT_EQ(roots.size(), 4u);
    int exact = 0;
    for (const auto& r : roots)
        exact += r.is_exact();
    EXPECT_GE(exact, 1);
    for (std::size_t i = 0; i + 1 < roots.size(); ++i)
        EXPECT_LE(roots[i].hi, roots[i + 1].lo); // open intervals may share an endpoint
}

namespace {

// Sturm sequence count of distinct real roots: an independent oracle.
long sturm_count(const IntPoly& f) {
    std::vector<RatPoly> seq{to_rat(f), to_rat(f.derivative())};
    while (!seq.back().is_zero()) {
        RatPoly r = seq[seq.size() - 2] % seq.back();
        seq.push_back(-r);
    }
    seq.pop_back();
    auto variations = [&](int sign_inf) {
        long v = 0;
        int last = 0;
        for (const auto& p : seq) {
            int s = sgn(p.lc());
            if (sign_inf < 0 && p.degree() % 2 == 1)
                s = -s;
            if (s == 0)
                continue;
            if (last && s != last)
                ++v;
            last = s;
        }
        return v;
    };
    return variations(-1) - variations(1);
}

} // namespace

TEST(RealRoots, MatchesSturmCountOnRandomPolynomials) {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> coeff(-20, 20);
    int tested = 0;
    while (tested < 60) {
        std::vector<Integer> c(static_cast<std::size_t>(2 + tested % 5));
        for (auto& x : c)
            x = coeff(rng);
        c.back() = c.back() == 0 ? 1 : c.back();
        IntPoly f(c);
        if (f.degree() < 1 || !is_squarefree(f))
            continue;
        EXPECT_EQ(static_cast<long>(isolate_real_roots(f).size()), sturm_count(f)) << f;
        ++tested;
    }
}

TEST(ComplexRoots, CubeRootOfTwo) {
    IntPoly f{-2, 0, 0, 1};
    CertifiedRoots r = certified_complex_roots(f, 128);
    ASSERT_EQ(r.real.size(), 1u);
    ASSERT_EQ(r.upper.size(), 1u);
    // |z|^3 = 2 for every root
    Ball n2 = r.upper[0].norm2();
    Ball n6 = n2 * n2 * n2;
    EXPECT_TRUE(n6.contains(Rational(4)));
    EXPECT_NEAR(r.upper[0].re.mid_double(), -0.6299605249474366, 1e-14);
}

// Containment: exact results for sampled representatives lie in output balls.
TEST(BallProperties, ContainmentUnderArithmetic) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> num(-1000000, 1000000);
    std::uniform_int_distribution<long> rad(0, 1000);
    for (int trial = 0; trial < 300; ++trial) {
        Rational ma(num(rng), 1000), mb(num(rng), 1000);
        Rational ra(rad(rng), 1000000), rb(rad(rng), 1000000);
        Ball a = Ball::from_rational(ma, 80), b = Ball::from_rational(mb, 80);
        a.add_error(Ball::from_rational(ra, 64));
        b.add_error(Ball::from_rational(rb, 64));
        for (int s = 0; s < 4; ++s) {
            Rational ta = ma + ra * Rational(2 * s - 3, 3), tb = mb - rb * Rational(s, 3);
            EXPECT_TRUE((a + b).contains(ta + tb));
            EXPECT_TRUE((a - b).contains(ta - tb));
            EXPECT_TRUE((a * b).contains(ta * tb));
            if (!b.contains_zero()) {
                EXPECT_TRUE((a / b).contains(ta / tb));
            }
        }
    }
}

TEST(BallProperties, LogContainmentAgainstIndependentOracle) {
    for (long v = 2; v < 60; v += 3) {
        Ball x = Ball::from_long(v, 200);
        x.add_error_pow2(-40);
        Ball l = log(x);
        EXPECT_LE(abs(l.mid_rational() - dec_to_rational(dlog(v))), l.rad_rational());
    }
}

TEST(BallProperties, RefinementShrinksRadiiAndKeepsSigns) {
    for (prec_t p : {64, 128, 256}) {
        Ball lo = ball_det(log_matrix({{0, 2, 3}, {-2, 0, 5}, {7, 0, 2}}, p));
        Ball hi = ball_det(log_matrix({{0, 2, 3}, {-2, 0, 5}, {7, 0, 2}}, 2 * p));
        EXPECT_LE(hi.rad_double(), lo.rad_double() * 1.0001);
        EXPECT_EQ(sign_certified(lo), sign_certified(hi));
        EXPECT_TRUE(lo.overlaps(hi));
    }
}

TEST(BallSerialization, StringsRoundTripToContainingBall) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        prec_t p = 64 + 64 * (i % 5);
        Ball x = log_rational(Rational(static_cast<long>(rng() % 100000 + 2), static_cast<long>(rng() % 997 + 1)), p);
        if (i % 3 == 0)
            x = -x;
        Ball y = Ball::from_strings(x.mid_string(), x.rad_string(), p);
        EXPECT_TRUE(y.contains(x)) << x.mid_string() << " " << x.rad_string();
    }
    Ball z = Ball::from_strings("0", "0", 64);
    EXPECT_TRUE(z.contains(Rational(0)));
    EXPECT_THROW(Ball::from_strings("1.2x", "0", 64), InputError);
}
