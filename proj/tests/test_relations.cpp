#include "toral/relations/lll.hpp"
#include "toral/relations/normal_form.hpp"
#include "toral/relations/relations.hpp"

#include "support/planted.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace toral;

namespace {

IntVector iv(std::initializer_list<long> xs) {
    IntVector v;
    for (long x : xs)
        v.emplace_back(x);
    return v;
}

ScalarSource logs_of(std::vector<long> vs) {
    return [vs](prec_t p) {
        BallVector out;
        for (long v : vs)
            out.push_back(log_rational(v, p));
        return out;
    };
}

VectorSource rational_matrix(std::vector<std::vector<Rational>> m) {
    return [m](prec_t p) {
        BallMatrix out;
        for (const auto& row : m)
            out.push_back(to_balls(row, p));
        return out;
    };
}

// Shortest nonzero vector of a 2D lattice by brute force over small coefficients.
Integer shortest_norm2(const IntMatrix& b, long box) {
    Integer best = -1;
    for (long i = -box; i <= box; ++i)
        for (long j = -box; j <= box; ++j) {
            if (i == 0 && j == 0)
                continue;
            Integer x = i * b(0, 0) + j * b(1, 0), y = i * b(0, 1) + j * b(1, 1);
            Integer n = x * x + y * y;
            if (best < 0 || n < best)
                best = n;
        }
    return best;
}

// Lovasz condition checked independently with rational Gram-Schmidt.
bool satisfies_lovasz(const IntMatrix& b, const Rational& delta) {
    std::size_t n = b.rows(), m = b.cols();
    std::vector<RatVector> bs(n, RatVector(m));
    std::vector<Rational> nb(n);
    std::vector<std::vector<Rational>> mu(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < m; ++k)
            bs[i][k] = b(i, k);
        for (std::size_t j = 0; j < i; ++j) {
            Rational d = 0;
            for (std::size_t k = 0; k < m; ++k)
                d += Rational(b(i, k)) * bs[j][k];
            mu[i][j] = d / nb[j];
            for (std::size_t k = 0; k < m; ++k)
                bs[i][k] -= mu[i][j] * bs[j][k];
        }
        nb[i] = 0;
        for (const auto& x : bs[i])
            nb[i] += x * x;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (abs(mu[i][j]) > Rational(1, 2))
                return false;
    for (std::size_t i = 1; i < n; ++i)
        if (nb[i] < (delta - mu[i][i - 1] * mu[i][i - 1]) * nb[i - 1])
            return false;
    return true;
}

} // namespace

TEST(Lll, IdentityIsFixed) {
    auto r = lll_reduce(IntMatrix::identity(3));
    EXPECT_EQ(r.reduced, IntMatrix::identity(3));
    EXPECT_EQ(r.transform, IntMatrix::identity(3));
}

TEST(Lll, SkewedPlaneBasisAgainstBruteForce) {
    IntMatrix b{{1, 1000000}, {0, 1}};
    auto r = lll_reduce(b);
    EXPECT_EQ(r.transform * b, r.reduced);
    EXPECT_TRUE(is_unimodular(r.transform));
    EXPECT_EQ(abs(determinant(r.reduced)), abs(determinant(b)));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            EXPECT_LE(abs(r.reduced(i, j)), 1000000);
    Integer first = dot(r.reduced.row(0), r.reduced.row(0));
    EXPECT_EQ(first, shortest_norm2(r.reduced, 30));
}

TEST(Lll, DependentRowsAreRejected) {
    EXPECT_THROW(lll_reduce(IntMatrix{{2, 0}, {1, 0}}), InputError);
    EXPECT_THROW(lll_reduce(IntMatrix{{1, 2}, {0, 1}}, Rational(1, 4)), InputError);
}

TEST(Lll, RandomBasesSatisfyLovaszAndStayUnimodular) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> d(-1000, 1000);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n = 2 + trial % 4;
        IntMatrix b(n, n + 1);
        do {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j <= n; ++j)
                    b(i, j) = d(rng);
        } while (rank(b) != n);
        for (Rational delta : {Rational(3, 4), Rational(99, 100)}) {
            auto r = lll_reduce(b, delta);
            EXPECT_EQ(r.transform * b, r.reduced);
            EXPECT_TRUE(is_unimodular(r.transform));
            EXPECT_TRUE(satisfies_lovasz(r.reduced, delta));
        }
    }
}

TEST(NormalForms, HermiteOfUpperTriangular) {
    IntMatrix m{{2, 4}, {0, 6}};
    EXPECT_EQ(hnf(m), m);
    EXPECT_EQ(hnf(IntMatrix::identity(3)), IntMatrix::identity(3));
    EXPECT_EQ(hnf(IntMatrix(2, 3)), IntMatrix(2, 3));
}

TEST(NormalForms, SmithOfSmallMatrix) {
    IntMatrix m{{2, 4}, {0, 6}};
    auto s = snf(m);
    EXPECT_EQ(s.d, (IntMatrix{{2, 0}, {0, 6}}));
    EXPECT_EQ(s.left * m * s.right, s.d);
    EXPECT_TRUE(is_unimodular(s.left));
    EXPECT_TRUE(is_unimodular(s.right));
    EXPECT_EQ(snf(IntMatrix(2, 2)).d, IntMatrix(2, 2));
    EXPECT_EQ(snf(IntMatrix::identity(2)).d, IntMatrix::identity(2));
}

// Elementary divisors are determined by gcds of k-minors; the 2x2 case is
// checked directly: d1 = gcd of entries, d1*d2 = |det|.
TEST(NormalForms, SmithMatchesMinorGcds) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> d(-30, 30);
    for (int t = 0; t < 200; ++t) {
        IntMatrix m{{d(rng), d(rng)}, {d(rng), d(rng)}};
        auto s = snf(m);
        Integer g = 0;
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                g = gcd(g, m(i, j));
        EXPECT_EQ(s.d(0, 0), g);
        EXPECT_EQ(s.d(0, 0) * s.d(1, 1), abs(determinant(m)));
        EXPECT_EQ(s.d(0, 1), 0);
        EXPECT_EQ(s.d(1, 0), 0);
    }
}

TEST(NormalForms, RandomTransformsAreUnimodularAndDivisorsChain) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> d(-9, 9);
    for (int t = 0; t < 60; ++t) {
        std::size_t r = 1 + t % 4, c = 1 + (t / 4) % 5;
        IntMatrix m(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                m(i, j) = d(rng);
        auto h = hnf_with_transform(m);
        EXPECT_TRUE(is_unimodular(h.transform));
        EXPECT_EQ(h.transform * m, h.h);
        EXPECT_EQ(h.rank, rank(m));
        auto s = snf(m);
        EXPECT_TRUE(is_unimodular(s.left));
        EXPECT_TRUE(is_unimodular(s.right));
        EXPECT_EQ(s.left * m * s.right, s.d);
        auto dv = s.divisors();
        EXPECT_EQ(dv.size(), rank(m));
        for (std::size_t i = 0; i + 1 < dv.size(); ++i)
            EXPECT_EQ(dv[i + 1] % dv[i], 0);
    }
}

TEST(Saturate, Examples) {
    EXPECT_EQ(saturate(IntMatrix{{2, 0}}), (IntMatrix{{1, 0}}));
    EXPECT_EQ(saturate(IntMatrix{{2, 4}}), (IntMatrix{{1, 2}}));
    IntMatrix s{{1, 2, 3}, {0, 1, 1}};
    EXPECT_EQ(saturate(s), lattice_basis(s));
    EXPECT_EQ(saturate(IntMatrix(0, 3)).rows(), 0u);
    EXPECT_EQ(saturate(IntMatrix{{3, 0}, {0, 5}}), IntMatrix::identity(2));
}

TEST(Saturate, IdempotentAndRankPreserving) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long> d(-6, 6);
    for (int t = 0; t < 60; ++t) {
        std::size_t r = 1 + t % 3, n = r + 1 + t % 2;
        IntMatrix m(r, n);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < n; ++j)
                m(i, j) = d(rng);
        IntMatrix s = saturate(m);
        EXPECT_EQ(s.rows(), rank(m));
        EXPECT_EQ(saturate(s), s);
        EXPECT_EQ(saturation_index(s), 1);
        // original rows lie in the saturation
        IntMatrix both = s;
        for (std::size_t i = 0; i < r; ++i)
            both.append_row(m.row(i));
        EXPECT_EQ(rank(both), s.rows());
    }
}

TEST(IntegerRelations, LogTwoAndLogFour) {
    auto r = find_integer_relations(logs_of({2, 4}));
    ASSERT_EQ(r.relations.size(), 1u);
    EXPECT_EQ(r.relations[0], iv({2, -1}));
    EXPECT_TRUE(r.residuals[0][0].contains_zero());
    EXPECT_EQ(r.status, RelationStatus::NumericOnly);
}

TEST(IntegerRelations, VerifierUpgradesStatus) {
    RelationOptions o;
    o.verifier = [](const IntVector& c) {
        // 2^c0 * 4^c1 == 1 exactly
        Rational v = 1;
        Rational two = 2, four = 4;
        auto pw = [](Rational b, long e) {
            Rational out = 1;
            for (long i = 0; i < std::abs(e); ++i)
                out *= b;
            return e < 0 ? 1 / out : out;
        };
        v = pw(two, c[0].get_si()) * pw(four, c[1].get_si());
        return v == 1 ? Verdict::Verified : Verdict::Refuted;
    };
    auto r = find_integer_relations(logs_of({2, 4}), o);
    EXPECT_EQ(r.status, RelationStatus::VerifiedExact);
}

TEST(IntegerRelations, LogTwoAndLogThreeHaveNone) {
    auto r = find_integer_relations(logs_of({2, 3}));
    EXPECT_TRUE(r.relations.empty());
    EXPECT_EQ(r.status, RelationStatus::NumericOnly);
    // brute force: 2^a 3^b = 1 has no nonzero solution with |a|, |b| <= 50
    auto pw = [](long base, long e) {
        Integer out;
        Integer b = base;
        mpz_pow_ui(out.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(std::max(e, 0L)));
        return out;
    };
    int hits = 0;
    for (long a = -50; a <= 50; ++a)
        for (long b = -50; b <= 50; ++b)
            if ((a || b) && pw(2, a) * pw(3, b) == pw(2, -a) * pw(3, -b))
                ++hits;
    EXPECT_EQ(hits, 0);
}

TEST(IntegerRelations, SingleNonzeroValue) {
    auto r = find_integer_relations([](prec_t p) { return BallVector{Ball::from_long(1, p)}; });
    EXPECT_TRUE(r.relations.empty());
    EXPECT_EQ(r.status, RelationStatus::NumericOnly);
}

TEST(IntegerRelations, HeightBoundExcludesLargeRelations) {
    RelationOptions o;
    o.height = 5;
    // 7 log 2 - log 128 = 0 needs height 7
    auto r = find_integer_relations(logs_of({2, 128}), o);
    EXPECT_TRUE(r.relations.empty());
    o.height = 7;
    r = find_integer_relations(logs_of({2, 128}), o);
    ASSERT_EQ(r.relations.size(), 1u);
    EXPECT_EQ(r.relations[0], iv({7, -1}));
}

TEST(IntegerRelations, RefutingVerifierExhaustsPrecision) {
    RelationOptions o;
    o.max_prec = 1024;
    o.verifier = [](const IntVector&) { return Verdict::Refuted; };
    EXPECT_THROW(find_integer_relations(logs_of({2, 4}), o), PrecisionExhausted);
}

TEST(IntegerRelations, PlantedLatticesMatchExhaustiveOracle) {
    std::mt19937_64 rng(2024);
    int compared = 0;
    for (int t = 0; t < 60; ++t) {
        std::size_t n = 2 + t % 3;
        std::size_t r = t % static_cast<int>(n);
        auto in = planted::make(rng, n, r, 3);
        long box = n == 4 ? 8 : 20;
        auto oracle = planted::exhaustive(in, box);
        IntMatrix expected = planted::lattice(oracle, n);
        if (expected.rows() != r)
            continue; // box too small to span the planted lattice
        ++compared;
        auto found = find_integer_relations(planted::source(in));
        for (const auto& c : found.relations)
            EXPECT_TRUE(planted::is_exact_relation(in, c));
        EXPECT_EQ(planted::lattice(found.relations, n), expected) << "trial " << t;
    }
    EXPECT_GT(compared, 40);
}

TEST(SimultaneousRelations, Half) {
    auto r = simultaneous_relations(rational_matrix({{Rational(1, 2)}}));
    ASSERT_EQ(r.relations.size(), 1u);
    EXPECT_EQ(r.relations[0], iv({2, 1}));
}

TEST(SimultaneousRelations, IdentityMatrix) {
    auto r = simultaneous_relations(rational_matrix({{1, 0}, {0, 1}}));
    ASSERT_EQ(r.relations.size(), 2u);
    EXPECT_EQ(r.relations[0], iv({0, 1, 0, 1}));
    EXPECT_EQ(r.relations[1], iv({1, 0, 1, 0}));
}

TEST(SimultaneousRelations, LogsOfPrimesHaveNone) {
    auto r = simultaneous_relations([](prec_t p) {
        return BallMatrix{{log_rational(2, p), log_rational(3, p), log_rational(5, p)}};
    });
    EXPECT_TRUE(r.relations.empty());
    EXPECT_EQ(r.status, RelationStatus::NumericOnly);
}

TEST(RationalSpan, Examples) {
    auto a = rational_vectors_in_span(rational_matrix({{1, 0, 0}}));
    ASSERT_EQ(a.relations.size(), 1u);
    EXPECT_EQ(a.relations[0], iv({1, 0, 0}));

    auto b = rational_vectors_in_span([](prec_t p) {
        return BallMatrix{{log_rational(2, p), log_rational(3, p), Ball::from_long(0, p)}};
    });
    EXPECT_TRUE(b.relations.empty());
    EXPECT_EQ(b.status, RelationStatus::NumericOnly);

    auto c = rational_vectors_in_span(rational_matrix({{1, 1, 0}, {0, 0, 1}}));
    ASSERT_EQ(c.relations.size(), 2u);
    EXPECT_EQ(c.relations[0], iv({0, 0, 1}));
    EXPECT_EQ(c.relations[1], iv({1, 1, 0}));
}

TEST(RationalSpan, IrrationalPlaneContainingOneRationalLine) {
    // a (1, sqrt2, 0) + b (1, 0, 1) is rational only when a = 0
    auto r = rational_vectors_in_span([](prec_t p) {
        return BallMatrix{{Ball::from_long(1, p), sqrt(Ball::from_long(2, p)), Ball::from_long(0, p)},
                          {Ball::from_long(1, p), Ball::from_long(0, p), Ball::from_long(1, p)}};
    });
    ASSERT_EQ(r.relations.size(), 1u);
    EXPECT_EQ(r.relations[0], iv({1, 0, 1}));
}
