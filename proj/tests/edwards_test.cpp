#include <gtest/gtest.h>

#include "edwardsg2/edwards.hpp"

using namespace edwardsg2;
using namespace edwardsg2::edwards;

namespace {

Fp first_nonsquare(const PrimeField& k) {
    std::int64_t v = 2;
    while (legendre(k.element(v)) != -1) ++v;
    return k.element(v);
}

Fp first_square_d(const PrimeField& k) {
    // d must avoid 0 and 1 for the curve to be smooth.
    std::int64_t v = 2;
    while (legendre(k.element(v)) != 1) ++v;
    return k.element(v);
}

class EdwardsOverPrime : public ::testing::TestWithParam<std::uint64_t> {
protected:
    PrimeField k{GetParam()};
    EdwardsParams<Fp> p = EdwardsParams<Fp>::make(first_nonsquare(k));
};

} // namespace

TEST_P(EdwardsOverPrime, IdentityAndTwoTorsion) {
    const auto O = WeierstrassPoint<Fp>::at_infinity(k);
    EXPECT_TRUE(point_equal(from_weierstrass(p, O), identity(p)));
    EXPECT_TRUE(point_equal(identity(p), EdwardsPoint<Fp>{{k.one(), k.one()}, {k.one(), k.zero()}}));
    EXPECT_TRUE(proj_equal(l_of(p, WeierstrassPoint<Fp>::affine(k.zero(), k.zero())), Vec2<Fp>{k.one(), -k.one()}));
    EXPECT_TRUE(weierstrass_mul(p, 4, d1_point(p)).infinity);
    EXPECT_FALSE(weierstrass_mul(p, 2, d1_point(p)).infinity);
}

TEST_P(EdwardsOverPrime, AgreesWithWeierstrassLaw) {
    Rng rng(4);
    for (int i = 0; i < 500; ++i) {
        const auto W1 = weierstrass_random(p, rng), W2 = weierstrass_random(p, rng);
        const auto P = from_weierstrass(p, W1), Q = from_weierstrass(p, W2);
        ASSERT_TRUE(is_member(p, P));
        EXPECT_TRUE(to_weierstrass(p, P) == W1);
        const auto expected = from_weierstrass(p, weierstrass_add(p, W1, W2));
        EXPECT_TRUE(point_equal(add(p, P, Q, AddStrategy::universal()), expected));
        EXPECT_TRUE(point_equal(add(p, P, Q), expected));
        EXPECT_TRUE(point_equal(neg(P), from_weierstrass(p, weierstrass_neg(W1))));
    }
}

TEST_P(EdwardsOverPrime, AffineFormsAgreeWhereDefined) {
    Rng rng(5);
    int checked = 0;
    for (int i = 0; i < 500; ++i) {
        const auto P = from_weierstrass(p, weierstrass_random(p, rng));
        const auto Q = from_weierstrass(p, weierstrass_random(p, rng));
        const auto S = add(p, P, Q, AddStrategy::universal());
        if (P.u[0].is_zero() || P.y[0].is_zero() || Q.u[0].is_zero() || Q.y[0].is_zero()) continue;
        if (S.u[0].is_zero() || S.y[0].is_zero()) continue;
        const auto [U, Y] = affine(P);
        const auto [V, Z] = affine(Q);
        const auto expected = affine(S);
        for (int w = 0; w < 4; ++w) {
            try {
                EXPECT_EQ(affine_sum(p, U, Y, V, Z, w), expected) << "form " << w;
                ++checked;
            } catch (const Error& e) {
                EXPECT_EQ(e.code(), ErrorCode::DivisionByZero);
            }
        }
    }
    EXPECT_GT(checked, 1000);
}

TEST_P(EdwardsOverPrime, BiquadraticFormsMatchSumAndDifference) {
    Rng rng(6);
    const Fp two = k.element(2);
    for (int i = 0; i < 300; ++i) {
        const auto W1 = weierstrass_random(p, rng), W2 = weierstrass_random(p, rng);
        const auto B = biquadratic(p, l_of(p, W1), l_of(p, W2));
        const auto lp = l_of(p, weierstrass_add(p, W1, W2));
        const auto lm = l_of(p, weierstrass_add(p, W1, weierstrass_neg(W2)));
        const Fp mixed = lp[0] * lm[1] + lp[1] * lm[0];
        const std::array<Fp, 4> got{B[0][0], B[0][1], B[1][0], B[1][1]};
        const std::array<Fp, 4> want{two * lp[0] * lm[0], mixed, mixed, two * lp[1] * lm[1]};
        EXPECT_TRUE(proj_equal(got, want));
    }
}

TEST_P(EdwardsOverPrime, GroupAxioms) {
    Rng rng(7);
    const auto O = identity(p);
    for (int i = 0; i < 100; ++i) {
        const auto P = from_weierstrass(p, weierstrass_random(p, rng));
        const auto Q = from_weierstrass(p, weierstrass_random(p, rng));
        const auto R = from_weierstrass(p, weierstrass_random(p, rng));
        const auto u = AddStrategy::universal();
        EXPECT_TRUE(point_equal(add(p, P, O, u), normalize(P)));
        EXPECT_TRUE(point_equal(add(p, P, neg(P), u), O));
        EXPECT_TRUE(point_equal(add(p, P, Q, u), add(p, Q, P, u)));
        EXPECT_TRUE(point_equal(add(p, add(p, P, Q, u), R, u), add(p, P, add(p, Q, R, u), u)));
    }
}

INSTANTIATE_TEST_SUITE_P(Primes, EdwardsOverPrime, ::testing::Values(101u, 1009u, 2003u));

TEST(Edwards, UniversalColumnNeverDegenerates) {
    const PrimeField k(1009);
    const auto p = EdwardsParams<Fp>::make(first_nonsquare(k));
    ASSERT_TRUE(p.universal());
    Rng rng(8);
    for (int i = 0; i < 10000; ++i) {
        const auto P = from_weierstrass(p, weierstrass_random(p, rng));
        const auto Q = from_weierstrass(p, weierstrass_random(p, rng));
        const auto A = edwards_A(p, P, Q), J = edwards_J(p, P, Q);
        ASSERT_FALSE(A[0][0].is_zero() && A[1][0].is_zero());
        ASSERT_FALSE(J[0][0].is_zero() && J[1][0].is_zero());
    }
}

TEST(Edwards, SquareDHasExceptionalPairs) {
    const PrimeField k(101);
    const auto p = EdwardsParams<Fp>::make(first_square_d(k));
    EXPECT_FALSE(p.universal());
    EXPECT_THROW((void)add(p, identity(p), identity(p), AddStrategy::universal()), Error);
    Rng rng(9);
    int degenerate = 0;
    for (int i = 0; i < 3000; ++i) {
        const auto P = from_weierstrass(p, weierstrass_random(p, rng));
        const auto Q = from_weierstrass(p, weierstrass_random(p, rng));
        try {
            (void)add(p, P, Q, AddStrategy::columns(0, 0));
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::DegenerateColumn);
            ++degenerate;
        }
        // The fallback still finds the sum.
        (void)add(p, P, Q);
    }
    EXPECT_GT(degenerate, 0);
}

TEST(Edwards, NonMembersHaveNonzeroResidual) {
    const PrimeField k(101);
    const auto p = EdwardsParams<Fp>::make(first_nonsquare(k));
    Rng rng(10);
    int nonzero = 0;
    for (int i = 0; i < 200; ++i) {
        const EdwardsPoint<Fp> P{{k.random(rng), k.random(rng)}, {k.random(rng), k.random(rng)}};
        if (!residual(p, P).is_zero()) ++nonzero;
    }
    EXPECT_GT(nonzero, 150);
    EXPECT_FALSE(is_member(p, EdwardsPoint<Fp>{{k.zero(), k.zero()}, {k.one(), k.zero()}}));
}

TEST(Edwards, TwistedAffineEquation) {
    const PrimeField k(101);
    const auto p = EdwardsParams<Fp>::make(first_nonsquare(k));
    const Fp kappa = first_nonsquare(k);
    EXPECT_TRUE(twisted_residual(p, kappa, k.one(), k.zero()).is_zero());
    EXPECT_TRUE(twisted_residual(p, kappa, -k.one(), k.zero()).is_zero());
    EXPECT_FALSE(twisted_residual(p, kappa, k.zero(), k.zero()).is_zero());
    // With kappa = 1 the equation is the affine form of the untwisted model.
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        const auto P = from_weierstrass(p, weierstrass_random(p, rng));
        if (P.u[0].is_zero() || P.y[0].is_zero()) continue;
        const auto [U, Y] = affine(P);
        EXPECT_TRUE(twisted_residual(p, k.one(), U, Y).is_zero());
    }
}

TEST(Edwards, AffineChartCoversEverythingOnlyForNonsquareD) {
    const PrimeField k(101);
    auto off_chart = [&](const EdwardsParams<Fp>& p) {
        int count = 0;
        for (std::int64_t x = 0; x < 101; ++x) {
            const Fp X = k.element(x);
            const auto y = try_sqrt(weierstrass_rhs(p, X));
            if (!y) continue;
            for (const Fp& yy : {*y, -*y}) {
                const auto P = from_weierstrass(p, WeierstrassPoint<Fp>::affine(X, yy));
                if (P.u[0].is_zero() || P.y[0].is_zero()) {
                    ++count;
                    EXPECT_THROW((void)affine(P), Error);
                }
            }
        }
        return count;
    };
    EXPECT_EQ(off_chart(EdwardsParams<Fp>::make(first_nonsquare(k))), 0);
    EXPECT_GT(off_chart(EdwardsParams<Fp>::make(first_square_d(k))), 0);
}
