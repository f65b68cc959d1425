#include <gtest/gtest.h>

#include <set>
#include <tuple>

#include "edwardsg2/family.hpp"
#include "support.hpp"

using namespace edwardsg2;
using testsupport::Mod;

namespace {

// Derived constants computed with plain integers.
struct Derived {
    std::int64_t a, d, e, f, g;
};

Derived derive(const Mod& m, std::int64_t a, std::int64_t b, std::int64_t c) {
    const std::int64_t b2 = m.mul(b, b);
    return {m.r(a), m.r(m.mul(b2, c) - c + 1), m.r(m.mul(a, b2) - a - b2), m.r(a + c - 1), m.r(m.mul(b2, c) + a)};
}

std::int64_t frak_to_a(const Mod& m, std::int64_t fa, std::int64_t c) {
    const std::int64_t rho = m.mul(m.r(m.mul(fa, fa) - 2 * m.mul(fa, c) + c), m.inv(m.r(m.mul(fa, fa) - c)));
    return m.mul(rho, rho);
}

std::int64_t discriminant(const Mod& m, std::int64_t a, std::int64_t b, std::int64_t c) {
    const Derived v = derive(m, a, b, c);
    std::int64_t out = 2;
    for (std::int64_t x : {a, b, c, v.d, v.e, v.f, v.g, a - 1, m.mul(b, b) - 1, c - 1}) out = m.mul(out, x);
    return out;
}

bool universal_oracle(const Mod& m, std::int64_t fa, std::int64_t b, std::int64_t c) {
    if (m.r(m.mul(fa, fa) - c) == 0) return false;
    const std::int64_t a = frak_to_a(m, fa, c);
    if (discriminant(m, a, b, c) == 0) return false;
    const Derived v = derive(m, a, b, c);
    const std::int64_t gterm = m.mul(v.g, m.r(v.g - m.mul(m.mul(b, b), c - 1)));
    return m.legendre_euler(c) == -1 && m.legendre_euler(m.mul(c, v.d)) == -1 && m.legendre_euler(gterm) == -1;
}

std::uint64_t v(const Fp& x) { return x.value(); }

} // namespace

TEST(Family, DerivedConstantsOverLargePrime) {
    const PrimeField k(1000003);
    const auto p = params_from_abc(k.element(2), k.element(3), k.element(4));
    EXPECT_EQ(v(p.d), 33u);
    EXPECT_EQ(v(p.e), 7u);
    EXPECT_EQ(v(p.f), 5u);
    EXPECT_EQ(v(p.g), 38u);
    EXPECT_TRUE(p.discriminant_ok);
    EXPECT_FALSE(p.frak_parametrized());
}

TEST(Family, DegenerateDiscriminantNamesFactor) {
    const PrimeField k(1000003);
    try {
        (void)params_from_abc(k.element(1), k.element(2), k.element(3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateDiscriminant);
        EXPECT_NE(std::string(e.what()).find("a-1"), std::string::npos);
    }
    try {
        (void)params_from_abc(k.element(5), k.element(-1), k.element(3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("b^2-1"), std::string::npos);
    }
}

TEST(Family, WorkedExampleOver1201) {
    const auto p = testsupport::example_params();
    const Mod m{1201};
    EXPECT_EQ(v(p.a), static_cast<std::uint64_t>(frak_to_a(m, 6, 11)));
    EXPECT_EQ(v(p.c), 11u);
    EXPECT_EQ(v(p.c * p.d), 1015u);
    EXPECT_EQ(v(universality_gterm(p)), 202u);
    const UniversalityReport r = universality_report(p);
    EXPECT_TRUE(r.c_nonsquare);
    EXPECT_TRUE(r.cd_nonsquare);
    EXPECT_TRUE(r.gterm_nonsquare);
    EXPECT_TRUE(r.universal());
    EXPECT_TRUE(supports_universal_law(p));
}

TEST(Family, FrakFormulas) {
    const PrimeField k(1201);
    const Mod m{1201};
    Rng rng(21);
    int checked = 0;
    while (checked < 50) {
        const Fp fa = k.random(rng), b = k.random(rng), c = k.random(rng);
        std::optional<CurveParams<Fp>> maybe;
        try {
            maybe = params_from_frak(fa, b, c);
        } catch (const Error&) {
            continue;
        }
        const CurveParams<Fp>& p = *maybe;
        if (!p.discriminant_ok) continue;
        ++checked;
        const auto fai = static_cast<std::int64_t>(fa.value()), ci = static_cast<std::int64_t>(c.value());
        const std::int64_t den = m.inv(m.r(fai * fai - ci));
        EXPECT_EQ(v(*p.rho), static_cast<std::uint64_t>(m.mul(m.r(fai * fai - 2 * fai * ci + ci), den)));
        EXPECT_EQ(v(*p.delta), static_cast<std::uint64_t>(m.mul(m.mul(ci, m.r(fai * fai - 2 * fai + ci)), den)));
        EXPECT_EQ(p.c * p.f, *p.delta * *p.delta);
        EXPECT_EQ(p.a, *p.rho * *p.rho);
        EXPECT_GE(legendre(p.c * p.f), 0);
        EXPECT_GE(legendre(p.a), 0);
    }
}

TEST(Family, BadParametrization) {
    const PrimeField k(17);
    try {
        (void)params_from_frak(k.element(2), k.element(3), k.element(4));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BadParametrization);
    }
}

TEST(Family, SmallFieldExample17) {
    const PrimeField k(17);
    const Mod m{17};
    EXPECT_EQ(frak_to_a(m, 2, 5), 2);
    const bool expect_ok = discriminant(m, 2, 3, 5) != 0;
    if (expect_ok) {
        const auto p = params_from_frak(k.element(2), k.element(3), k.element(5));
        EXPECT_EQ(v(p.a), 2u);
        const Derived d = derive(m, 2, 3, 5);
        EXPECT_EQ(v(p.d), static_cast<std::uint64_t>(d.d));
        EXPECT_EQ(v(p.e), static_cast<std::uint64_t>(d.e));
    } else {
        EXPECT_THROW((void)params_from_frak(k.element(2), k.element(3), k.element(5)), Error);
    }
}

TEST(Family, SexticMatchesProductForm) {
    const Mod m{1201};
    const auto p = testsupport::example_params();
    const auto a = static_cast<std::int64_t>(v(p.a));
    const Derived d = derive(m, a, 7, 11);
    const std::int64_t b2 = 49;
    Rng rng(2);
    for (int i = 0; i < 20; ++i) {
        const auto x = static_cast<std::int64_t>(rng.below(1201));
        const std::int64_t q1 = m.r(m.mul(d.f + 1, m.mul(x, x)) - 2 * m.mul(d.g, x) + m.mul(b2, d.f) - m.mul(d.d, d.e));
        const std::int64_t q2 = m.r(m.mul(x, x) - m.mul(b2, d.d));
        const std::int64_t q3 = m.r(m.mul(x, x) + d.e);
        const std::int64_t expected = m.mul(d.g, m.mul(q1, m.mul(q2, q3)));
        EXPECT_EQ(v(p.sextic_poly()(p.field.element(x))), static_cast<std::uint64_t>(expected));
    }
}

TEST(Family, SquareCIsNotUniversal) {
    const PrimeField k(1201);
    const auto p = params_from_abc(k.element(5), k.element(7), k.element(4));
    EXPECT_FALSE(universality_report(p).c_nonsquare);
    EXPECT_FALSE(supports_universal_law(p));
    try {
        (void)p.require_delta();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingFrakParametrization);
    }
}

TEST(Family, NearMissQuantity) {
    const Mod m{1201};
    const auto p = testsupport::example_params();
    const auto a = static_cast<std::int64_t>(v(p.a));
    const Derived d = derive(m, a, 7, 11);
    std::int64_t q = m.mul(m.mul(m.mul(a, 11), m.mul(d.d, d.e)), d.g);
    q = m.mul(q, m.r(m.mul(d.d, d.e) - m.mul(49, d.f)));
    EXPECT_EQ(v(near_miss_quantity(p)), static_cast<std::uint64_t>(q));
    EXPECT_EQ(universality_report(p).near_miss_nonsquare, m.legendre_euler(q) == -1);
}

TEST(Search, ExhaustiveOverF17) {
    const std::int64_t P = 17;
    const Mod m{P};
    const PrimeField k(17);
    std::set<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>> brute;
    for (std::int64_t fa = 0; fa < P; ++fa)
        for (std::int64_t b = 0; b < P; ++b)
            for (std::int64_t c = 0; c < P; ++c)
                if (universal_oracle(m, fa, b, c)) brute.insert({fa, b, c});
    ASSERT_FALSE(brute.empty());

    // The t-walk visits nonsquare c ascending, then t, then frak_a.
    std::optional<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>> first;
    for (std::int64_t c = 1; c < P && !first; ++c) {
        if (m.legendre_euler(c) != -1) continue;
        for (std::int64_t t = 0; t < P && !first; ++t) {
            const std::int64_t b = m.mul(m.r(t * t + c - 2 * t), m.inv(m.r(t * t - c)));
            for (std::int64_t fa = 0; fa < P && !first; ++fa) {
                if (universal_oracle(m, fa, b, c)) first = std::make_tuple(fa, b, c);
            }
        }
    }
    ASSERT_TRUE(first.has_value());

    const auto found = param_search<Fp>(k, SearchStrategy::TParametrized, 17 * 17 * 8, 0);
    ASSERT_FALSE(found.empty());
    EXPECT_EQ(std::make_tuple(v(found[0].frak_a), v(found[0].b), v(found[0].c)), *first);
    for (const auto& t : found) {
        EXPECT_TRUE(brute.count({v(t.frak_a), v(t.b), v(t.c)}));
        EXPECT_GE(legendre(params_from_frak(t.frak_a, t.b, t.c).d), 0);
    }
}

TEST(Search, RediscoversWorkedExample) {
    const PrimeField k(1201);
    const std::uint64_t budget = 808ull * 1201 + 7;
    const auto found = param_search<Fp>(k, SearchStrategy::TParametrized, budget, 0, 4);
    const FrakTriple<Fp> target{k.element(6), k.element(7), k.element(11)};
    EXPECT_NE(std::find(found.begin(), found.end(), target), found.end());
}

TEST(Search, RandomOverF101IsVerifiedAndDeterministic) {
    const PrimeField k(101);
    const auto found = param_search<Fp>(k, SearchStrategy::Random, 10000, 42);
    ASSERT_FALSE(found.empty());
    for (const auto& t : found) EXPECT_TRUE(universality_report(params_from_frak(t.frak_a, t.b, t.c)).universal());
    EXPECT_EQ(found, param_search<Fp>(k, SearchStrategy::Random, 10000, 42, 4));
    EXPECT_NE(found, param_search<Fp>(k, SearchStrategy::Random, 10000, 43));
}
