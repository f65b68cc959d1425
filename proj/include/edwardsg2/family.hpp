#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "edwardsg2/field.hpp"
#include "edwardsg2/poly.hpp"

namespace edwardsg2 {

/// Parameters of the curve family and every constant derived from them.
///
/// The printed model of the curve is y^2 = sextic(x) with
///   sextic = g((f+1)x^2 - 2gx + b^2 f - de)(x^2 - b^2 d)(x^2 + e).
/// Divisor arithmetic runs on its quadratic twist y^2 = ac * sextic(x)
/// (see jacobian_sextic()), the model on which the order-4 point D_1 is
/// rational. Both models share the same Kummer surface after k4 is scaled
/// by 1/(ac).
template <FieldElement F>
struct CurveParams {
    using field_type = typename F::field_type;

    field_type field;
    F a, b, c;
    F d, e, f, g;
    std::optional<F> frak_a;
    std::optional<F> delta;
    std::optional<F> rho;
    std::array<F, 7> sextic;
    bool discriminant_ok;

    bool frak_parametrized() const { return frak_a.has_value(); }

    /// The twist factor between the printed model and the Jacobian model.
    F twist_factor() const { return a * c; }

    Poly<F> sextic_poly() const { return Poly<F>(field, {sextic.begin(), sextic.end()}); }
    Poly<F> jacobian_sextic() const { return sextic_poly() * twist_factor(); }

    const F& require_delta() const {
        if (!delta) throw Error(ErrorCode::MissingFrakParametrization, "parameters were not built from frak_a");
        return *delta;
    }
    const F& require_rho() const {
        if (!rho) throw Error(ErrorCode::MissingFrakParametrization, "parameters were not built from frak_a");
        return *rho;
    }
};

/// Builds the family member for (a, b, c). Throws DegenerateDiscriminant,
/// naming every vanishing factor, when 2abcdefg(a-1)(b^2-1)(c-1) = 0.
template <FieldElement F>
CurveParams<F> params_from_abc(const F& a, const F& b, const F& c) {
    const auto k = a.field();
    const F one = k.one();
    const F b2 = b * b;
    const F d = b2 * c - c + one;
    const F e = a * b2 - a - b2;
    const F f = a + c - one;
    const F g = b2 * c + a;

    const Poly<F> q1(k, {g * (b2 * f - d * e), -(k.element(2) * g * g), g * (f + one)});
    const Poly<F> q2(k, {-(b2 * d), k.zero(), one});
    const Poly<F> q3(k, {e, k.zero(), one});
    const Poly<F> sextic = q1 * q2 * q3;

    std::array<F, 7> coeffs{k.zero(), k.zero(), k.zero(), k.zero(), k.zero(), k.zero(), k.zero()};
    for (std::size_t i = 0; i < 7; ++i) coeffs[i] = sextic[i];

    const std::array<std::pair<const char*, F>, 10> factors{{
        {"a", a}, {"b", b}, {"c", c}, {"d", d}, {"e", e}, {"f", f}, {"g", g},
        {"a-1", a - one}, {"b^2-1", b2 - one}, {"c-1", c - one},
    }};
    std::string vanishing;
    for (const auto& [name, value] : factors) {
        if (value.is_zero()) vanishing += vanishing.empty() ? name : std::string(", ") + name;
    }
    if (!vanishing.empty()) {
        throw Error(ErrorCode::DegenerateDiscriminant, "vanishing discriminant factor(s): " + vanishing);
    }
    return CurveParams<F>{k, a, b, c, d, e, f, g, std::nullopt, std::nullopt, std::nullopt, coeffs, true};
}

/// Builds J_{frak_a,b,c}: a = rho^2 with rho = (A^2 - 2Ac + c)/(A^2 - c),
/// delta = c(A^2 - 2A + c)/(A^2 - c), so that cf = delta^2.
template <FieldElement F>
CurveParams<F> params_from_frak(const F& frak_a, const F& b, const F& c) {
    const auto k = c.field();
    const F two = k.element(2);
    const F fa2 = frak_a * frak_a;
    const F denom = fa2 - c;
    if (denom.is_zero()) throw Error(ErrorCode::BadParametrization, "frak_a^2 = c");
    const F inv = denom.inverse();
    const F rho = (fa2 - two * frak_a * c + c) * inv;
    const F delta = c * (fa2 - two * frak_a + c) * inv;

    CurveParams<F> params = params_from_abc(rho * rho, b, c);
    if (!(params.c * params.f == delta * delta)) {
        throw Error(ErrorCode::InvalidParams, "cf != delta^2");
    }
    params.frak_a = frak_a;
    params.delta = delta;
    params.rho = rho;
    return params;
}

struct UniversalityReport {
    bool c_nonsquare = false;
    bool cd_nonsquare = false;
    bool gterm_nonsquare = false;      // g(g - b^2(c-1))
    bool near_miss_nonsquare = false;  // acdeg(de - b^2 f)

    /// The three conditions under which c*u1 - delta*u3 never vanishes.
    bool universal() const { return c_nonsquare && cd_nonsquare && gterm_nonsquare; }
};

template <FieldElement F>
F universality_gterm(const CurveParams<F>& p) {
    const F one = p.field.one();
    return p.g * (p.g - p.b * p.b * (p.c - one));
}

template <FieldElement F>
F near_miss_quantity(const CurveParams<F>& p) {
    return p.a * p.c * p.d * p.e * p.g * (p.d * p.e - p.b * p.b * p.f);
}

template <FieldElement F>
UniversalityReport universality_report(const CurveParams<F>& p) {
    UniversalityReport r;
    r.c_nonsquare = is_nonsquare(p.c);
    r.cd_nonsquare = is_nonsquare(p.c * p.d);
    r.gterm_nonsquare = is_nonsquare(universality_gterm(p));
    r.near_miss_nonsquare = is_nonsquare(near_miss_quantity(p));
    return r;
}

/// True when the universal column combination may be used with these params.
template <FieldElement F>
bool supports_universal_law(const CurveParams<F>& p) {
    return p.frak_parametrized() && universality_report(p).universal();
}

// ---------------------------------------------------------------------------
// Parameter search

enum class SearchStrategy { Random, TParametrized };

template <FieldElement F>
struct FrakTriple {
    F frak_a, b, c;
    friend bool operator==(const FrakTriple&, const FrakTriple&) = default;
};

namespace detail {

template <FieldElement F>
bool accept_triple(const F& frak_a, const F& b, const F& c) {
    if (!is_nonsquare(c)) return false;
    try {
        return universality_report(params_from_frak(frak_a, b, c)).universal();
    } catch (const Error&) {
        return false;
    }
}

// Candidate #index in the t-parametrised enumeration order, or nullopt once
// the order is exhausted. Order: nonsquare c ascending, then t, then frak_a.
template <FieldElement F>
std::optional<FrakTriple<F>> t_candidate(const typename F::field_type& k, const std::vector<F>& nonsquares,
                                         std::uint64_t index) {
    const mpz_class p = k.modulus();
    const mpz_class per_c = p * p;
    const mpz_class idx(static_cast<unsigned long>(index));
    const mpz_class ci = idx / per_c;
    if (ci >= static_cast<unsigned long>(nonsquares.size())) return std::nullopt;
    const mpz_class rest = idx % per_c;
    const F& c = nonsquares[ci.get_ui()];
    const F t = k.from_integer(mpz_class(rest / p));
    const F frak_a = k.from_integer(mpz_class(rest % p));
    // t^2 != c because c is a nonsquare.
    const F b = (t * t + c - k.element(2) * t) / (t * t - c);
    return FrakTriple<F>{frak_a, b, c};
}

} // namespace detail

/// Searches for (frak_a, b, c) meeting all three universality conditions.
///
/// `budget` is the number of candidates examined. Random draws triples from
/// an Rng seeded with `seed`. TParametrized walks nonsquare c ascending,
/// then t, then frak_a, with b = (t^2 + c - 2t)/(t^2 - c), which makes d a
/// square; it ignores the seed. Candidates may be split across `threads`
/// workers; the result is always in sequential candidate order.
template <FieldElement F>
std::vector<FrakTriple<F>> param_search(const typename F::field_type& k, SearchStrategy strategy,
                                        std::uint64_t budget, std::uint64_t seed, unsigned threads = 1) {
    std::vector<std::optional<FrakTriple<F>>> candidates;
    candidates.reserve(budget);
    if (strategy == SearchStrategy::Random) {
        Rng rng(seed);
        for (std::uint64_t i = 0; i < budget; ++i) {
            F fa = k.random(rng);
            F b = k.random(rng);
            F c = k.random(rng);
            candidates.push_back(FrakTriple<F>{fa, b, c});
        }
    } else {
        std::vector<F> nonsquares;
        const mpz_class p = k.modulus();
        // Enough nonsquares to cover the budget; each contributes p^2 candidates.
        const mpz_class needed = mpz_class(static_cast<unsigned long>(budget)) / (p * p) + 1;
        for (mpz_class v = 1; v < p && mpz_class(static_cast<unsigned long>(nonsquares.size())) < needed; ++v) {
            F c = k.from_integer(v);
            if (is_nonsquare(c)) nonsquares.push_back(c);
        }
        for (std::uint64_t i = 0; i < budget; ++i) {
            auto cand = detail::t_candidate<F>(k, nonsquares, i);
            if (!cand) break;
            candidates.push_back(std::move(cand));
        }
    }

    std::vector<char> accepted(candidates.size(), 0);
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto& t = *candidates[i];
            accepted[i] = detail::accept_triple(t.frak_a, t.b, t.c) ? 1 : 0;
        }
    };
    threads = std::max(1u, threads);
    if (threads == 1 || candidates.size() < 1024) {
        work(0, candidates.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (candidates.size() + threads - 1) / threads;
        for (unsigned w = 0; w < threads; ++w) {
            const std::size_t begin = std::min(candidates.size(), w * chunk);
            const std::size_t end = std::min(candidates.size(), begin + chunk);
            pool.emplace_back(work, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    std::vector<FrakTriple<F>> out;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (accepted[i]) out.push_back(*candidates[i]);
    }
    return out;
}

} // namespace edwardsg2
