#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "edwardsg2/divisor.hpp"
#include "edwardsg2/edwards.hpp"
#include "edwardsg2/family.hpp"
#include "edwardsg2/projective.hpp"
#include "edwardsg2/surface.hpp"

// JSON forms. Field elements are lowercase hex strings of their integer
// representative; projective points are written normalised.
namespace edwardsg2::io {

using json = nlohmann::json;

template <FieldElement F>
json element(const F& x) { return to_hex(x); }

template <FieldElement F>
F parse_element(const typename F::field_type& k, const json& j) {
    if (!j.is_string()) throw Error(ErrorCode::ParseError, "field element must be a hex string");
    const mpz_class v = detail::parse_hex(j.get<std::string>());
    if (v >= k.modulus()) throw Error(ErrorCode::ParseError, "field element out of range");
    return k.from_integer(v);
}

template <FieldElement F, std::size_t N>
json elements(const std::array<F, N>& xs) {
    json out = json::array();
    for (const F& x : xs) out.push_back(element(x));
    return out;
}

template <FieldElement F, std::size_t N>
std::array<F, N> parse_elements(const typename F::field_type& k, const json& j) {
    if (!j.is_array() || j.size() != N) {
        throw Error(ErrorCode::ParseError, "expected an array of " + std::to_string(N) + " elements");
    }
    std::vector<F> tmp;
    for (const auto& e : j) tmp.push_back(parse_element<F>(k, e));
    return [&]<std::size_t... I>(std::index_sequence<I...>) { return std::array<F, N>{tmp[I]...}; }(
        std::make_index_sequence<N>{});
}

inline json field(const PrimeField& k) { return {{"p", detail::to_hex(k.modulus())}}; }
inline json field(const BigPrimeField& k) { return {{"p", detail::to_hex(k.modulus())}}; }

template <class Field>
Field parse_field(const json& j);

template <>
inline PrimeField parse_field<PrimeField>(const json& j) {
    if (!j.is_object() || !j.contains("p") || !j["p"].is_string()) throw Error(ErrorCode::ParseError, "field needs \"p\"");
    const mpz_class p = detail::parse_hex(j["p"].get<std::string>());
    if (!p.fits_ulong_p()) throw Error(ErrorCode::NotPrime, "modulus too large for a word-size field");
    return PrimeField(p.get_ui());
}

template <>
inline BigPrimeField parse_field<BigPrimeField>(const json& j) {
    if (!j.is_object() || !j.contains("p") || !j["p"].is_string()) throw Error(ErrorCode::ParseError, "field needs \"p\"");
    return BigPrimeField(detail::parse_hex(j["p"].get<std::string>()));
}

// --- params ----------------------------------------------------------------

template <FieldElement F>
json params(const CurveParams<F>& p) {
    json j{{"p", detail::to_hex(p.field.modulus())}, {"a", element(p.a)}, {"b", element(p.b)}, {"c", element(p.c)},
           {"d", element(p.d)}, {"e", element(p.e)}, {"f", element(p.f)}, {"g", element(p.g)},
           {"sextic", elements(p.sextic)}};
    if (p.frak_a) j["frak_a"] = element(*p.frak_a);
    if (p.delta) j["delta"] = element(*p.delta);
    if (p.rho) j["rho"] = element(*p.rho);
    return j;
}

/// Rebuilds params from a, b, c (or frak_a, b, c) and checks every derived
/// value present in the document.
template <FieldElement F>
CurveParams<F> parse_params(const json& j) {
    using Field = typename F::field_type;
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "params must be an object");
    const Field k = parse_field<Field>(j);
    auto get = [&](const char* key) {
        if (!j.contains(key)) throw Error(ErrorCode::ParseError, std::string("params missing \"") + key + "\"");
        return parse_element<F>(k, j[key]);
    };
    CurveParams<F> p = j.contains("frak_a") ? params_from_frak(get("frak_a"), get("b"), get("c"))
                                            : params_from_abc(get("a"), get("b"), get("c"));
    const json rebuilt = params(p);
    for (const auto& [key, value] : j.items()) {
        if (!rebuilt.contains(key) || !(rebuilt[key] == value)) {
            throw Error(ErrorCode::ParseError, "params field \"" + key + "\" is inconsistent");
        }
    }
    return p;
}

// --- divisors and points ---------------------------------------------------

template <FieldElement F>
json poly(const Poly<F>& f) {
    json out = json::array();
    for (const F& c : f.coeffs()) out.push_back(element(c));
    return out;
}

template <FieldElement F>
Poly<F> parse_poly(const typename F::field_type& k, const json& j) {
    if (!j.is_array()) throw Error(ErrorCode::ParseError, "polynomial must be an array");
    std::vector<F> c;
    for (const auto& e : j) c.push_back(parse_element<F>(k, e));
    Poly<F> f(k, c);
    if (f.coeffs().size() != c.size()) throw Error(ErrorCode::ParseError, "polynomial has a zero leading coefficient");
    return f;
}

template <FieldElement F>
json divisor(const MumfordDivisor<F>& D) {
    json j{{"u", poly(D.u)}, {"v", poly(D.v)}};
    if (D.inf_plus || D.inf_minus) j["inf"] = {D.inf_plus, D.inf_minus};
    return j;
}

template <FieldElement F>
MumfordDivisor<F> parse_divisor(const HyperellipticCurve<F>& C, const json& j) {
    if (!j.is_object() || !j.contains("u") || !j.contains("v")) throw Error(ErrorCode::ParseError, "divisor needs u, v");
    MumfordDivisor<F> D{parse_poly<F>(C.field(), j["u"]), parse_poly<F>(C.field(), j["v"]), 0, 0};
    if (j.contains("inf")) {
        const auto& inf = j["inf"];
        if (!inf.is_array() || inf.size() != 2 || !inf[0].is_number_integer() || !inf[1].is_number_integer()) {
            throw Error(ErrorCode::ParseError, "\"inf\" must be [n, m]");
        }
        D.inf_plus = inf[0].get<int>();
        D.inf_minus = inf[1].get<int>();
    }
    if (!C.is_valid(D)) throw Error(ErrorCode::InvalidPoint, "not a reduced divisor on this curve");
    return D;
}

template <FieldElement F>
json kummer_point(const KummerPoint<F>& k) { return {{"k", elements(normalize(k))}}; }

template <FieldElement F>
json l_point(const LPoint<F>& l) { return {{"l", elements(normalize(l))}}; }

template <FieldElement F>
json model_point(const ModelPoint<F>& P) {
    const ModelPoint<F> n = normalize(P);
    return {{"u", elements(n.u)}, {"y", elements(n.y)}};
}

template <FieldElement F>
ModelPoint<F> parse_model_point(const typename F::field_type& k, const json& j) {
    if (!j.is_object() || !j.contains("u") || !j.contains("y")) throw Error(ErrorCode::ParseError, "point needs u, y");
    return {parse_elements<F, 4>(k, j["u"]), parse_elements<F, 4>(k, j["y"])};
}

template <FieldElement F>
json edwards_point(const edwards::EdwardsPoint<F>& P) {
    const auto n = edwards::normalize(P);
    return {{"u", elements(n.u)}, {"y", elements(n.y)}};
}

template <FieldElement F>
edwards::EdwardsPoint<F> parse_edwards_point(const typename F::field_type& k, const json& j) {
    if (!j.is_object() || !j.contains("u") || !j.contains("y")) throw Error(ErrorCode::ParseError, "point needs u, y");
    return {parse_elements<F, 2>(k, j["u"]), parse_elements<F, 2>(k, j["y"])};
}

} // namespace edwardsg2::io
