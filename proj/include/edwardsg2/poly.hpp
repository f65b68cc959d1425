#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "edwardsg2/field.hpp"

namespace edwardsg2 {

/// Dense univariate polynomial, coefficients stored low degree first and
/// kept trimmed (no zero leading coefficient). The zero polynomial has no
/// coefficients and degree -1.
template <FieldElement F>
class Poly {
public:
    using field_type = typename F::field_type;

    explicit Poly(field_type field) : field_(std::move(field)) {}
    Poly(field_type field, std::vector<F> coeffs) : field_(std::move(field)), c_(std::move(coeffs)) { trim(); }

    static Poly constant(const F& v) { return Poly(v.field(), {v}); }
    static Poly monomial(const field_type& k, std::size_t degree) {
        std::vector<F> c(degree + 1, k.zero());
        c[degree] = k.one();
        return Poly(k, std::move(c));
    }
    /// x - r
    static Poly linear_root(const F& r) { return Poly(r.field(), {-r, r.field().one()}); }

    const field_type& field() const { return field_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<F>& coeffs() const { return c_; }

    /// Coefficient of x^i, zero beyond the degree.
    F operator[](std::size_t i) const { return i < c_.size() ? c_[i] : field_.zero(); }
    F lead() const { return c_.empty() ? field_.zero() : c_.back(); }

    F operator()(const F& x) const {
        F r = field_.zero();
        for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
        return r;
    }

    Poly derivative() const {
        std::vector<F> d;
        for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * field_.element(static_cast<std::int64_t>(i)));
        return Poly(field_, std::move(d));
    }

    Poly monic() const {
        if (c_.empty()) return *this;
        return *this * c_.back().inverse();
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<F> r(std::max(a.c_.size(), b.c_.size()), a.field_.zero());
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] = a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] = r[i] + b.c_[i];
        return Poly(a.field_, std::move(r));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    Poly operator-() const {
        std::vector<F> r;
        r.reserve(c_.size());
        for (const F& x : c_) r.push_back(-x);
        return Poly(field_, std::move(r));
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly(a.field_);
        std::vector<F> r(a.c_.size() + b.c_.size() - 1, a.field_.zero());
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
        }
        return Poly(a.field_, std::move(r));
    }
    friend Poly operator*(const Poly& a, const F& s) {
        std::vector<F> r;
        r.reserve(a.c_.size());
        for (const F& x : a.c_) r.push_back(x * s);
        return Poly(a.field_, std::move(r));
    }

    /// Euclidean division; throws DivisionByZero for a zero divisor.
    friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
        if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero");
        Poly rem = a;
        if (a.degree() < b.degree()) return {Poly(a.field_), rem};
        std::vector<F> q(static_cast<std::size_t>(a.degree() - b.degree() + 1), a.field_.zero());
        const F inv_lead = b.lead().inverse();
        while (!rem.is_zero() && rem.degree() >= b.degree()) {
            const std::size_t shift = static_cast<std::size_t>(rem.degree() - b.degree());
            const F factor = rem.lead() * inv_lead;
            q[shift] = factor;
            for (std::size_t i = 0; i < b.c_.size(); ++i) rem.c_[i + shift] = rem.c_[i + shift] - factor * b.c_[i];
            rem.trim();
        }
        return {Poly(a.field_, std::move(q)), rem};
    }
    friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
    friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    field_type field_;
    std::vector<F> c_;
};

/// Monic gcd g with Bezout cofactors: s*a + t*b = g. For a = b = 0 all three
/// are zero.
template <FieldElement F>
struct ExtendedGcd {
    Poly<F> g, s, t;
};

template <FieldElement F>
ExtendedGcd<F> extended_gcd(const Poly<F>& a, const Poly<F>& b) {
    const auto& k = a.field();
    Poly<F> r0 = a, r1 = b;
    Poly<F> s0 = Poly<F>::constant(k.one()), s1(k);
    Poly<F> t0(k), t1 = Poly<F>::constant(k.one());
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        Poly<F> s2 = s0 - q * s1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        Poly<F> t2 = t0 - q * t1;
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero()) return {r0, Poly<F>(k), Poly<F>(k)};
    const F inv = r0.lead().inverse();
    return {r0 * inv, s0 * inv, t0 * inv};
}

} // namespace edwardsg2
