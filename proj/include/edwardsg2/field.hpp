#pragma once

#include <concepts>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <gmpxx.h>

#include "edwardsg2/error.hpp"
#include "edwardsg2/rng.hpp"

namespace edwardsg2 {

// Per-thread count of base-field multiplications. Harnesses that fan out work
// sum the per-thread totals themselves.
inline thread_local std::uint64_t field_mul_counter = 0;

class MulCountScope {
public:
    MulCountScope() : start_(field_mul_counter) {}
    std::uint64_t count() const { return field_mul_counter - start_; }

private:
    std::uint64_t start_;
};

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Miller-Rabin over the first twelve prime bases (deterministic for 64 bits).
inline bool is_probable_prime(std::uint64_t n) {
    constexpr std::uint64_t bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    if (n < 2) return false;
    for (std::uint64_t q : bases) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : bases) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s && composite; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) composite = false;
        }
        if (composite) return false;
    }
    return true;
}

inline std::string to_hex(const mpz_class& v) { return v.get_str(16); }

/// Decimal or 0x-prefixed hexadecimal, as accepted on the command line.
inline mpz_class parse_integer(std::string_view text) {
    std::string s(text);
    bool negative = false;
    if (!s.empty() && s[0] == '-') {
        negative = true;
        s = s.substr(1);
    }
    int base = 10;
    if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
        s = s.substr(2);
        base = 16;
    }
    mpz_class v;
    if (s.empty() || v.set_str(s, base) != 0) {
        throw Error(ErrorCode::ParseError, "not an integer: '" + std::string(text) + "'");
    }
    return negative ? mpz_class(-v) : v;
}

inline mpz_class parse_hex(std::string_view text) {
    mpz_class v;
    if (text.empty() || text[0] == '-' || v.set_str(std::string(text), 16) != 0) {
        throw Error(ErrorCode::ParseError, "not a hex integer: '" + std::string(text) + "'");
    }
    return v;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Word-size prime field

class Fp;

/// F_p for an odd prime p < 2^63. A plain value type; elements carry the
/// modulus so copies are free and cross-field arithmetic is detectable.
class PrimeField {
public:
    using element_type = Fp;

    explicit PrimeField(std::uint64_t p) : p_(p) {
        if (p < 3 || p % 2 == 0 || p >= (1ull << 63) || !detail::is_probable_prime(p)) {
            throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not an odd prime below 2^63");
        }
    }

    std::uint64_t p() const { return p_; }
    mpz_class modulus() const { return mpz_class(static_cast<unsigned long>(p_)); }

    Fp element(std::int64_t v) const;
    Fp from_integer(const mpz_class& v) const;
    Fp zero() const;
    Fp one() const;
    Fp random(Rng& rng) const;

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
    friend class Fp;
    struct Trusted {};
    PrimeField(std::uint64_t p, Trusted) : p_(p) {}

    std::uint64_t p_;
};

class Fp {
public:
    using field_type = PrimeField;

    field_type field() const { return PrimeField(p_, PrimeField::Trusted{}); }
    std::uint64_t value() const { return v_; }
    mpz_class integer() const { return mpz_class(static_cast<unsigned long>(v_)); }
    bool is_zero() const { return v_ == 0; }

    friend Fp operator+(const Fp& a, const Fp& b) {
        check(a, b);
        std::uint64_t s = a.v_ + b.v_;
        if (s >= a.p_) s -= a.p_;
        return Fp(s, a.p_);
    }
    friend Fp operator-(const Fp& a, const Fp& b) {
        check(a, b);
        return Fp(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + a.p_ - b.v_, a.p_);
    }
    friend Fp operator*(const Fp& a, const Fp& b) {
        check(a, b);
        ++field_mul_counter;
        return Fp(detail::mulmod(a.v_, b.v_, a.p_), a.p_);
    }
    friend Fp operator/(const Fp& a, const Fp& b) { return a * b.inverse(); }
    Fp operator-() const { return Fp(v_ == 0 ? 0 : p_ - v_, p_); }

    Fp& operator+=(const Fp& o) { return *this = *this + o; }
    Fp& operator-=(const Fp& o) { return *this = *this - o; }
    Fp& operator*=(const Fp& o) { return *this = *this * o; }
    Fp& operator/=(const Fp& o) { return *this = *this / o; }

    Fp inverse() const {
        if (v_ == 0) throw Error(ErrorCode::DivisionByZero, "inverse of 0 in F_" + std::to_string(p_));
        __int128 t = 0, nt = 1, r = p_, nr = v_;
        while (nr != 0) {
            __int128 q = r / nr;
            t -= q * nt;
            std::swap(t, nt);
            r -= q * nr;
            std::swap(r, nr);
        }
        if (t < 0) t += p_;
        return Fp(static_cast<std::uint64_t>(t), p_);
    }

    friend bool operator==(const Fp& a, const Fp& b) { return a.v_ == b.v_ && a.p_ == b.p_; }

private:
    friend class PrimeField;
    Fp(std::uint64_t v, std::uint64_t p) : v_(v), p_(p) {}

    static void check(const Fp& a, const Fp& b) {
        if (a.p_ != b.p_) {
            throw Error(ErrorCode::FieldMismatch, "F_" + std::to_string(a.p_) + " vs F_" + std::to_string(b.p_));
        }
    }

    std::uint64_t v_ = 0;
    std::uint64_t p_ = 0;
};

inline Fp PrimeField::element(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    if (r < 0) r += static_cast<std::int64_t>(p_);
    return Fp(static_cast<std::uint64_t>(r), p_);
}

inline Fp PrimeField::from_integer(const mpz_class& v) const {
    mpz_class r = v % modulus();
    if (r < 0) r += modulus();
    return Fp(r.get_ui(), p_);
}

inline Fp PrimeField::zero() const { return Fp(0, p_); }
inline Fp PrimeField::one() const { return Fp(1, p_); }
inline Fp PrimeField::random(Rng& rng) const { return Fp(rng.below(p_), p_); }

// ---------------------------------------------------------------------------
// Arbitrary-precision fallback

class BigFp;

class BigPrimeField {
public:
    using element_type = BigFp;

    explicit BigPrimeField(const mpz_class& p) : p_(std::make_shared<const mpz_class>(p)) {
        if (p < 3 || mpz_even_p(p.get_mpz_t()) || mpz_probab_prime_p(p.get_mpz_t(), 40) == 0) {
            throw Error(ErrorCode::NotPrime, p.get_str() + " is not an odd prime");
        }
    }

    const mpz_class& modulus() const { return *p_; }

    BigFp element(std::int64_t v) const;
    BigFp from_integer(const mpz_class& v) const;
    BigFp zero() const;
    BigFp one() const;
    BigFp random(Rng& rng) const;

    friend bool operator==(const BigPrimeField& a, const BigPrimeField& b) {
        return a.p_ == b.p_ || *a.p_ == *b.p_;
    }

private:
    friend class BigFp;
    explicit BigPrimeField(std::shared_ptr<const mpz_class> p) : p_(std::move(p)) {}

    std::shared_ptr<const mpz_class> p_;
};

class BigFp {
public:
    using field_type = BigPrimeField;

    field_type field() const { return BigPrimeField(p_); }
    mpz_class integer() const { return v_; }
    bool is_zero() const { return v_ == 0; }

    friend BigFp operator+(const BigFp& a, const BigFp& b) {
        check(a, b);
        mpz_class s = a.v_ + b.v_;
        if (s >= *a.p_) s -= *a.p_;
        return BigFp(std::move(s), a.p_);
    }
    friend BigFp operator-(const BigFp& a, const BigFp& b) {
        check(a, b);
        mpz_class s = a.v_ - b.v_;
        if (s < 0) s += *a.p_;
        return BigFp(std::move(s), a.p_);
    }
    friend BigFp operator*(const BigFp& a, const BigFp& b) {
        check(a, b);
        ++field_mul_counter;
        mpz_class s = a.v_ * b.v_;
        mpz_mod(s.get_mpz_t(), s.get_mpz_t(), a.p_->get_mpz_t());
        return BigFp(std::move(s), a.p_);
    }
    friend BigFp operator/(const BigFp& a, const BigFp& b) { return a * b.inverse(); }
    BigFp operator-() const { return BigFp(v_ == 0 ? mpz_class(0) : mpz_class(*p_ - v_), p_); }

    BigFp& operator+=(const BigFp& o) { return *this = *this + o; }
    BigFp& operator-=(const BigFp& o) { return *this = *this - o; }
    BigFp& operator*=(const BigFp& o) { return *this = *this * o; }
    BigFp& operator/=(const BigFp& o) { return *this = *this / o; }

    BigFp inverse() const {
        if (v_ == 0) throw Error(ErrorCode::DivisionByZero, "inverse of 0");
        mpz_class r;
        mpz_invert(r.get_mpz_t(), v_.get_mpz_t(), p_->get_mpz_t());
        return BigFp(std::move(r), p_);
    }

    friend bool operator==(const BigFp& a, const BigFp& b) {
        return a.v_ == b.v_ && (a.p_ == b.p_ || *a.p_ == *b.p_);
    }

private:
    friend class BigPrimeField;
    BigFp(mpz_class v, std::shared_ptr<const mpz_class> p) : v_(std::move(v)), p_(std::move(p)) {}

    static void check(const BigFp& a, const BigFp& b) {
        if (a.p_ != b.p_ && *a.p_ != *b.p_) {
            throw Error(ErrorCode::FieldMismatch, "F_" + a.p_->get_str() + " vs F_" + b.p_->get_str());
        }
    }

    mpz_class v_;
    std::shared_ptr<const mpz_class> p_;
};

inline BigFp BigPrimeField::element(std::int64_t v) const { return from_integer(mpz_class(static_cast<long>(v))); }

inline BigFp BigPrimeField::from_integer(const mpz_class& v) const {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), v.get_mpz_t(), p_->get_mpz_t());
    return BigFp(std::move(r), p_);
}

inline BigFp BigPrimeField::zero() const { return BigFp(0, p_); }
inline BigFp BigPrimeField::one() const { return BigFp(1, p_); }
inline BigFp BigPrimeField::random(Rng& rng) const { return BigFp(rng.below(*p_), p_); }

// ---------------------------------------------------------------------------
// Generic prime-field algorithms

template <class F>
concept FieldElement = requires(const F& a, const F& b, const typename F::field_type& k, Rng& rng) {
    { a + b } -> std::same_as<F>;
    { a - b } -> std::same_as<F>;
    { a * b } -> std::same_as<F>;
    { a / b } -> std::same_as<F>;
    { -a } -> std::same_as<F>;
    { a.inverse() } -> std::same_as<F>;
    { a.is_zero() } -> std::same_as<bool>;
    { a.integer() } -> std::same_as<mpz_class>;
    { a.field() } -> std::same_as<typename F::field_type>;
    { a == b } -> std::same_as<bool>;
    { k.element(std::int64_t{0}) } -> std::same_as<F>;
    { k.from_integer(mpz_class{}) } -> std::same_as<F>;
    { k.modulus() } -> std::convertible_to<mpz_class>;
    { k.random(rng) } -> std::same_as<F>;
};

/// Square-and-multiply for any multiplicative type with a supplied unit.
template <class T>
T power(T base, const mpz_class& exponent, T unit) {
    if (exponent < 0) throw Error(ErrorCode::InvalidParams, "negative exponent");
    T result = std::move(unit);
    const std::size_t bits = mpz_sizeinbase(exponent.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        result = result * result;
        if (mpz_tstbit(exponent.get_mpz_t(), i)) result = result * base;
    }
    return result;
}

template <FieldElement F>
F pow(const F& x, const mpz_class& exponent) {
    return power(x, exponent, x.field().element(1));
}

template <FieldElement F>
F pow(const F& x, std::uint64_t exponent) {
    return pow(x, mpz_class(static_cast<unsigned long>(exponent)));
}

/// Legendre symbol by Euler's criterion: 0, +1 or -1.
template <FieldElement F>
int legendre(const F& x) {
    if (x.is_zero()) return 0;
    const mpz_class p = x.field().modulus();
    return pow(x, mpz_class((p - 1) / 2)).integer() == 1 ? 1 : -1;
}

template <FieldElement F>
bool is_square(const F& x) { return legendre(x) >= 0; }

template <FieldElement F>
bool is_nonsquare(const F& x) { return legendre(x) < 0; }

/// Smallest positive integer that is a quadratic nonresidue.
template <FieldElement F>
F smallest_nonresidue(const typename F::field_type& field) {
    for (std::int64_t n = 2;; ++n) {
        F z = field.element(n);
        if (legendre(z) == -1) return z;
    }
}

namespace detail {

// Tonelli-Shanks in a cyclic group of even order `order`: returns some r with
// r^2 = x, assuming x is a square. `nonresidue` must be a non-square.
template <class T>
T tonelli_shanks(const T& x, const mpz_class& order, const T& nonresidue, const T& unit) {
    mpz_class q = order;
    unsigned long s = 0;
    while (mpz_even_p(q.get_mpz_t())) {
        q /= 2;
        ++s;
    }
    T z = power(nonresidue, q, unit);
    T t = power(x, q, unit);
    T r = power(x, mpz_class((q + 1) / 2), unit);
    unsigned long m = s;
    while (!(t == unit)) {
        unsigned long i = 0;
        T t2 = t;
        while (!(t2 == unit)) {
            t2 = t2 * t2;
            ++i;
        }
        T b = z;
        for (unsigned long j = 0; j + 1 < m - i; ++j) b = b * b;
        m = i;
        z = b * b;
        t = t * z;
        r = r * b;
    }
    return r;
}

} // namespace detail

/// Canonical square root: the root whose integer representative is at most
/// (p-1)/2. Empty when x is a nonsquare.
template <FieldElement F>
std::optional<F> try_sqrt(const F& x) {
    if (x.is_zero()) return x;
    if (legendre(x) != 1) return std::nullopt;
    const auto field = x.field();
    const mpz_class p = field.modulus();
    F r = mpz_fdiv_ui(p.get_mpz_t(), 4) == 3
              ? pow(x, mpz_class((p + 1) / 4))
              : detail::tonelli_shanks(x, mpz_class(p - 1), smallest_nonresidue<F>(field), field.element(1));
    if (r.integer() > (p - 1) / 2) r = -r;
    return r;
}

template <FieldElement F>
F sqrt(const F& x) {
    auto r = try_sqrt(x);
    if (!r) throw Error(ErrorCode::NotASquare, detail::to_hex(x.integer()) + " is not a square");
    return *r;
}

template <FieldElement F>
std::string to_hex(const F& x) { return detail::to_hex(x.integer()); }

// ---------------------------------------------------------------------------
// Quadratic extension F_p(sqrt(n))

/// Element x0 + x1*sqrt(n) with n a fixed nonsquare of the base field.
template <FieldElement F>
class QuadExt {
public:
    QuadExt(F x0, F x1, F n) : x0_(std::move(x0)), x1_(std::move(x1)), n_(std::move(n)) {}

    const F& real() const { return x0_; }
    const F& imag() const { return x1_; }
    const F& nonresidue() const { return n_; }

    bool is_zero() const { return x0_.is_zero() && x1_.is_zero(); }
    bool in_base_field() const { return x1_.is_zero(); }

    QuadExt conj() const { return {x0_, -x1_, n_}; }
    F norm() const { return x0_ * x0_ - n_ * x1_ * x1_; }

    friend QuadExt operator+(const QuadExt& a, const QuadExt& b) { return {a.x0_ + b.x0_, a.x1_ + b.x1_, a.n_}; }
    friend QuadExt operator-(const QuadExt& a, const QuadExt& b) { return {a.x0_ - b.x0_, a.x1_ - b.x1_, a.n_}; }
    friend QuadExt operator*(const QuadExt& a, const QuadExt& b) {
        return {a.x0_ * b.x0_ + a.n_ * a.x1_ * b.x1_, a.x0_ * b.x1_ + a.x1_ * b.x0_, a.n_};
    }
    friend QuadExt operator*(const QuadExt& a, const F& s) { return {a.x0_ * s, a.x1_ * s, a.n_}; }
    QuadExt operator-() const { return {-x0_, -x1_, n_}; }
    friend QuadExt operator/(const QuadExt& a, const QuadExt& b) { return a * b.inverse(); }

    QuadExt inverse() const {
        F nm = norm();
        if (nm.is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of 0 in quadratic extension");
        F inv = nm.inverse();
        return {x0_ * inv, -x1_ * inv, n_};
    }

    friend bool operator==(const QuadExt& a, const QuadExt& b) { return a.x0_ == b.x0_ && a.x1_ == b.x1_; }

private:
    F x0_, x1_, n_;
};

/// The quadratic extension as a value: holds the chosen nonsquare n.
template <FieldElement F>
class QuadExtField {
public:
    explicit QuadExtField(const typename F::field_type& base) : n_(smallest_nonresidue<F>(base)) {}

    QuadExtField(const typename F::field_type&, F n) : n_(std::move(n)) {
        if (edwardsg2::legendre(n_) != -1) throw Error(ErrorCode::InvalidParams, "extension generator must be a nonsquare");
    }

    const F& nonresidue() const { return n_; }
    QuadExt<F> embed(const F& x) const { return {x, x.field().zero(), n_}; }
    QuadExt<F> make(const F& x0, const F& x1) const { return {x0, x1, n_}; }
    QuadExt<F> sqrt_n() const { return {n_.field().zero(), n_.field().one(), n_}; }
    QuadExt<F> one() const { return embed(n_.field().one()); }

    /// x is a square in F_{p^2} iff its norm is a square in F_p.
    int legendre(const QuadExt<F>& x) const { return edwardsg2::legendre(x.norm()); }

    std::optional<QuadExt<F>> try_sqrt(const QuadExt<F>& x) const {
        if (x.is_zero()) return x;
        if (legendre(x) != 1) return std::nullopt;
        const mpz_class p = n_.field().modulus();
        // Any element with nonsquare norm is a nonsquare of F_{p^2}.
        QuadExt<F> z = one();
        for (std::int64_t t = 0;; ++t) {
            z = make(n_.field().element(t), n_.field().one());
            if (legendre(z) == -1) break;
        }
        return detail::tonelli_shanks(x, mpz_class(p * p - 1), z, one());
    }

private:
    F n_;
};

} // namespace edwardsg2
