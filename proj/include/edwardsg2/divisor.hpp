#pragma once

#include <array>
#include <optional>
#include <vector>

#include "edwardsg2/family.hpp"
#include "edwardsg2/field.hpp"
#include "edwardsg2/poly.hpp"

namespace edwardsg2 {

/// A divisor class on y^2 = h(x), deg h = 6, in Mumford form.
///
/// The class is [Z(u,v) + n*inf+ + m*inf- - w*D_inf] where Z(u,v) is the
/// affine effective divisor cut out by u and y - v, n = inf_plus,
/// m = inf_minus, D_inf = inf+ + inf- and 2w = deg u + n + m. Reduced
/// representatives have deg u + n + m in {0, 2} and min(n, m) = 0, so the
/// identity is u = 1, v = 0 with no points at infinity. Points at infinity
/// are only used when the leading coefficient of h is a square.
template <FieldElement F>
struct MumfordDivisor {
    Poly<F> u;
    Poly<F> v;
    int inf_plus = 0;
    int inf_minus = 0;

    int weight() const { return u.degree(); }
    bool is_identity() const { return u.degree() == 0 && inf_plus == 0 && inf_minus == 0; }

    friend bool operator==(const MumfordDivisor&, const MumfordDivisor&) = default;
};

/// The genus-2 curve y^2 = h(x) together with the data needed for
/// arithmetic at infinity.
template <FieldElement F>
class HyperellipticCurve {
public:
    using field_type = typename F::field_type;

    explicit HyperellipticCurve(Poly<F> h) : h_(std::move(h)) {
        if (h_.degree() != 6) throw Error(ErrorCode::InvalidParams, "curve polynomial must have degree 6");
        if (auto s = try_sqrt(h_.lead())) expansion_ = infinity_series(*s);
    }

    const field_type& field() const { return h_.field(); }
    const Poly<F>& h() const { return h_; }

    /// Whether inf+ and inf- are K-rational.
    bool rational_infinity() const { return expansion_.has_value(); }

    /// Coefficients s_0..s_6 of y = sum_j s_j x^(3-j) at inf+ (inf- has -s_j).
    const std::vector<F>& infinity_expansion() const {
        if (!expansion_) throw Error(ErrorCode::NotASquare, "leading coefficient is not a square");
        return *expansion_;
    }

    MumfordDivisor<F> identity() const {
        return {Poly<F>::constant(field().one()), Poly<F>(field()), 0, 0};
    }

    bool is_valid(const MumfordDivisor<F>& D) const {
        if (D.u.is_zero() || !(D.u.lead() == field().one())) return false;
        if (D.inf_plus < 0 || D.inf_minus < 0 || std::min(D.inf_plus, D.inf_minus) != 0) return false;
        if ((D.inf_plus || D.inf_minus) && !rational_infinity()) return false;
        const int total = D.u.degree() + D.inf_plus + D.inf_minus;
        if (total != 0 && total != 2) return false;
        if (D.v.degree() >= std::max(D.u.degree(), 1)) return false;
        if (D.u.degree() == 0) return D.v.is_zero();
        return ((D.v * D.v - h_) % D.u).is_zero();
    }

    MumfordDivisor<F> neg(const MumfordDivisor<F>& D) const { return {D.u, -D.v, D.inf_minus, D.inf_plus}; }

    MumfordDivisor<F> add(const MumfordDivisor<F>& D, const MumfordDivisor<F>& E) const {
        if (D.is_identity()) return E;
        if (E.is_identity()) return D;
        MumfordDivisor<F> sum = compose(D, E);
        const int total = sum.u.degree() + sum.inf_plus + sum.inf_minus;
        if (total <= 2) return sum;
        return reduce(sum);
    }

    MumfordDivisor<F> dbl(const MumfordDivisor<F>& D) const { return add(D, D); }

    /// k*D for any integer k (negative k multiplies -D).
    MumfordDivisor<F> scalar_mul(const mpz_class& k, const MumfordDivisor<F>& D) const {
        const MumfordDivisor<F> base = k < 0 ? neg(D) : D;
        const mpz_class n = abs(k);
        MumfordDivisor<F> r = identity();
        for (std::size_t i = mpz_sizeinbase(n.get_mpz_t(), 2); i-- > 0;) {
            r = dbl(r);
            if (mpz_tstbit(n.get_mpz_t(), i)) r = add(r, base);
        }
        return r;
    }

    /// Uniform x with h(x) a square, y = +-sqrt(h(x)) with a random sign.
    std::pair<F, F> random_point(Rng& rng) const {
        for (;;) {
            F x = field().random(rng);
            if (auto y = try_sqrt(h_(x))) return {x, rng.coin() ? -*y : *y};
        }
    }

    /// Weight-2 divisor (x1,y1) + (x2,y2) with x1 != x2.
    MumfordDivisor<F> random_divisor(Rng& rng) const {
        for (;;) {
            auto [x1, y1] = random_point(rng);
            auto [x2, y2] = random_point(rng);
            if (x1 == x2) continue;
            return from_points(x1, y1, x2, y2);
        }
    }

    MumfordDivisor<F> from_points(const F& x1, const F& y1, const F& x2, const F& y2) const {
        if (x1 == x2) throw Error(ErrorCode::InvalidPoint, "from_points needs distinct x-coordinates");
        const F slope = (y1 - y2) / (x1 - x2);
        return {Poly<F>::linear_root(x1) * Poly<F>::linear_root(x2), Poly<F>(field(), {y1 - slope * x1, slope}), 0, 0};
    }

    /// Weight-1 class (x1,y1) + inf+ (plus = true) or + inf-, minus D_inf.
    MumfordDivisor<F> from_point_and_infinity(const F& x1, const F& y1, bool plus) const {
        infinity_expansion();
        return {Poly<F>::linear_root(x1), Poly<F>::constant(y1), plus ? 1 : 0, plus ? 0 : 1};
    }

private:
    // Power-series square root of h(1/t) t^6 = h6 + h5 t + ... around t = 0.
    std::vector<F> infinity_series(const F& s) const {
        std::vector<F> series{s};
        const F inv2s = (field().element(2) * s).inverse();
        for (std::size_t n = 1; n <= 6; ++n) {
            F acc = h_[6 - n];
            for (std::size_t i = 1; i < n; ++i) acc = acc - series[i] * series[n - i];
            series.push_back(acc * inv2s);
        }
        return series;
    }

    // Cantor composition followed by cancellation of inf+ + inf- pairs.
    MumfordDivisor<F> compose(const MumfordDivisor<F>& D, const MumfordDivisor<F>& E) const {
        const auto g1 = extended_gcd(D.u, E.u);
        const auto g2 = extended_gcd(g1.g, D.v + E.v);
        const Poly<F>& d = g2.g;
        const Poly<F> s1 = g2.s * g1.s;
        const Poly<F> s2 = g2.s * g1.t;
        const Poly<F>& s3 = g2.t;
        const Poly<F> u = (D.u * E.u) / (d * d);
        Poly<F> v = (s1 * D.u * E.v + s2 * E.u * D.v + s3 * (D.v * E.v + h_)) / d;
        v = u.degree() > 0 ? v % u : Poly<F>(field());
        int n = D.inf_plus + E.inf_plus;
        int m = D.inf_minus + E.inf_minus;
        const int pairs = std::min(n, m);
        return {u, v, n - pairs, m - pairs};
    }

    // Reduces an effective degree-4 representative via the cubic y = c(x)
    // through its support (with prescribed leading behaviour at infinity).
    MumfordDivisor<F> reduce(const MumfordDivisor<F>& D) const {
        const auto& k = field();
        const int du = D.u.degree();
        std::vector<std::array<F, 5>> rows;
        for (int i = 0; i < du; ++i) {
            std::array<F, 5> row{k.zero(), k.zero(), k.zero(), k.zero(), D.v[static_cast<std::size_t>(i)]};
            for (std::size_t j = 0; j < 4; ++j) row[j] = (Poly<F>::monomial(k, j) % D.u)[static_cast<std::size_t>(i)];
            rows.push_back(row);
        }
        for (int sign : {1, -1}) {
            const int count = sign > 0 ? D.inf_plus : D.inf_minus;
            for (int t = 0; t < count; ++t) {
                std::array<F, 5> row{k.zero(), k.zero(), k.zero(), k.zero(), k.zero()};
                row[static_cast<std::size_t>(3 - t)] = k.one();
                const F& s = infinity_expansion()[static_cast<std::size_t>(t)];
                row[4] = sign > 0 ? s : -s;
                rows.push_back(row);
            }
        }
        const auto solution = solve4(rows);
        if (!solution) {
            throw Error(ErrorCode::UnsupportedDegenerateConfiguration, "singular interpolation system in reduction");
        }
        const Poly<F> c(k, {(*solution)[0], (*solution)[1], (*solution)[2], (*solution)[3]});
        const auto [q, rem] = divmod(c * c - h_, D.u);
        if (!rem.is_zero()) throw Error(ErrorCode::UnsupportedDegenerateConfiguration, "residual not divisible");

        int zero_plus = 0, zero_minus = 0;
        if (rational_infinity()) {
            zero_plus = contact_order(c, 1) - D.inf_plus;
            zero_minus = contact_order(c, -1) - D.inf_minus;
        }
        const Poly<F> qm = q.monic();
        if (qm.degree() + zero_plus + zero_minus != 2 || zero_plus < 0 || zero_minus < 0) {
            throw Error(ErrorCode::UnsupportedDegenerateConfiguration, "unexpected residual degree");
        }
        Poly<F> v = qm.degree() > 0 ? (-c) % qm : Poly<F>(k);
        // The residual divisor R satisfies D ~ -R; negation swaps inf+ and inf-.
        MumfordDivisor<F> r{qm, v, zero_minus, zero_plus};
        if (r.inf_plus && r.inf_minus) {
            throw Error(ErrorCode::UnsupportedDegenerateConfiguration, "residual contains both points at infinity");
        }
        return r;
    }

    // Number of leading terms on which y = c(x) agrees with the branch at inf+-.
    int contact_order(const Poly<F>& c, int sign) const {
        const auto& s = infinity_expansion();
        int order = 0;
        for (int j = 0; j < 7; ++j) {
            const F cj = 3 - j >= 0 ? c[static_cast<std::size_t>(3 - j)] : field().zero();
            const F target = sign > 0 ? s[static_cast<std::size_t>(j)] : -s[static_cast<std::size_t>(j)];
            if (!(cj == target)) break;
            ++order;
        }
        return order;
    }

    static std::optional<std::array<F, 4>> solve4(std::vector<std::array<F, 5>> rows) {
        if (rows.size() != 4) return std::nullopt;
        for (std::size_t col = 0; col < 4; ++col) {
            std::size_t piv = col;
            while (piv < 4 && rows[piv][col].is_zero()) ++piv;
            if (piv == 4) return std::nullopt;
            std::swap(rows[col], rows[piv]);
            const F inv = rows[col][col].inverse();
            for (auto& x : rows[col]) x = x * inv;
            for (std::size_t r = 0; r < 4; ++r) {
                if (r == col || rows[r][col].is_zero()) continue;
                const F factor = rows[r][col];
                for (std::size_t j = 0; j < 5; ++j) rows[r][j] = rows[r][j] - factor * rows[col][j];
            }
        }
        return std::array<F, 4>{rows[0][4], rows[1][4], rows[2][4], rows[3][4]};
    }

    Poly<F> h_;
    std::optional<std::vector<F>> expansion_;
};

/// The curve carrying the Jacobian arithmetic for a family member.
template <FieldElement F>
HyperellipticCurve<F> jacobian_curve(const CurveParams<F>& params) {
    return HyperellipticCurve<F>(params.jacobian_sextic());
}

/// The 2-torsion class attached to one of the three quadratic factors.
template <FieldElement F>
MumfordDivisor<F> torsion_E(const CurveParams<F>& p, int i) {
    const auto& k = p.field;
    Poly<F> u(k);
    switch (i) {
    case 1: u = Poly<F>(k, {p.b * p.b * p.f - p.d * p.e, -(k.element(2) * p.g), p.f + k.one()}); break;
    case 2: u = Poly<F>(k, {-(p.b * p.b * p.d), k.zero(), k.one()}); break;
    case 3: u = Poly<F>(k, {p.e, k.zero(), k.one()}); break;
    default: throw Error(ErrorCode::InvalidParams, "torsion index must be 1, 2 or 3");
    }
    return {u.monic(), Poly<F>(k), 0, 0};
}

/// Every K-rational divisor class of the curve, by listing reduced
/// representatives. Quadratic in p; meant for small fields.
template <FieldElement F>
std::vector<MumfordDivisor<F>> enumerate_divisors(const HyperellipticCurve<F>& C) {
    const auto& k = C.field();
    const auto& h = C.h();
    const mpz_class p = k.modulus();
    const QuadExtField<F> ext(k);
    std::vector<MumfordDivisor<F>> out{C.identity()};
    const F half = k.element(2).inverse();
    const Poly<F> hprime = h.derivative();

    std::vector<F> elements;
    for (mpz_class x = 0; x < p; ++x) elements.push_back(k.from_integer(x));

    for (const F& u1 : elements) {
        for (const F& u0 : elements) {
            const Poly<F> u(k, {u0, u1, k.one()});
            const F disc = u1 * u1 - k.element(4) * u0;
            const int leg = legendre(disc);
            if (leg > 0) {
                const F r = sqrt(disc);
                const F x1 = (-u1 + r) * half;
                const F x2 = (-u1 - r) * half;
                const auto y1 = try_sqrt(h(x1));
                const auto y2 = try_sqrt(h(x2));
                if (!y1 || !y2) continue;
                const F slope_base = (x1 - x2).inverse();
                for (int s1 = 0; s1 < (y1->is_zero() ? 1 : 2); ++s1) {
                    for (int s2 = 0; s2 < (y2->is_zero() ? 1 : 2); ++s2) {
                        const F a1 = s1 ? -*y1 : *y1;
                        const F a2 = s2 ? -*y2 : *y2;
                        const F slope = (a1 - a2) * slope_base;
                        out.push_back({u, Poly<F>(k, {a1 - slope * x1, slope}), 0, 0});
                    }
                }
            } else if (leg == 0) {
                const F x0 = -u1 * half;
                const auto y0 = try_sqrt(h(x0));
                if (!y0 || y0->is_zero()) continue;
                for (const F& y : {*y0, -*y0}) {
                    const F v1 = hprime(x0) / (k.element(2) * y);
                    out.push_back({u, Poly<F>(k, {y - v1 * x0, v1}), 0, 0});
                }
            } else {
                // Conjugate roots alpha, alpha-bar in F_p(sqrt n).
                const F t = sqrt(disc / ext.nonresidue());
                const QuadExt<F> alpha = ext.make(-u1 * half, t * half);
                QuadExt<F> halpha = ext.embed(k.zero());
                for (std::size_t i = 7; i-- > 0;) halpha = halpha * alpha + ext.embed(h[i]);
                const auto beta = ext.try_sqrt(halpha);
                if (!beta) continue;
                if (beta->is_zero()) {
                    out.push_back({u, Poly<F>(k), 0, 0});
                    continue;
                }
                for (const QuadExt<F>& b : {*beta, -*beta}) {
                    const F v1 = b.imag() / alpha.imag();
                    const F v0 = b.real() - v1 * alpha.real();
                    out.push_back({u, Poly<F>(k, {v0, v1}), 0, 0});
                }
            }
        }
    }

    if (C.rational_infinity()) {
        for (const F& x : elements) {
            const auto y = try_sqrt(h(x));
            if (!y) continue;
            for (int s = 0; s < (y->is_zero() ? 1 : 2); ++s) {
                const F yy = s ? -*y : *y;
                out.push_back(C.from_point_and_infinity(x, yy, true));
                out.push_back(C.from_point_and_infinity(x, yy, false));
            }
        }
        out.push_back({Poly<F>::constant(k.one()), Poly<F>(k), 2, 0});
        out.push_back({Poly<F>::constant(k.one()), Poly<F>(k), 0, 2});
    }
    return out;
}

} // namespace edwardsg2
