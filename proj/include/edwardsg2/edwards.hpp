#pragma once

#include <array>
#include <optional>
#include <utility>

#include "edwardsg2/field.hpp"
#include "edwardsg2/projective.hpp"

/// The elliptic miniature of the construction: y^2 = x(x^2 + 2(1+d)x + (1-d)^2)
/// embedded in P^1 x P^1 by (l(D), l(D + D_1)), where it becomes an Edwards
/// curve U^2 + Y^2 = 1 + d U^2 Y^2 with identity (1, 0).
namespace edwardsg2::edwards {

template <FieldElement F>
struct EdwardsParams {
    F d;

    static EdwardsParams make(const F& d) {
        if (d.is_zero() || d == d.field().one()) throw Error(ErrorCode::InvalidParams, "d must avoid 0 and 1");
        return {d};
    }

    F a2() const { return d.field().element(2) * (d.field().one() + d); }
    F a4() const {
        const F t = d.field().one() - d;
        return t * t;
    }
    bool universal() const { return is_nonsquare(d); }
};

template <FieldElement F>
struct WeierstrassPoint {
    bool infinity;
    F x, y;

    static WeierstrassPoint at_infinity(const typename F::field_type& k) { return {true, k.zero(), k.zero()}; }
    static WeierstrassPoint affine(const F& x, const F& y) { return {false, x, y}; }

    friend bool operator==(const WeierstrassPoint& a, const WeierstrassPoint& b) {
        if (a.infinity || b.infinity) return a.infinity == b.infinity;
        return a.x == b.x && a.y == b.y;
    }
};

template <FieldElement F>
F weierstrass_rhs(const EdwardsParams<F>& p, const F& x) {
    return x * (x * x + p.a2() * x + p.a4());
}

template <FieldElement F>
bool on_curve(const EdwardsParams<F>& p, const WeierstrassPoint<F>& P) {
    return P.infinity || P.y * P.y == weierstrass_rhs(p, P.x);
}

template <FieldElement F>
WeierstrassPoint<F> weierstrass_neg(const WeierstrassPoint<F>& P) {
    return P.infinity ? P : WeierstrassPoint<F>::affine(P.x, -P.y);
}

/// Chord-tangent addition on y^2 = x^3 + a2 x^2 + a4 x.
template <FieldElement F>
WeierstrassPoint<F> weierstrass_add(const EdwardsParams<F>& p, const WeierstrassPoint<F>& P,
                                    const WeierstrassPoint<F>& Q) {
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    const auto k = P.x.field();
    F slope = k.zero();
    if (P.x == Q.x) {
        if (!(P.y == Q.y) || P.y.is_zero()) return WeierstrassPoint<F>::at_infinity(k);
        slope = (k.element(3) * P.x * P.x + k.element(2) * p.a2() * P.x + p.a4()) / (k.element(2) * P.y);
    } else {
        slope = (Q.y - P.y) / (Q.x - P.x);
    }
    const F x3 = slope * slope - p.a2() - P.x - Q.x;
    return WeierstrassPoint<F>::affine(x3, slope * (P.x - x3) - P.y);
}

template <FieldElement F>
WeierstrassPoint<F> weierstrass_mul(const EdwardsParams<F>& p, const mpz_class& n, const WeierstrassPoint<F>& P) {
    const WeierstrassPoint<F> base = n < 0 ? weierstrass_neg(P) : P;
    const mpz_class m = abs(n);
    auto r = WeierstrassPoint<F>::at_infinity(P.x.field());
    for (std::size_t i = mpz_sizeinbase(m.get_mpz_t(), 2); i-- > 0;) {
        r = weierstrass_add(p, r, r);
        if (mpz_tstbit(m.get_mpz_t(), i)) r = weierstrass_add(p, r, base);
    }
    return r;
}

template <FieldElement F>
WeierstrassPoint<F> weierstrass_random(const EdwardsParams<F>& p, Rng& rng) {
    const auto k = p.d.field();
    for (;;) {
        const F x = k.random(rng);
        if (auto y = try_sqrt(weierstrass_rhs(p, x))) return WeierstrassPoint<F>::affine(x, rng.coin() ? -*y : *y);
    }
}

/// The order-4 point (1-d, 2(1-d)).
template <FieldElement F>
WeierstrassPoint<F> d1_point(const EdwardsParams<F>& p) {
    const F t = p.d.field().one() - p.d;
    return WeierstrassPoint<F>::affine(t, p.d.field().element(2) * t);
}

template <FieldElement F>
using Vec2 = std::array<F, 2>;

template <FieldElement F>
using Mat2 = std::array<Vec2<F>, 2>;

/// l-coordinates: k = [1, x] (or [0, 1] at infinity) mapped through the
/// inverse of [[1, -1], [1-d, 1-d]], up to the factor 2(1-d).
template <FieldElement F>
Vec2<F> l_of(const EdwardsParams<F>& p, const WeierstrassPoint<F>& P) {
    const auto k = p.d.field();
    const F t = k.one() - p.d;
    if (P.infinity) return {k.one(), k.one()};
    return {t + P.x, P.x - t};
}

/// A point ([u1, u2], [y1, y2]) of the P^1 x P^1 model.
template <FieldElement F>
struct EdwardsPoint {
    Vec2<F> u;
    Vec2<F> y;
};

template <FieldElement F>
bool point_equal(const EdwardsPoint<F>& P, const EdwardsPoint<F>& Q) {
    return proj_equal(P.u, Q.u) && proj_equal(P.y, Q.y);
}

template <FieldElement F>
EdwardsPoint<F> normalize(const EdwardsPoint<F>& P) {
    return {edwardsg2::normalize(P.u), edwardsg2::normalize(P.y)};
}

template <FieldElement F>
EdwardsPoint<F> identity(const EdwardsParams<F>& p) {
    const auto k = p.d.field();
    return {{k.one(), k.one()}, {k.one(), k.zero()}};
}

template <FieldElement F>
EdwardsPoint<F> from_weierstrass(const EdwardsParams<F>& p, const WeierstrassPoint<F>& P) {
    return normalize(EdwardsPoint<F>{l_of(p, P), l_of(p, weierstrass_add(p, P, d1_point(p)))});
}

/// Inverse of from_weierstrass: x from u, the sign of y from the y-block.
template <FieldElement F>
WeierstrassPoint<F> to_weierstrass(const EdwardsParams<F>& p, const EdwardsPoint<F>& P) {
    const auto k = p.d.field();
    const F k1 = P.u[0] - P.u[1];
    const F k2 = (k.one() - p.d) * (P.u[0] + P.u[1]);
    if (k1.is_zero()) {
        const auto O = WeierstrassPoint<F>::at_infinity(k);
        if (point_equal(from_weierstrass(p, O), P)) return O;
        throw Error(ErrorCode::InvalidPoint, "not a point of the Edwards model");
    }
    const F x = k2 / k1;
    const auto y = try_sqrt(weierstrass_rhs(p, x));
    if (!y) throw Error(ErrorCode::InvalidPoint, "not a point of the Edwards model");
    for (const F& yy : {*y, -*y}) {
        const auto W = WeierstrassPoint<F>::affine(x, yy);
        if (point_equal(from_weierstrass(p, W), P)) return W;
    }
    throw Error(ErrorCode::InvalidPoint, "not a point of the Edwards model");
}

/// (-d u2^2 + u1^2)(-y2^2) - (-u1^2 + u2^2) y1^2
template <FieldElement F>
F residual(const EdwardsParams<F>& p, const EdwardsPoint<F>& P) {
    const F u1s = P.u[0] * P.u[0], u2s = P.u[1] * P.u[1];
    const F y1s = P.y[0] * P.y[0], y2s = P.y[1] * P.y[1];
    return -((u1s - p.d * u2s) * y2s) - (u2s - u1s) * y1s;
}

template <FieldElement F>
bool is_member(const EdwardsParams<F>& p, const EdwardsPoint<F>& P) {
    return !all_zero(P.u) && !all_zero(P.y) && residual(p, P).is_zero();
}

/// Negation: (u, [y1, -y2]).
template <FieldElement F>
EdwardsPoint<F> neg(const EdwardsPoint<F>& P) {
    return {P.u, {P.y[0], -P.y[1]}};
}

template <FieldElement F>
Mat2<F> edwards_A(const EdwardsParams<F>& p, const EdwardsPoint<F>& P, const EdwardsPoint<F>& Q) {
    const F &u1 = P.u[0], &u2 = P.u[1], &y1 = P.y[0], &y2 = P.y[1];
    const F &v1 = Q.u[0], &v2 = Q.u[1], &z1 = Q.y[0], &z2 = Q.y[1];
    return Mat2<F>{{
        {u1 * v1 * y1 * z1 - p.d * u2 * v2 * y2 * z2, u1 * v2 * y2 * z1 - u2 * v1 * y1 * z2},
        {u2 * v2 * y1 * z1 - u1 * v1 * y2 * z2, u2 * v1 * y2 * z1 - u1 * v2 * y1 * z2},
    }};
}

template <FieldElement F>
Mat2<F> edwards_J(const EdwardsParams<F>& p, const EdwardsPoint<F>& P, const EdwardsPoint<F>& Q) {
    const F &u1 = P.u[0], &u2 = P.u[1], &y1 = P.y[0], &y2 = P.y[1];
    const F &v1 = Q.u[0], &v2 = Q.u[1], &z1 = Q.y[0], &z2 = Q.y[1];
    return Mat2<F>{{
        {u1 * v1 * y1 * z1 + p.d * u2 * v2 * y2 * z2, u1 * v1 * y2 * z2 + u2 * v2 * y1 * z1},
        {u1 * v2 * y2 * z1 + u2 * v1 * y1 * z2, u1 * v2 * y1 * z2 + u2 * v1 * y2 * z1},
    }};
}

enum class Strategy { FirstNonzeroColumn, Columns, Universal };

struct AddStrategy {
    Strategy kind = Strategy::FirstNonzeroColumn;
    int column_a = 0;
    int column_j = 0;

    static AddStrategy first_nonzero() { return {}; }
    static AddStrategy universal() { return {Strategy::Universal, 0, 0}; }
    static AddStrategy columns(int a, int j) {
        if (a < 0 || a > 1 || j < 0 || j > 1) throw Error(ErrorCode::InvalidParams, "column out of range");
        return {Strategy::Columns, a, j};
    }
};

template <FieldElement F>
EdwardsPoint<F> add(const EdwardsParams<F>& p, const EdwardsPoint<F>& P, const EdwardsPoint<F>& Q,
                    const AddStrategy& s = {}) {
    if (s.kind == Strategy::Universal && !p.universal()) {
        throw Error(ErrorCode::InvalidParams, "column 1 is only universal when d is a nonsquare");
    }
    const Mat2<F> A = edwards_A(p, P, Q);
    const Mat2<F> J = edwards_J(p, P, Q);
    auto col = [](const Mat2<F>& m, int j) { return Vec2<F>{m[0][j], m[1][j]}; };
    auto pick = [&](const Mat2<F>& m, int fixed) {
        if (s.kind == Strategy::FirstNonzeroColumn) {
            Vec2<F> c0 = col(m, 0);
            return all_zero(c0) ? col(m, 1) : c0;
        }
        return col(m, fixed);
    };
    const Vec2<F> u = pick(A, s.kind == Strategy::Columns ? s.column_a : 0);
    const Vec2<F> y = pick(J, s.kind == Strategy::Columns ? s.column_j : 0);
    if (all_zero(u) || all_zero(y)) throw Error(ErrorCode::DegenerateColumn, "selected Edwards column vanishes");
    return normalize(EdwardsPoint<F>{u, y});
}

/// Affine coordinates (U, Y) = (u2/u1, y2/y1).
template <FieldElement F>
std::pair<F, F> affine(const EdwardsPoint<F>& P) {
    if (P.u[0].is_zero() || P.y[0].is_zero()) throw Error(ErrorCode::InvalidPoint, "point at affine infinity");
    return {P.u[1] / P.u[0], P.y[1] / P.y[0]};
}

template <FieldElement F>
EdwardsPoint<F> from_affine(const F& U, const F& Y) {
    const F one = U.field().one();
    return {{one, U}, {one, Y}};
}

/// The four affine forms of the sum of (U, Y) and (V, Z); `which` selects
/// the column pair (A col 1 or 2, J col 1 or 2) in the order they are listed.
template <FieldElement F>
std::pair<F, F> affine_sum(const EdwardsParams<F>& p, const F& U, const F& Y, const F& V, const F& Z, int which) {
    const F one = U.field().one();
    const F t = p.d * U * V * Y * Z;
    const bool first_u = which == 0 || which == 1;
    const bool first_y = which == 0 || which == 2;
    const F su = first_u ? (U * V - Y * Z) / (one - t) : (U * Y - V * Z) / (V * Y - U * Z);
    const F sy = first_y ? (V * Y + U * Z) / (one + t) : (V * Z + U * Y) / (Y * Z + U * V);
    return {su, sy};
}

/// U^2 + kappa Y^2 - 1 - d kappa U^2 Y^2 over any ring R containing K
/// (d and kappa already lifted into R).
template <class R>
R twisted_residual_in(const R& d, const R& kappa, const R& U, const R& Y, const R& one) {
    const R U2 = U * U, Y2 = Y * Y;
    return U2 + kappa * Y2 - one - d * kappa * U2 * Y2;
}

template <FieldElement F>
F twisted_residual(const EdwardsParams<F>& p, const F& kappa, const F& U, const F& Y) {
    return twisted_residual_in(p.d, kappa, U, Y, U.field().one());
}

/// The biquadratic forms B_ij(u, v), projectively equal to
/// l_i(D+E) l_j(D-E) + l_j(D+E) l_i(D-E).
template <FieldElement F>
Mat2<F> biquadratic(const EdwardsParams<F>& p, const Vec2<F>& u, const Vec2<F>& v) {
    const F one = p.d.field().one();
    const F u1s = u[0] * u[0], u2s = u[1] * u[1], v1s = v[0] * v[0], v2s = v[1] * v[1];
    const F off = (one - p.d) * u[0] * u[1] * v[0] * v[1];
    return Mat2<F>{{
        {u1s * v1s - p.d * (u1s * v2s + u2s * v1s - u2s * v2s), off},
        {off, u1s * v2s + u2s * v1s - u1s * v1s - p.d * u2s * v2s},
    }};
}

} // namespace edwardsg2::edwards
