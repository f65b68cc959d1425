#pragma once

#include <array>

#include "edwardsg2/divisor.hpp"
#include "edwardsg2/family.hpp"
#include "edwardsg2/projective.hpp"

namespace edwardsg2 {

/// Coefficients R, S, T of the Kummer quartic R k4^2 + S k4 + T in terms of
/// (k1, k2, k3) and the sextic f0..f6.
template <FieldElement F>
std::array<F, 3> kummer_quartic_coefficients(const std::array<F, 7>& f, const F& k1, const F& k2, const F& k3) {
    const auto k = k1.field();
    auto n = [&](std::int64_t v) { return k.element(v); };
    const F &f0 = f[0], &f1 = f[1], &f2 = f[2], &f3 = f[3], &f4 = f[4], &f5 = f[5], &f6 = f[6];
    const F k1_2 = k1 * k1, k2_2 = k2 * k2, k3_2 = k3 * k3;
    const F k1_3 = k1_2 * k1, k2_3 = k2_2 * k2, k3_3 = k3_2 * k3;
    const F k1_4 = k1_2 * k1_2, k2_4 = k2_2 * k2_2, k3_4 = k3_2 * k3_2;

    const F R = k2_2 - n(4) * k1 * k3;
    const F S = n(-2) * (n(2) * k1_3 * f0 + k1_2 * k2 * f1 + n(2) * k1_2 * k3 * f2 + k1 * k2 * k3 * f3 +
                         n(2) * k1 * k3_2 * f4 + k2 * k3_2 * f5 + n(2) * k3_3 * f6);
    const F T = n(-4) * k1_4 * f0 * f2 + k1_4 * f1 * f1 - n(4) * k1_3 * k2 * f0 * f3 - n(2) * k1_3 * k3 * f1 * f3 -
                n(4) * k1_2 * k2_2 * f0 * f4 + n(4) * k1_2 * k2 * k3 * f0 * f5 - n(4) * k1_2 * k2 * k3 * f1 * f4 -
                n(4) * k1_2 * k3_2 * f0 * f6 + n(2) * k1_2 * k3_2 * f1 * f5 - n(4) * k1_2 * k3_2 * f2 * f4 +
                k1_2 * k3_2 * f3 * f3 - n(4) * k1 * k2_3 * f0 * f5 + n(8) * k1 * k2_2 * k3 * f0 * f6 -
                n(4) * k2_4 * f0 * f6 - n(4) * k1 * k2_2 * k3 * f1 * f5 + n(4) * k1 * k2 * k3_2 * f1 * f6 -
                n(4) * k1 * k2 * k3_2 * f2 * f5 - n(2) * k1 * k3_3 * f3 * f5 - n(4) * k2_3 * k3 * f1 * f6 -
                n(4) * k2_2 * k3_2 * f2 * f6 - n(4) * k2 * k3_3 * f3 * f6 - n(4) * k3_4 * f4 * f6 + k3_4 * f5 * f5;
    return {R, S, T};
}

/// The change of basis l = Q k that diagonalises translation by E_1, E_2.
template <FieldElement F>
Mat4<F> kummer_change_of_basis(const CurveParams<F>& p) {
    const auto k = p.field;
    auto n = [&](std::int64_t v) { return k.element(v); };
    const F &a = p.a, &b = p.b, &c = p.c, &d = p.d, &e = p.e, &g = p.g;
    const F a2 = a * a, c2 = c * c, b2 = b * b, b4 = b2 * b2, g2 = g * g;
    const F one = k.one();
    return Mat4<F>{{
        {n(2) * g * b2 * e * (b4 * c2 - n(2) * b2 * c2 + n(2) * b2 * c + c2 + a - c),
         n(-2) * g2 * b2 * e,
         n(2) * g * (a2 * b2 + a * b2 * c - b4 * c - a2 - n(2) * a * b2 - a * c + a),
         one},
        {n(-2) * g * d * (a2 * b4 - n(2) * a2 * b2 - a * b4 + b4 * c + a2 + n(2) * a * b2),
         n(2) * g2 * d,
         n(-2) * g * (a * b4 * c + b4 * c2 - a * b2 * c - b4 * c - b2 * c2 + n(2) * b2 * c + a),
         one},
        {n(2) * g * b2 *
             (a2 * b4 * c + a * b4 * c2 - n(2) * a2 * b2 * c - n(2) * a * b4 * c - n(2) * a * b2 * c2 + a2 * c +
              n(4) * a * b2 * c + a * c2 + b4 * c - n(2) * a * c + a),
         n(-2) * b2 * g2,
         n(2) * g * (a * b4 * c - n(2) * a * b2 * c + a * b2 + a * c + b2 * c),
         -one},
        {n(-2) * g * d * e * (b4 * c + a),
         n(2) * g2 * d * e,
         n(-2) * g * (-b4 * c2 + a2 * b2 + b2 * c2 - a2 - a * b2 - b2 * c),
         -one},
    }};
}

/// Residual of the diagonalised Kummer quartic at l.
template <FieldElement F>
F l_quartic_eval(const CurveParams<F>& p, const LPoint<F>& l) {
    const F &a = p.a, &b = p.b, &c = p.c, &d = p.d, &e = p.e, &f = p.f, &g = p.g;
    const F &l1 = l[0], &l2 = l[1], &l3 = l[2], &l4 = l[3];
    const F ac = a * c, b2 = b * b;
    const F first = b * g * (ac * l1 * l2 - f * l3 * l4);
    const F second = b2 * (ac * (f * l1 * l1 - e * l2 * l2) + c * e * f * l3 * l3 - a * f * l4 * l4);
    const F third = ac * (d * l1 * l1 + b2 * f * l2 * l2) - f * (a * d * l3 * l3 + b2 * c * l4 * l4);
    return first * first - second * third;
}

/// The Kummer surface of a family member: the Jacobian curve, Q and Q^{-1},
/// and the maps between divisors, k-coordinates and l-coordinates.
///
/// k4 is normalised for the printed sextic: it equals the k4 of the
/// Jacobian curve y^2 = ac*sextic divided by ac, so both models give the
/// same point and the printed quartic and Q apply unchanged.
template <FieldElement F>
class KummerSurface {
public:
    explicit KummerSurface(CurveParams<F> params)
        : params_(std::move(params)),
          curve_(jacobian_curve(params_)),
          lambda_(params_.twist_factor()),
          lambda_inv_(lambda_.inverse()),
          q_(kummer_change_of_basis(params_)),
          q_inv_(invert(q_)) {}

    const CurveParams<F>& params() const { return params_; }
    const HyperellipticCurve<F>& curve() const { return curve_; }
    const Mat4<F>& Q() const { return q_; }
    const Mat4<F>& Q_inverse() const { return q_inv_; }

    KummerPoint<F> from_mumford(const MumfordDivisor<F>& D) const {
        const auto& k = params_.field;
        const Poly<F>& h = curve_.h();
        if (D.is_identity()) return {k.zero(), k.zero(), k.zero(), k.one()};
        if (D.u.degree() == 2) {
            const Poly<F> w = (h - D.v * D.v) / D.u;
            const F u0 = D.u[0];
            const F k4 = -(w[0] + u0 * w[2] + u0 * u0 * w[4]);
            return {k.one(), -D.u[1], u0, k4 * lambda_inv_};
        }
        const F s = curve_.infinity_expansion()[0];
        if (D.u.degree() == 1) {
            const F x1 = -D.u[0];
            const F y1 = D.v[0];
            const F sy = D.inf_plus ? -(s * y1) : s * y1;
            const F k4 = k.element(2) * (h[6] * x1 * x1 * x1 + sy) + h[5] * x1 * x1;
            return {k.zero(), k.one(), x1, k4 * lambda_inv_};
        }
        // 2 inf+ or 2 inf-
        const F k4 = h[5] * h[5] / (k.element(4) * h[6]) - h[4];
        return {k.zero(), k.zero(), k.one(), k4 * lambda_inv_};
    }

    F quartic(const KummerPoint<F>& kp) const {
        const auto [R, S, T] = kummer_quartic_coefficients(params_.sextic, kp[0], kp[1], kp[2]);
        return (R * kp[3] + S) * kp[3] + T;
    }

    LPoint<F> to_l(const KummerPoint<F>& kp) const { return mat_vec(q_, kp); }
    KummerPoint<F> from_l(const LPoint<F>& l) const { return mat_vec(q_inv_, l); }

    LPoint<F> l_of(const MumfordDivisor<F>& D) const { return to_l(from_mumford(D)); }

    /// The two divisor classes {D, -D} over a Kummer point. Throws
    /// NonRationalPreimage when they are not defined over K.
    std::array<MumfordDivisor<F>, 2> to_mumford(const KummerPoint<F>& kp) const {
        MumfordDivisor<F> D = lift(kp);
        if (!proj_equal(from_mumford(D), kp)) {
            throw Error(ErrorCode::InvalidPoint, "point is not on the Kummer surface");
        }
        return {D, curve_.neg(D)};
    }

    /// The order-4 class with l(D_1) = [b, 1, 0, 0]; of the two lifts, the
    /// one whose v has the smaller leading coefficient representative.
    MumfordDivisor<F> make_d1() const {
        const auto& k = params_.field;
        std::array<MumfordDivisor<F>, 2> pair = [&] {
            try {
                return to_mumford(from_l({params_.b, k.one(), k.zero(), k.zero()}));
            } catch (const Error& err) {
                if (err.code() != ErrorCode::NonRationalPreimage) throw;
                throw Error(ErrorCode::LiftFailed, "D_1 is not defined over the ground field");
            }
        }();
        const F lead = pair[0].v.lead();
        const mpz_class half = (k.modulus() - 1) / 2;
        return lead.integer() <= half ? pair[0] : pair[1];
    }

private:
    static Mat4<F> invert(const Mat4<F>& m) {
        auto inv = mat_inverse(m);
        if (!inv) throw Error(ErrorCode::SingularQ, "change of basis is singular");
        return *inv;
    }

    MumfordDivisor<F> lift(const KummerPoint<F>& kp) const {
        const auto& k = params_.field;
        const Poly<F>& h = curve_.h();
        const F two = k.element(2);
        auto non_rational = [] { return Error(ErrorCode::NonRationalPreimage, "preimage needs a square root outside K"); };

        if (kp[0].is_zero()) {
            if (kp[1].is_zero() && kp[2].is_zero()) {
                if (kp[3].is_zero()) throw Error(ErrorCode::InvalidPoint, "zero Kummer tuple");
                return curve_.identity();
            }
            if (!curve_.rational_infinity()) throw non_rational();
            const F s = curve_.infinity_expansion()[0];
            if (kp[1].is_zero()) return {Poly<F>::constant(k.one()), Poly<F>(k), 2, 0};
            const F x1 = kp[2] / kp[1];
            const F k4 = lambda_ * kp[3] / kp[1];
            // k4 = 2 h6 x1^3 + h5 x1^2 - 2 s y1 for (x1, y1) + inf+
            const F y1 = (two * h[6] * x1 * x1 * x1 + h[5] * x1 * x1 - k4) / (two * s);
            if (!(y1 * y1 == h(x1))) throw Error(ErrorCode::InvalidPoint, "point is not on the Kummer surface");
            return curve_.from_point_and_infinity(x1, y1, true);
        }

        const F inv1 = kp[0].inverse();
        const F s1 = kp[1] * inv1;
        const F s2 = kp[2] * inv1;
        const F k4 = kp[3] * inv1 * lambda_;
        const Poly<F> u(k, {s2, -s1, k.one()});
        const F disc = s1 * s1 - k.element(4) * s2;
        if (!disc.is_zero()) {
            const Poly<F> hm = h % u;
            const F B = hm[0], A = hm[1];
            const F F0 = two * h[0] + h[1] * s1 + two * h[2] * s2 + h[3] * s2 * s1 + two * h[4] * s2 * s2 +
                         h[5] * s2 * s2 * s1 + two * h[6] * s2 * s2 * s2;
            const F half = two.inverse();
            const F P = (F0 - k4 * disc) * half;
            // v = v1 x + v0 with v^2 = h mod u: v1^2 = X, 2 v0 v1 = Y, v0^2 = Z
            const F X = -two * (P - B - s1 * A * half) / disc;
            const F Y = (A - s1 * X) * half;
            const F Z = B + s2 * X;
            if (!X.is_zero()) {
                const auto v1 = try_sqrt(X);
                if (!v1) throw non_rational();
                return {u, Poly<F>(k, {Y / *v1, *v1}), 0, 0};
            }
            const auto v0 = try_sqrt(Z);
            if (!v0) throw non_rational();
            return {u, Poly<F>(k, {*v0}), 0, 0};
        }
        const F x0 = s1 * two.inverse();
        const auto y0 = try_sqrt(h(x0));
        if (!y0) throw non_rational();
        if (y0->is_zero()) throw Error(ErrorCode::InvalidPoint, "point is not on the Kummer surface");
        const F v1 = h.derivative()(x0) / (two * *y0);
        return {u, Poly<F>(k, {*y0 - v1 * x0, v1}), 0, 0};
    }

    CurveParams<F> params_;
    HyperellipticCurve<F> curve_;
    F lambda_;
    F lambda_inv_;
    Mat4<F> q_;
    Mat4<F> q_inv_;
};

} // namespace edwardsg2
