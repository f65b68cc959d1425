#pragma once

#include <array>
#include <algorithm>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "edwardsg2/divisor.hpp"
#include "edwardsg2/family.hpp"
#include "edwardsg2/kummer.hpp"
#include "edwardsg2/projective.hpp"

namespace edwardsg2 {

/// A point (u, y) of the P^3 x P^3 model, u = l(D), y = l(D + D_1).
template <FieldElement F>
struct ModelPoint {
    Vec4<F> u;
    Vec4<F> y;
};

template <FieldElement F>
bool model_equal(const ModelPoint<F>& P, const ModelPoint<F>& Q) {
    return proj_equal(P.u, Q.u) && proj_equal(P.y, Q.y);
}

template <FieldElement F>
ModelPoint<F> normalize(const ModelPoint<F>& P) {
    return {normalize(P.u), normalize(P.y)};
}

// ---------------------------------------------------------------------------
// Quadrics and defining equations, generic over the coefficient ring so the
// same code evaluates twisted residuals and points over F_{p^2}.

namespace detail {

struct IdentityLift {
    template <class T>
    const T& operator()(const T& x) const { return x; }
};

} // namespace detail

/// r_1..r_6 at u (the six entries M11, M12, M22, M33, M34, M44); applied to
/// y they give s_1..s_6.
template <FieldElement F, class R, class Lift = detail::IdentityLift>
std::array<R, 6> r_quadrics(const CurveParams<F>& p, const std::array<R, 4>& u, Lift L = {}) {
    const R a = L(p.a), b = L(p.b), c = L(p.c), d = L(p.d), e = L(p.e), f = L(p.f), g = L(p.g);
    const R &u1 = u[0], &u2 = u[1], &u3 = u[2], &u4 = u[3];
    const R s11 = u1 * u1, s22 = u2 * u2, s33 = u3 * u3, s44 = u4 * u4;
    const R ac = a * c, b2 = b * b;
    return {
        b2 * (ac * (e * s22 - f * s11) - c * e * f * s33 + a * f * s44),
        -(b * g * (ac * u1 * u2 - f * u3 * u4)),
        f * (a * d * s33 + b2 * c * s44) - ac * (d * s11 + b2 * f * s22),
        a * b2 * c * (c * s11 + a * s22 - f * s33 - s44),
        ac * b * g * (u1 * u2 - u3 * u4),
        ac * (a * d * s11 - b2 * c * e * s22 + d * e * s33 - b2 * f * s44),
    };
}

/// Bidegrees (in u, in y) of the fifteen defining forms, in list order.
inline constexpr std::array<std::pair<int, int>, 15> defining_bidegrees{{
    {4, 0}, {0, 4},
    {1, 2}, {1, 2}, {1, 2}, {1, 2},
    {2, 1}, {2, 1}, {2, 1}, {2, 1},
    {2, 2}, {2, 2}, {2, 2}, {2, 2}, {2, 2},
}};

/// The fifteen defining forms of the model evaluated at (u, y).
template <FieldElement F, class R, class Lift = detail::IdentityLift>
std::array<R, 15> defining_residuals(const CurveParams<F>& p, const std::array<R, 4>& u, const std::array<R, 4>& y,
                                     Lift L = {}) {
    const auto r = r_quadrics(p, u, L);
    const auto s = r_quadrics(p, y, L);
    const R a = L(p.a), b = L(p.b), c = L(p.c), e = L(p.e), f = L(p.f);
    const R &u1 = u[0], &u2 = u[1], &u3 = u[2], &u4 = u[3];
    const R &y1 = y[0], &y2 = y[1], &y3 = y[2], &y4 = y[3];
    return {
        r[1] * r[1] - r[0] * r[2],
        s[1] * s[1] - s[0] * s[2],
        u2 * s[0] - u1 * s[1],
        u2 * s[1] - u1 * s[2],
        u4 * s[3] - u3 * s[4],
        u4 * s[4] - u3 * s[5],
        y2 * r[0] - y1 * r[1],
        y2 * r[1] - y1 * r[2],
        y4 * r[3] - y3 * r[4],
        y4 * r[4] - y3 * r[5],
        r[0] * y3 * y3 + r[3] * y1 * y1,
        r[0] * y4 * y4 + r[5] * y1 * y1,
        r[1] * y3 * y4 + r[4] * y1 * y2,
        a * (b * u2 * y1 - u1 * y2) * (b * u4 * y3 - u3 * y4) - (e * u3 * y2 + b * u4 * y1) * (b * u2 * y3 - u1 * y4),
        c * (e * u3 * y3 + b * u4 * y4) * (b * u2 * y2 - u1 * y1) - f * (b * u2 * y4 - u1 * y3) * (b * u4 * y2 - u3 * y1),
    };
}

// ---------------------------------------------------------------------------
// Law matrices

namespace detail {

// The ten printed entries A_ij, i <= j (1-based), at P = (u, y), Q = (v, z).
template <FieldElement F>
F a_upper(const CurveParams<F>& p, int i, int j, const Vec4<F>& u, const Vec4<F>& y, const Vec4<F>& v,
          const Vec4<F>& z) {
    const F &a = p.a, &b = p.b, &c = p.c, &d = p.d, &e = p.e, &f = p.f;
    const F &u1 = u[0], &u2 = u[1], &u3 = u[2], &u4 = u[3];
    const F &y1 = y[0], &y2 = y[1], &y3 = y[2], &y4 = y[3];
    const F &v1 = v[0], &v2 = v[1], &v3 = v[2], &v4 = v[3];
    const F &z1 = z[0], &z2 = z[1], &z3 = z[2], &z4 = z[3];
    switch (10 * i + j) {
    case 11:
        return -(a * b * c * (u1 * y1 * (d * v1 * z1 + b * e * v2 * z2) + b * e * u2 * y2 * (v1 * z1 - b * v2 * z2))) -
               b * f * (e * u3 * y3 * (d * v3 * z3 - b * v4 * z4) - b * u4 * y4 * (e * v3 * z3 + b * v4 * z4));
    case 12:
        return a * b * b * c * f * (u1 * y2 * (v1 * z2 - b * v2 * z1) - u2 * y1 * (b * v1 * z2 - v2 * z1)) +
               b * b * f * f * (u4 * y3 * (b * v3 * z4 - v4 * z3) - u3 * y4 * (v3 * z4 - b * v4 * z3));
    case 13:
        return a * b * f * (u1 * y3 * (d * v3 * z1 - b * v4 * z2) - u3 * y1 * (d * v1 * z3 - b * v2 * z4)) +
               a * b * b * f * (u4 * y2 * (v1 * z3 - b * v2 * z4) - u2 * y4 * (v3 * z1 - b * v4 * z2));
    case 14:
        return b * b * c * f * (u1 * y4 * (b * v4 * z1 + e * v3 * z2) - u4 * y1 * (b * v1 * z4 + e * v2 * z3)) +
               b * b * c * e * f * (u2 * y3 * (v4 * z1 - b * v3 * z2) - u3 * y2 * (v1 * z4 - b * v2 * z3));
    case 22:
        return a * c * (d * u1 * y1 * (v1 * z1 - b * v2 * z2) - b * u2 * y2 * (d * v1 * z1 + b * e * v2 * z2)) +
               f * (d * u3 * y3 * (e * v3 * z3 + b * v4 * z4) + b * u4 * y4 * (d * v3 * z3 - b * v4 * z4));
    case 23:
        return b * b * c * f * (u4 * y1 * (v1 * z4 - b * v2 * z3) - u1 * y4 * (v4 * z1 - b * v3 * z2)) +
               b * b * c * f * (u2 * y3 * (b * v4 * z1 + e * v3 * z2) - u3 * y2 * (b * v1 * z4 + e * v2 * z3));
    case 24:
        return a * d * f * (u3 * y1 * (v1 * z3 - b * v2 * z4) - u1 * y3 * (v3 * z1 - b * v4 * z2)) +
               a * b * f * (u2 * y4 * (d * v3 * z1 - b * v4 * z2) - u4 * y2 * (d * v1 * z3 - b * v2 * z4));
    case 33:
        return a * b * c * (u1 * y1 * (d * v3 * z3 - b * v4 * z4) + b * u2 * y2 * (e * v3 * z3 + b * v4 * z4)) -
               a * b * c * (u3 * y3 * (d * v1 * z1 + b * e * v2 * z2) - b * u4 * y4 * (v1 * z1 - b * v2 * z2));
    case 34:
        return a * b * b * c * f * (u2 * y1 * (b * v3 * z4 - v4 * z3) - u1 * y2 * (v3 * z4 - b * v4 * z3)) +
               a * b * b * c * f * (u3 * y4 * (v1 * z2 - b * v2 * z1) - u4 * y3 * (b * v1 * z2 - v2 * z1));
    case 44:
        return a * c * (d * u1 * y1 * (e * v3 * z3 + b * v4 * z4) - b * e * u2 * y2 * (d * v3 * z3 - b * v4 * z4)) -
               a * c * (d * e * u3 * y3 * (v1 * z1 - b * v2 * z2) + b * u4 * y4 * (d * v1 * z1 + b * e * v2 * z2));
    default:
        throw Error(ErrorCode::InvalidParams, "law matrix index out of range");
    }
}

} // namespace detail

/// Entry A_ij (1-based) of the law matrix whose columns give l(D+E).
/// Entries below the diagonal use A_ij(D, E) = A_ji(-D-D_1, E), where
/// -D-D_1 has model coordinates (y, u).
template <FieldElement F>
F a_entry(const CurveParams<F>& p, int i, int j, const ModelPoint<F>& P, const ModelPoint<F>& Q) {
    if (i <= j) return detail::a_upper(p, i, j, P.u, P.y, Q.u, Q.y);
    return detail::a_upper(p, j, i, P.y, P.u, Q.u, Q.y);
}

/// Entry J_ij of the law matrix whose columns give l(D+E+D_1): A_ji with
/// z_3, z_4 negated.
template <FieldElement F>
F j_entry(const CurveParams<F>& p, int i, int j, const ModelPoint<F>& P, const ModelPoint<F>& Q) {
    const ModelPoint<F> Qn{Q.u, {Q.y[0], Q.y[1], -Q.y[2], -Q.y[3]}};
    return a_entry(p, j, i, P, Qn);
}

enum class LawTag { A, J };

template <FieldElement F>
struct LawMatrix {
    LawTag tag;
    Mat4<F> m;

    Vec4<F> column(int j) const { return {m[0][j], m[1][j], m[2][j], m[3][j]}; }

    bool rank_at_most_one() const {
        for (int i = 0; i < 4; ++i)
            for (int k = i + 1; k < 4; ++k)
                for (int j = 0; j < 4; ++j)
                    for (int l = j + 1; l < 4; ++l)
                        if (!(m[i][j] * m[k][l] == m[i][l] * m[k][j])) return false;
        return true;
    }
};

template <FieldElement F>
LawMatrix<F> A_matrix(const CurveParams<F>& p, const ModelPoint<F>& P, const ModelPoint<F>& Q) {
    Mat4<F> m{P.u, P.u, P.u, P.u};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m[i][j] = a_entry(p, i + 1, j + 1, P, Q);
    return {LawTag::A, m};
}

template <FieldElement F>
LawMatrix<F> J_matrix(const CurveParams<F>& p, const ModelPoint<F>& P, const ModelPoint<F>& Q) {
    Mat4<F> m{P.u, P.u, P.u, P.u};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m[i][j] = j_entry(p, i + 1, j + 1, P, Q);
    return {LawTag::J, m};
}

// ---------------------------------------------------------------------------
// Addition strategies

enum class StrategyKind { FirstNonzeroColumn, Columns, LinearComb, Universal };

template <FieldElement F>
struct AddStrategy {
    StrategyKind kind = StrategyKind::FirstNonzeroColumn;
    int column_a = 0;  // 0-based, for Columns
    int column_j = 0;
    std::vector<F> comb_a;  // four coefficients, for LinearComb
    std::vector<F> comb_j;

    static AddStrategy first_nonzero() { return {}; }
    static AddStrategy universal() { return {StrategyKind::Universal, 0, 0, {}, {}}; }
    static AddStrategy columns(int j_a, int j_j) {
        if (j_a < 0 || j_a > 3 || j_j < 0 || j_j > 3) throw Error(ErrorCode::InvalidParams, "column out of range");
        return {StrategyKind::Columns, j_a, j_j, {}, {}};
    }
    static AddStrategy linear_comb(std::vector<F> ca, std::vector<F> cj) {
        if (ca.size() != 4 || cj.size() != 4) throw Error(ErrorCode::InvalidParams, "need four coefficients");
        return {StrategyKind::LinearComb, 0, 0, std::move(ca), std::move(cj)};
    }
};

/// Signed permutation of the eight coordinates (u1..u4, y1..y4), taken up to
/// rescaling each block by -1. Used for the symmetry maps of the model.
struct SignedPermutation {
    std::array<int, 8> source{0, 1, 2, 3, 4, 5, 6, 7};  // output i reads input source[i]
    std::array<int, 8> sign{1, 1, 1, 1, 1, 1, 1, 1};

    /// (this * other)(x) = this(other(x))
    SignedPermutation compose(const SignedPermutation& other) const {
        SignedPermutation r;
        for (int i = 0; i < 8; ++i) {
            r.source[i] = other.source[source[i]];
            r.sign[i] = sign[i] * other.sign[source[i]];
        }
        return r.canonical();
    }

    // Block signs fixed so the first coordinate of each output block is +.
    SignedPermutation canonical() const {
        SignedPermutation r = *this;
        for (int block = 0; block < 2; ++block) {
            if (r.sign[4 * block] < 0) {
                for (int i = 4 * block; i < 4 * block + 4; ++i) r.sign[i] = -r.sign[i];
            }
        }
        return r;
    }

    bool is_identity() const { return canonical() == SignedPermutation{}; }

    int order() const {
        SignedPermutation p = canonical();
        int n = 1;
        while (!p.is_identity()) {
            p = p.compose(*this);
            ++n;
        }
        return n;
    }

    template <FieldElement F>
    ModelPoint<F> apply(const ModelPoint<F>& P) const {
        const std::array<const F*, 8> in{&P.u[0], &P.u[1], &P.u[2], &P.u[3], &P.y[0], &P.y[1], &P.y[2], &P.y[3]};
        auto at = [&](int i) { return sign[i] > 0 ? *in[source[i]] : -*in[source[i]]; };
        return {{at(0), at(1), at(2), at(3)}, {at(4), at(5), at(6), at(7)}};
    }

    friend bool operator==(const SignedPermutation&, const SignedPermutation&) = default;
    friend auto operator<=>(const SignedPermutation&, const SignedPermutation&) = default;
};

enum class Symmetry { Neg, PlusE1, PlusE2, PlusE3, PlusD1, MinusD1, Swap };

inline SignedPermutation symmetry_map(Symmetry which) {
    auto diag = [](std::array<int, 4> su, std::array<int, 4> sy) {
        SignedPermutation m;
        for (int i = 0; i < 4; ++i) {
            m.sign[i] = su[i];
            m.sign[4 + i] = sy[i];
        }
        return m;
    };
    SignedPermutation m;
    switch (which) {
    case Symmetry::Neg: return diag({1, 1, 1, 1}, {1, 1, -1, -1});
    case Symmetry::PlusE1: return diag({1, 1, -1, -1}, {1, 1, -1, -1});
    case Symmetry::PlusE2: return diag({1, -1, 1, -1}, {1, -1, 1, -1});
    case Symmetry::PlusE3: return diag({1, -1, -1, 1}, {1, -1, -1, 1});
    case Symmetry::PlusD1:  // (u, y) -> (y, [u1, u2, -u3, -u4])
        m.source = {4, 5, 6, 7, 0, 1, 2, 3};
        m.sign = {1, 1, 1, 1, 1, 1, -1, -1};
        return m;
    case Symmetry::MinusD1:  // (u, y) -> ([y1, y2, -y3, -y4], u)
        m.source = {4, 5, 6, 7, 0, 1, 2, 3};
        m.sign = {1, 1, -1, -1, 1, 1, 1, 1};
        return m;
    case Symmetry::Swap:  // D -> -D - D_1
        m.source = {4, 5, 6, 7, 0, 1, 2, 3};
        return m;
    }
    return m;
}

/// All maps generated by the given ones, up to block signs.
inline std::vector<SignedPermutation> symmetry_closure(const std::vector<SignedPermutation>& generators) {
    std::vector<SignedPermutation> group{SignedPermutation{}};
    for (std::size_t i = 0; i < group.size(); ++i) {
        for (const auto& g : generators) {
            SignedPermutation next = g.compose(group[i]);
            if (std::find(group.begin(), group.end(), next) == group.end()) group.push_back(next);
        }
    }
    return group;
}

// ---------------------------------------------------------------------------
// The model

/// The P^3 x P^3 model of the Jacobian of a family member. Construction
/// builds the Kummer data, Q and D_1 eagerly; afterwards the object is
/// immutable and safe to share between threads.
template <FieldElement F>
class SurfaceModel {
public:
    explicit SurfaceModel(CurveParams<F> params)
        : kummer_(std::move(params)), d1_(kummer_.make_d1()), universal_(supports_universal_law(this->params())) {
        const auto& C = curve();
        if (!(C.dbl(d1_) == torsion_E(this->params(), 1)) || !C.scalar_mul(4, d1_).is_identity()) {
            throw Error(ErrorCode::InvalidParams, "lifted D_1 does not satisfy 2 D_1 = E_1");
        }
    }

    const CurveParams<F>& params() const { return kummer_.params(); }
    const KummerSurface<F>& kummer() const { return kummer_; }
    const HyperellipticCurve<F>& curve() const { return kummer_.curve(); }
    const MumfordDivisor<F>& d1() const { return d1_; }
    bool universal_available() const { return universal_; }

    ModelPoint<F> identity() const {
        const auto& k = params().field;
        return {{k.one(), k.one(), -k.one(), -k.one()}, {params().b, k.one(), k.zero(), k.zero()}};
    }

    ModelPoint<F> embed(const MumfordDivisor<F>& D) const {
        return normalize(ModelPoint<F>{kummer_.l_of(D), kummer_.l_of(curve().add(D, d1_))});
    }

    std::array<F, 15> residuals(const ModelPoint<F>& P) const { return defining_residuals(params(), P.u, P.y); }

    bool is_member(const ModelPoint<F>& P) const {
        if (all_zero(P.u) || all_zero(P.y)) return false;
        for (const F& r : residuals(P)) {
            if (!r.is_zero()) return false;
        }
        return true;
    }

    AddStrategy<F> default_strategy() const {
        return universal_ ? AddStrategy<F>::universal() : AddStrategy<F>::first_nonzero();
    }

    ModelPoint<F> add(const ModelPoint<F>& P, const ModelPoint<F>& Q) const { return add(P, Q, default_strategy()); }

    ModelPoint<F> add(const ModelPoint<F>& P, const ModelPoint<F>& Q, const AddStrategy<F>& s) const {
        switch (s.kind) {
        case StrategyKind::FirstNonzeroColumn:
            return finish(first_nonzero(LawTag::A, P, Q), first_nonzero(LawTag::J, P, Q));
        case StrategyKind::Columns:
            return finish(column(LawTag::A, s.column_a, P, Q), column(LawTag::J, s.column_j, P, Q));
        case StrategyKind::LinearComb:
            return finish(combination(LawTag::A, s.comb_a, P, Q), combination(LawTag::J, s.comb_j, P, Q));
        case StrategyKind::Universal: {
            if (!universal_) {
                params().require_delta();
                throw Error(ErrorCode::InvalidParams, "universality conditions do not hold for these parameters");
            }
            const auto& k = params().field;
            const std::vector<F> comb{params().c, k.zero(), -params().require_delta(), k.zero()};
            return finish(combination(LawTag::A, comb, P, Q), combination(LawTag::J, comb, P, Q));
        }
        }
        throw Error(ErrorCode::InvalidParams, "unknown strategy");
    }

    /// add(P, P); A-columns 1 and 2 are the safe ones since l(D_1) = [b,1,0,0].
    ModelPoint<F> dbl(const ModelPoint<F>& P) const {
        Vec4<F> u = column(LawTag::A, 0, P, P);
        if (all_zero(u)) u = column(LawTag::A, 1, P, P);
        return finish(u, first_nonzero(LawTag::J, P, P));
    }

    ModelPoint<F> scalar_mul(const mpz_class& k, const ModelPoint<F>& P) const {
        const ModelPoint<F> base = k < 0 ? symmetry(P, Symmetry::Neg) : P;
        const mpz_class n = abs(k);
        ModelPoint<F> r = identity();
        for (std::size_t i = mpz_sizeinbase(n.get_mpz_t(), 2); i-- > 0;) {
            r = dbl(r);
            if (mpz_tstbit(n.get_mpz_t(), i)) r = add(r, base);
        }
        return normalize(r);
    }

    ModelPoint<F> symmetry(const ModelPoint<F>& P, Symmetry which) const { return symmetry_map(which).apply(P); }

    /// The two model points over an l-point u: y is recovered from
    /// N = [y1^2, y1y2, y2^2, -y3^2, -y3y4, -y4^2] ~ (r_1..r_6)(u).
    std::array<ModelPoint<F>, 2> lift_from_kummer(const LPoint<F>& u) const {
        if (all_zero(u)) throw Error(ErrorCode::InvalidPoint, "zero l-point");
        const auto M = r_quadrics(params(), u);
        const auto& k = params().field;
        auto root = [](const F& x) {
            auto r = try_sqrt(x);
            if (!r) throw Error(ErrorCode::NonRationalLift, "y needs a square root outside K");
            return *r;
        };
        auto finish_pair = [&](const Vec4<F>& y) {
            const ModelPoint<F> P = normalize(ModelPoint<F>{u, y});
            if (all_zero(y) || !is_member(P)) throw Error(ErrorCode::InconsistentM, "lifted point is not a member");
            return std::array<ModelPoint<F>, 2>{P, normalize(symmetry(P, Symmetry::Neg))};
        };
        // Choose the scale lambda of N = lambda M so that y1 or y2 is M's pivot.
        for (int pivot : {0, 2}) {
            const F& lambda = M[static_cast<std::size_t>(pivot)];
            if (lambda.is_zero()) continue;
            const F y1 = pivot == 0 ? lambda : M[1];
            const F y2 = pivot == 0 ? M[1] : lambda;
            if (pivot == 2 && !M[1].is_zero()) continue;
            const F y3sq = -(lambda * M[3]);
            F y3 = k.zero(), y4 = k.zero();
            if (!y3sq.is_zero()) {
                y3 = root(y3sq);
                y4 = -(lambda * M[4]) / y3;
            } else {
                y4 = root(-(lambda * M[5]));
            }
            return finish_pair({pivot == 0 ? y1 : k.zero(), y2, y3, y4});
        }
        // y1 = y2 = 0: (y3, y4) is fixed projectively without square roots.
        if (!M[3].is_zero()) return finish_pair({k.zero(), k.zero(), M[3], M[4]});
        if (!M[5].is_zero()) return finish_pair({k.zero(), k.zero(), M[4], M[5]});
        throw Error(ErrorCode::InconsistentM, "all M entries vanish");
    }

    /// a d u1 - b^2 c e u2 - d e u3 + b^2 f u4
    F near_miss_functional(const LPoint<F>& u) const {
        const auto& p = params();
        const F b2 = p.b * p.b;
        return p.a * p.d * u[0] - b2 * p.c * p.e * u[1] - p.d * p.e * u[2] + b2 * p.f * u[3];
    }

    /// c u1 - delta u3
    F universal_functional(const LPoint<F>& u) const {
        return params().c * u[0] - params().require_delta() * u[2];
    }

private:
    F entry(LawTag tag, int i, int j, const ModelPoint<F>& P, const ModelPoint<F>& Q) const {
        return tag == LawTag::A ? a_entry(params(), i + 1, j + 1, P, Q) : j_entry(params(), i + 1, j + 1, P, Q);
    }

    Vec4<F> column(LawTag tag, int j, const ModelPoint<F>& P, const ModelPoint<F>& Q) const {
        return {entry(tag, 0, j, P, Q), entry(tag, 1, j, P, Q), entry(tag, 2, j, P, Q), entry(tag, 3, j, P, Q)};
    }

    Vec4<F> first_nonzero(LawTag tag, const ModelPoint<F>& P, const ModelPoint<F>& Q) const {
        for (int j = 0; j < 4; ++j) {
            Vec4<F> col = column(tag, j, P, Q);
            if (!all_zero(col)) return col;
        }
        return column(tag, 3, P, Q);
    }

    Vec4<F> combination(LawTag tag, const std::vector<F>& coeffs, const ModelPoint<F>& P, const ModelPoint<F>& Q) const {
        const auto& k = params().field;
        Vec4<F> out{k.zero(), k.zero(), k.zero(), k.zero()};
        for (int j = 0; j < 4; ++j) {
            if (coeffs[static_cast<std::size_t>(j)].is_zero()) continue;
            const Vec4<F> col = column(tag, j, P, Q);
            for (int i = 0; i < 4; ++i) out[i] = out[i] + coeffs[static_cast<std::size_t>(j)] * col[i];
        }
        return out;
    }

    static ModelPoint<F> finish(const Vec4<F>& u, const Vec4<F>& y) {
        if (all_zero(u) || all_zero(y)) {
            throw Error(ErrorCode::DegenerateColumn, all_zero(u) ? "A column vanishes" : "J column vanishes");
        }
        return {normalize(u), normalize(y)};
    }

    KummerSurface<F> kummer_;
    MumfordDivisor<F> d1_;
    bool universal_;
};

// ---------------------------------------------------------------------------
// Twists

/// (kappa_1, kappa_2, kappa_3), each a nonsquare of K.
template <FieldElement F>
struct TwistParams {
    F kappa1, kappa2, kappa3;

    static TwistParams make(const F& k1, const F& k2, const F& k3) {
        for (const F* x : {&k1, &k2, &k3}) {
            if (!is_nonsquare(*x)) throw Error(ErrorCode::InvalidParams, "twist parameters must be nonsquares");
        }
        return {k1, k2, k3};
    }
    /// Skips the nonsquare check (kappa_i = 1 reproduces the untwisted model).
    static TwistParams unchecked(const F& k1, const F& k2, const F& k3) { return {k1, k2, k3}; }
};

/// Element of R[s1, s2, s3]/(s_i^2 - kappa_i): eight coefficients indexed
/// by the bit mask of the monomial s1^b0 s2^b1 s3^b2.
template <class R>
class MultiQuadratic {
public:
    MultiQuadratic(std::array<R, 8> c, std::shared_ptr<const std::array<R, 3>> kappa)
        : c_(std::move(c)), kappa_(std::move(kappa)) {}

    const R& operator[](unsigned mask) const { return c_[mask]; }

    friend MultiQuadratic operator+(const MultiQuadratic& a, const MultiQuadratic& b) {
        MultiQuadratic r = a;
        for (unsigned i = 0; i < 8; ++i) r.c_[i] = r.c_[i] + b.c_[i];
        return r;
    }
    friend MultiQuadratic operator-(const MultiQuadratic& a, const MultiQuadratic& b) { return a + (-b); }
    MultiQuadratic operator-() const {
        MultiQuadratic r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend MultiQuadratic operator*(const MultiQuadratic& a, const MultiQuadratic& b) {
        const R zero = a.c_[0] - a.c_[0];
        MultiQuadratic r({zero, zero, zero, zero, zero, zero, zero, zero}, a.kappa_);
        for (unsigned i = 0; i < 8; ++i) {
            for (unsigned j = 0; j < 8; ++j) {
                R t = a.c_[i] * b.c_[j];
                for (unsigned bit = 0; bit < 3; ++bit) {
                    if ((i & j) & (1u << bit)) t = t * (*a.kappa_)[bit];
                }
                r.c_[i ^ j] = r.c_[i ^ j] + t;
            }
        }
        return r;
    }

private:
    std::array<R, 8> c_;
    std::shared_ptr<const std::array<R, 3>> kappa_;
};

/// Membership residuals for the twisted model J^(kappa_1, kappa_2, kappa_3).
///
/// Substituting u2 -> s3 u2, u3 -> s2 u3, u4 -> s2 s3 u4, y2 -> s3 y2,
/// y3 -> s1 y3, y4 -> s1 s3 y4 (s_i = sqrt(kappa_i)) turns each defining form
/// into s^m times a form over K for a fixed monomial s^m; that form is the
/// twisted residual. The monomial of each equation is found once here.
template <FieldElement F>
class TwistedModel {
public:
    TwistedModel(CurveParams<F> params, TwistParams<F> tw) : params_(std::move(params)), tw_(std::move(tw)) {
        Rng rng(0x7477697374ull);
        const auto& k = params_.field;
        std::array<int, 15> found{};
        found.fill(-1);
        for (int attempt = 0; attempt < 8; ++attempt) {
            Vec4<F> u{k.random(rng), k.random(rng), k.random(rng), k.random(rng)};
            Vec4<F> y{k.random(rng), k.random(rng), k.random(rng), k.random(rng)};
            const auto vals = expand(u, y, [](const F& x) { return x; });
            for (std::size_t e = 0; e < 15; ++e) {
                for (unsigned m = 0; m < 8; ++m) {
                    if (vals[e][m].is_zero()) continue;
                    if (found[e] >= 0 && found[e] != static_cast<int>(m)) {
                        throw Error(ErrorCode::InvalidParams, "twisted equation is not homogeneous in the square roots");
                    }
                    found[e] = static_cast<int>(m);
                }
            }
        }
        for (std::size_t e = 0; e < 15; ++e) mask_[e] = found[e] < 0 ? 0u : static_cast<unsigned>(found[e]);
    }

    const CurveParams<F>& params() const { return params_; }
    const TwistParams<F>& twist() const { return tw_; }
    unsigned monomial(std::size_t equation) const { return mask_[equation]; }

    std::array<F, 15> residuals(const ModelPoint<F>& P) const {
        return residuals_in(P.u, P.y, [](const F& x) { return x; });
    }

    bool is_member(const ModelPoint<F>& P) const {
        if (all_zero(P.u) || all_zero(P.y)) return false;
        for (const F& r : residuals(P)) {
            if (!r.is_zero()) return false;
        }
        return true;
    }

    /// Residuals for coordinates in any ring R containing K (via lift).
    template <class R, class Lift>
    std::array<R, 15> residuals_in(const std::array<R, 4>& u, const std::array<R, 4>& y, Lift lift) const {
        const auto vals = expand(u, y, lift);
        std::array<R, 15> out{vals[0][0], vals[0][0], vals[0][0], vals[0][0], vals[0][0], vals[0][0], vals[0][0],
                              vals[0][0], vals[0][0], vals[0][0], vals[0][0], vals[0][0], vals[0][0], vals[0][0],
                              vals[0][0]};
        for (std::size_t e = 0; e < 15; ++e) {
            for (unsigned m = 0; m < 8; ++m) {
                if (m != mask_[e] && !vals[e][m].is_zero()) {
                    throw Error(ErrorCode::InvalidParams, "unexpected square-root monomial in twisted residual");
                }
            }
            out[e] = vals[e][mask_[e]];
        }
        return out;
    }

private:
    template <class R, class Lift>
    std::array<MultiQuadratic<R>, 15> expand(const std::array<R, 4>& u, const std::array<R, 4>& y, Lift lift) const {
        using MQ = MultiQuadratic<R>;
        const R zero = u[0] - u[0];
        auto kappa = std::make_shared<const std::array<R, 3>>(
            std::array<R, 3>{lift(tw_.kappa1), lift(tw_.kappa2), lift(tw_.kappa3)});
        auto mono = [&](const R& x, unsigned mask) {
            std::array<R, 8> c{zero, zero, zero, zero, zero, zero, zero, zero};
            c[mask] = x;
            return MQ(c, kappa);
        };
        constexpr unsigned S1 = 1, S2 = 2, S3 = 4;
        const std::array<MQ, 4> tu{mono(u[0], 0), mono(u[1], S3), mono(u[2], S2), mono(u[3], S2 | S3)};
        const std::array<MQ, 4> ty{mono(y[0], 0), mono(y[1], S3), mono(y[2], S1), mono(y[3], S1 | S3)};
        auto lift_mq = [&](const F& x) { return mono(lift(x), 0); };
        return defining_residuals(params_, tu, ty, lift_mq);
    }

    CurveParams<F> params_;
    TwistParams<F> tw_;
    std::array<unsigned, 15> mask_{};
};

} // namespace edwardsg2
