#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include "edwardsg2/field.hpp"

namespace edwardsg2 {

template <FieldElement F>
using Vec4 = std::array<F, 4>;

template <FieldElement F>
using Mat4 = std::array<Vec4<F>, 4>;

/// Kummer coordinates [k1, k2, k3, k4].
template <FieldElement F>
using KummerPoint = Vec4<F>;

/// Diagonalised Kummer coordinates [l1, l2, l3, l4].
template <FieldElement F>
using LPoint = Vec4<F>;

template <FieldElement F, std::size_t N>
bool all_zero(const std::array<F, N>& a) {
    for (const F& x : a) {
        if (!x.is_zero()) return false;
    }
    return true;
}

/// Projective equality: both tuples nonzero and every 2x2 cross determinant
/// a_i b_j - a_j b_i vanishes. No coordinate is ever divided.
template <FieldElement F, std::size_t N>
bool proj_equal(const std::array<F, N>& a, const std::array<F, N>& b) {
    if (all_zero(a) || all_zero(b)) return false;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = i + 1; j < N; ++j) {
            if (!(a[i] * b[j] == a[j] * b[i])) return false;
        }
    }
    return true;
}

/// Scales so that the first nonzero coordinate is 1.
template <FieldElement F, std::size_t N>
std::array<F, N> normalize(std::array<F, N> a) {
    for (std::size_t i = 0; i < N; ++i) {
        if (a[i].is_zero()) continue;
        const F inv = a[i].inverse();
        for (F& x : a) x = x * inv;
        return a;
    }
    throw Error(ErrorCode::InvalidPoint, "the zero vector is not a projective point");
}

template <FieldElement F>
Vec4<F> mat_vec(const Mat4<F>& m, const Vec4<F>& x) {
    auto row = [&](std::size_t i) { return m[i][0] * x[0] + m[i][1] * x[1] + m[i][2] * x[2] + m[i][3] * x[3]; };
    return {row(0), row(1), row(2), row(3)};
}

/// Gauss-Jordan inverse; empty when singular.
template <FieldElement F>
std::optional<Mat4<F>> mat_inverse(const Mat4<F>& m) {
    const auto k = m[0][0].field();
    std::array<std::array<F, 8>, 4> a{{
        {m[0][0], m[0][1], m[0][2], m[0][3], k.one(), k.zero(), k.zero(), k.zero()},
        {m[1][0], m[1][1], m[1][2], m[1][3], k.zero(), k.one(), k.zero(), k.zero()},
        {m[2][0], m[2][1], m[2][2], m[2][3], k.zero(), k.zero(), k.one(), k.zero()},
        {m[3][0], m[3][1], m[3][2], m[3][3], k.zero(), k.zero(), k.zero(), k.one()},
    }};
    for (std::size_t col = 0; col < 4; ++col) {
        std::size_t piv = col;
        while (piv < 4 && a[piv][col].is_zero()) ++piv;
        if (piv == 4) return std::nullopt;
        std::swap(a[col], a[piv]);
        const F inv = a[col][col].inverse();
        for (F& x : a[col]) x = x * inv;
        for (std::size_t r = 0; r < 4; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            const F factor = a[r][col];
            for (std::size_t j = 0; j < 8; ++j) a[r][j] = a[r][j] - factor * a[col][j];
        }
    }
    Mat4<F> out = m;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) out[i][j] = a[i][j + 4];
    }
    return out;
}

} // namespace edwardsg2
