#pragma once

#include <cstdint>
#include <vector>

#include "edwardsg2/surface.hpp"

namespace testsupport {

using edwardsg2::Fp;
using edwardsg2::PrimeField;

// Plain machine-integer arithmetic mod p. Used as an oracle that shares no
// code with the library's field classes.
struct Mod {
    std::int64_t p;

    std::int64_t r(std::int64_t x) const { return ((x % p) + p) % p; }
    std::int64_t mul(std::int64_t a, std::int64_t b) const {
        return static_cast<std::int64_t>(static_cast<__int128>(r(a)) * r(b) % p);
    }
    std::int64_t pow(std::int64_t a, std::int64_t e) const {
        std::int64_t out = 1;
        a = r(a);
        for (; e > 0; e >>= 1, a = mul(a, a)) {
            if (e & 1) out = mul(out, a);
        }
        return out;
    }
    std::int64_t inv(std::int64_t a) const { return pow(a, p - 2); }
    // Brute force over all residues; only for small p.
    int legendre_brute(std::int64_t a) const {
        a = r(a);
        if (a == 0) return 0;
        for (std::int64_t x = 1; x < p; ++x) {
            if (mul(x, x) == a) return 1;
        }
        return -1;
    }
    int legendre_euler(std::int64_t a) const {
        a = r(a);
        if (a == 0) return 0;
        return pow(a, (p - 1) / 2) == 1 ? 1 : -1;
    }
};

inline PrimeField f1201() { return PrimeField(1201); }

// The worked example over F_1201: (frak_a, b, c) = (6, 7, 11).
inline edwardsg2::CurveParams<Fp> example_params() {
    const PrimeField k = f1201();
    return edwardsg2::params_from_frak(k.element(6), k.element(7), k.element(11));
}

inline const edwardsg2::SurfaceModel<Fp>& example_model() {
    static const edwardsg2::SurfaceModel<Fp> model(example_params());
    return model;
}

struct SmallSet {
    std::int64_t p, frak_a, b, c;
};

// Parameter sets over small primes used by the oracle-equivalence tests.
// (101, 3, 5, 2) and (103, 2, 4, 3) satisfy the universality conditions.
inline std::vector<SmallSet> small_sets() {
    return {{101, 3, 5, 2}, {103, 2, 4, 3}, {1201, 6, 7, 11}};
}

inline edwardsg2::CurveParams<Fp> params_of(const SmallSet& s) {
    const PrimeField k(static_cast<std::uint64_t>(s.p));
    return edwardsg2::params_from_frak(k.element(s.frak_a), k.element(s.b), k.element(s.c));
}

} // namespace testsupport
