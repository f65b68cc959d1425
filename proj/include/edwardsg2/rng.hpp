#pragma once

#include <cstdint>
#include <random>

#include <gmpxx.h>

namespace edwardsg2 {

/// Seedable generator used by every sampling routine.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Range reduction is done here by rejection sampling rather than
/// through std::uniform_int_distribution (whose algorithm is
/// implementation-defined), so a seed produces the same values on every
/// platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform value in [0, bound). bound must be nonzero.
    std::uint64_t below(std::uint64_t bound) {
        if ((bound & (bound - 1)) == 0) return next() & (bound - 1);
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
        for (;;) {
            std::uint64_t x = next();
            if (x <= limit) return x % bound;
        }
    }

    /// Uniform value in [0, bound) for arbitrary-precision bounds.
    mpz_class below(const mpz_class& bound) {
        const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
        for (;;) {
            mpz_class x = 0;
            std::size_t have = 0;
            while (have < bits) {
                x <<= 64;
                x += mpz_class(static_cast<unsigned long>(next()));
                have += 64;
            }
            x >>= static_cast<mp_bitcnt_t>(have - bits);
            if (x < bound) return x;
        }
    }

    bool coin() { return (next() >> 63) != 0; }

private:
    static_assert(sizeof(unsigned long) == sizeof(std::uint64_t), "LP64 assumed");

    std::mt19937_64 engine_;
};

} // namespace edwardsg2
