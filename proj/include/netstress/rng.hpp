#pragma once

#include <bit>
#include <cstdint>
#include <random>

#include <boost/multiprecision/cpp_int.hpp>

#include "netstress/errors.hpp"

namespace netstress {

using BigInt = boost::multiprecision::cpp_int;

// All randomness flows through std::mt19937_64 plus the explicit draw
// functions below. std::uniform_int_distribution is implementation-defined,
// so it never appears here: identical seeds must reproduce identical output
// on every platform.

/// Unbiased draw from {0, ..., n-1} by masked rejection.
inline std::uint64_t rng_below(std::mt19937_64& eng, std::uint64_t n) {
    if (n == 0) throw Error("rng_below: empty range");
    if (n == 1) return 0;
    const std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(n - 1);
    std::uint64_t r;
    do {
        r = eng() & mask;
    } while (r >= n);
    return r;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double rng_unit(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Unbiased draw from {0, ..., n-1} for arbitrary-precision n.
inline BigInt rng_below_big(std::mt19937_64& eng, const BigInt& n) {
    if (n <= 0) throw Error("rng_below_big: empty range");
    if (n == 1) return 0;
    const unsigned bits = boost::multiprecision::msb(n - 1) + 1;
    const unsigned words = (bits + 63) / 64;
    const unsigned top_bits = bits - (words - 1) * 64;
    const std::uint64_t top_mask =
        top_bits == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << top_bits) - 1);
    BigInt r;
    do {
        r = 0;
        for (unsigned w = 0; w < words; ++w) {
            std::uint64_t word = eng();
            if (w == 0) word &= top_mask; // first word ends up most significant
            r <<= 64;
            r |= word;
        }
    } while (r >= n);
    return r;
}

} // namespace netstress
