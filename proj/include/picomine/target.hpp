#pragma once

// 256-bit proof-of-work targets and difficulty math: compact (nbits)
// decoding, difficulty <-> target conversion, hash comparison, and the
// expected-time estimator.

#include <array>
#include <bit>
#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "picomine/hex.hpp"
#include "picomine/sha256.hpp"

namespace picomine {

// Unsigned 256-bit integer, little-endian limbs (limbs[0] = low 64 bits).
struct Target256 {
    std::array<uint64_t, 4> limbs{};

    friend bool operator==(const Target256&, const Target256&) = default;

    friend std::strong_ordering operator<=>(const Target256& a, const Target256& b) {
        for (int i = 3; i >= 0; --i)
            if (a.limbs[i] != b.limbs[i]) return a.limbs[i] <=> b.limbs[i];
        return std::strong_ordering::equal;
    }

    bool is_zero() const { return limbs[0] == 0 && limbs[1] == 0 && limbs[2] == 0 && limbs[3] == 0; }

    static Target256 zero() { return {}; }

    static Target256 max_value() {
        Target256 t;
        t.limbs = {~0ull, ~0ull, ~0ull, ~0ull};
        return t;
    }

    static Target256 from_be_bytes(const std::array<uint8_t, 32>& bytes) {
        Target256 t;
        for (int limb = 0; limb < 4; ++limb) {
            uint64_t v = 0;
            for (int i = 0; i < 8; ++i) v = v << 8 | bytes[(3 - limb) * 8 + i];
            t.limbs[limb] = v;
        }
        return t;
    }

    std::array<uint8_t, 32> to_be_bytes() const {
        std::array<uint8_t, 32> out;
        for (int limb = 0; limb < 4; ++limb)
            for (int i = 0; i < 8; ++i)
                out[(3 - limb) * 8 + i] = static_cast<uint8_t>(limbs[limb] >> (56 - 8 * i));
        return out;
    }

    static Target256 from_hex(std::string_view hex64) { return from_be_bytes(hex_to_bytes32(hex64)); }

    std::string to_hex() const {
        auto b = to_be_bytes();
        return bytes_to_hex(std::span<const uint8_t>(b.data(), b.size()));
    }
};

// Target of difficulty 1: 0xffff * 2^208.
inline Target256 difficulty_1_target() {
    Target256 t;
    t.limbs[3] = 0xffff0000ull;
    return t;
}

// Decode the 4-byte compact ("nbits") target encoding: high byte is a base-256
// exponent, low 23 bits the mantissa. Mantissas with the sign bit are invalid
// (a negative target is meaningless for proof of work), and values that do
// not fit 256 bits are an error.
inline Target256 decode_compact_target(uint32_t nbits) {
    if (nbits & 0x00800000u) throw std::invalid_argument("compact target has negative sign bit");
    uint32_t size = nbits >> 24;
    uint64_t word = nbits & 0x007fffffu;
    Target256 t;
    if (size <= 3) {
        t.limbs[0] = word >> (8 * (3 - size));
        return t;
    }
    if (word == 0) return t;
    unsigned shift = 8 * (size - 3);
    if (static_cast<unsigned>(std::bit_width(word)) + shift > 256)
        throw std::overflow_error("compact target exceeds 256 bits");
    unsigned limb = shift / 64, off = shift % 64;
    t.limbs[limb] |= word << off;
    if (off != 0 && limb + 1 < 4) t.limbs[limb + 1] |= word >> (64 - off);
    return t;
}

namespace detail {

// 512-bit little-endian scratch integer for the difficulty division.
struct Wide512 {
    std::array<uint64_t, 8> limbs{};
};

inline Wide512 shifted_difficulty_1(unsigned shift) {
    Wide512 w;
    // 0xffff * 2^208 << shift; shift < 256 keeps it inside 512 bits
    unsigned total = 208 + shift;
    unsigned limb = total / 64, off = total % 64;
    uint64_t word = 0xffffull;
    w.limbs[limb] |= word << off;
    if (off != 0 && limb + 1 < 8) w.limbs[limb + 1] |= word >> (64 - off);
    return w;
}

inline void shift_right(Wide512& w, unsigned bits) {
    unsigned limbshift = bits / 64, off = bits % 64;
    for (int i = 0; i < 8; ++i) {
        uint64_t v = 0;
        unsigned src = i + limbshift;
        if (src < 8) {
            v = w.limbs[src] >> off;
            if (off != 0 && src + 1 < 8) v |= w.limbs[src + 1] << (64 - off);
        }
        w.limbs[i] = v;
    }
}

// In-place divide by a small (< 2^63) divisor, most-significant limb first.
inline void divide_u64(Wide512& w, uint64_t divisor) {
    unsigned __int128 rem = 0;
    for (int i = 7; i >= 0; --i) {
        unsigned __int128 cur = rem << 64 | w.limbs[i];
        w.limbs[i] = static_cast<uint64_t>(cur / divisor);
        rem = cur % divisor;
    }
}

}  // namespace detail

// target = floor(difficulty-1 target / difficulty), computed exactly: the
// difficulty is split into mantissa * 2^exponent and the division done on a
// 512-bit integer. Results past 2^256-1 (absurdly small difficulties) clamp
// to the maximum target.
inline Target256 difficulty_to_target(double difficulty) {
    if (!std::isfinite(difficulty) || difficulty <= 0)
        throw std::invalid_argument("difficulty must be positive and finite");
    int exp2 = 0;
    double frac = std::frexp(difficulty, &exp2);
    auto mantissa = static_cast<uint64_t>(std::ldexp(frac, 53));  // 53-bit integer
    int e = exp2 - 53;                                            // difficulty = mantissa * 2^e
    // mantissa >= 2^52, so the quotient exceeds 2^256 whenever e < -90; clamp
    // early and keep the 512-bit numerator in range
    if (e < -90) return Target256::max_value();
    detail::Wide512 num;
    if (e < 0) {
        num = detail::shifted_difficulty_1(static_cast<unsigned>(-e));
    } else {
        num = detail::shifted_difficulty_1(0);
        detail::shift_right(num, static_cast<unsigned>(e));
    }
    detail::divide_u64(num, mantissa);
    if (num.limbs[4] | num.limbs[5] | num.limbs[6] | num.limbs[7]) return Target256::max_value();
    Target256 t;
    t.limbs = {num.limbs[0], num.limbs[1], num.limbs[2], num.limbs[3]};
    return t;
}

// difficulty = difficulty-1 target / target, as a floating value.
inline double target_to_difficulty(const Target256& target) {
    if (target.is_zero()) throw std::invalid_argument("zero target has no difficulty");
    long double value = 0.0L;
    for (int i = 3; i >= 0; --i) value = value * 18446744073709551616.0L + target.limbs[i];
    long double diff1 = std::ldexp(65535.0L, 208);
    return static_cast<double>(diff1 / value);
}

// Compare a double-SHA-256 digest against a target. The digest is read as a
// little-endian 256-bit integer (byte 31 most significant), the standard
// proof-of-work convention.
inline bool hash_meets_target(const Digest32& hash, const Target256& target) {
    Target256 h;
    for (int limb = 0; limb < 4; ++limb) {
        uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = v << 8 | hash[limb * 8 + i];
        h.limbs[limb] = v;
    }
    return h <= target;
}

// Expected seconds to one solution: difficulty * 2^32 / hashrate.
inline double estimate_expected_seconds(double difficulty, double hashrate) {
    if (!std::isfinite(difficulty) || difficulty <= 0)
        throw std::invalid_argument("difficulty must be positive");
    if (!std::isfinite(hashrate) || hashrate <= 0)
        throw std::invalid_argument("hashrate must be positive");
    return difficulty * 4294967296.0 / hashrate;
}

}  // namespace picomine
