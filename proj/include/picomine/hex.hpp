#pragma once

// Small hex/byte helpers shared by the whole library.

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace picomine {

inline int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

inline bool is_hex(std::string_view s) {
    if (s.size() % 2 != 0) return false;
    for (char c : s)
        if (hex_digit(c) < 0) return false;
    return true;
}

inline std::vector<uint8_t> hex_to_bytes(std::string_view s) {
    if (s.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
    std::vector<uint8_t> out(s.size() / 2);
    for (size_t i = 0; i < out.size(); ++i) {
        int hi = hex_digit(s[2 * i]);
        int lo = hex_digit(s[2 * i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex digit");
        out[i] = static_cast<uint8_t>(hi << 4 | lo);
    }
    return out;
}

inline std::string bytes_to_hex(std::span<const uint8_t> bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

inline std::string to_lower_hex(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'F') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

// 8-char hex (big-endian integer notation) <-> uint32.
inline uint32_t hex_to_u32(std::string_view s) {
    if (s.size() != 8 || !is_hex(s)) throw std::invalid_argument("expected 8 hex chars");
    uint32_t v = 0;
    for (char c : s) v = v << 4 | static_cast<uint32_t>(hex_digit(c));
    return v;
}

inline std::string u32_to_hex(uint32_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(8, '0');
    for (int i = 7; i >= 0; --i) {
        out[i] = digits[v & 0x0f];
        v >>= 4;
    }
    return out;
}

inline void write_le32(uint8_t* out, uint32_t v) {
    out[0] = static_cast<uint8_t>(v);
    out[1] = static_cast<uint8_t>(v >> 8);
    out[2] = static_cast<uint8_t>(v >> 16);
    out[3] = static_cast<uint8_t>(v >> 24);
}

inline std::array<uint8_t, 32> hex_to_bytes32(std::string_view s) {
    if (s.size() != 64) throw std::invalid_argument("expected 64 hex chars");
    auto v = hex_to_bytes(s);
    std::array<uint8_t, 32> out;
    std::copy(v.begin(), v.end(), out.begin());
    return out;
}

// Reverse bytes inside each aligned 4-byte word, in place.
inline void swap_bytes_per_word32(uint8_t* data, size_t len) {
    for (size_t i = 0; i + 4 <= len; i += 4) {
        std::swap(data[i], data[i + 3]);
        std::swap(data[i + 1], data[i + 2]);
    }
}

inline std::array<uint8_t, 32> reversed32(const std::array<uint8_t, 32>& in) {
    std::array<uint8_t, 32> out;
    for (size_t i = 0; i < 32; ++i) out[i] = in[31 - i];
    return out;
}

}  // namespace picomine
