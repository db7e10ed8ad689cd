#pragma once

// Self-contained SHA-256 / double SHA-256.
//
// Two deliberately independent implementations live here:
//   - Naive: a textbook streaming hasher (buffered update/final, looped
//     message schedule). This is the reference everything else is checked
//     against, and the one the mock pool uses for share validation.
//   - Optimized: a one-shot path built on a fully unrolled compression
//     function with a rolling 16-word schedule, plus midstate caching so the
//     first 64 header bytes are folded once and reused for every nonce.
//
// Both compression functions bump a thread-local invocation counter, which
// lets tests show the optimized 80-byte path really does fewer compressions
// per nonce.

#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string_view>

namespace picomine {

using Digest32 = std::array<uint8_t, 32>;

enum class HashImpl { Naive, Optimized };

namespace detail {

inline thread_local uint64_t g_compressions = 0;

inline constexpr uint32_t kInitState[8] = {
    0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
    0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19,
};

inline constexpr uint32_t kRoundK[64] = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5,
    0x3956c25b, 0x59f111f1, 0x923f82a4, 0xab1c5ed5,
    0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
    0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174,
    0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc,
    0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
    0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967,
    0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
    0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85,
    0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3,
    0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5,
    0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
    0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2,
};

inline uint32_t rotr(uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

inline uint32_t read_be32(const uint8_t* p) {
    return static_cast<uint32_t>(p[0]) << 24 | static_cast<uint32_t>(p[1]) << 16 |
           static_cast<uint32_t>(p[2]) << 8 | static_cast<uint32_t>(p[3]);
}

inline void write_be32(uint8_t* p, uint32_t v) {
    p[0] = static_cast<uint8_t>(v >> 24);
    p[1] = static_cast<uint8_t>(v >> 16);
    p[2] = static_cast<uint8_t>(v >> 8);
    p[3] = static_cast<uint8_t>(v);
}

// ---------------------------------------------------------------- naive path

// Textbook compression: expand the full 64-entry schedule, loop the rounds.
inline void compress_naive(uint32_t state[8], const uint8_t block[64]) {
    ++g_compressions;
    uint32_t w[64];
    for (int i = 0; i < 16; ++i) w[i] = read_be32(block + 4 * i);
    for (int i = 16; i < 64; ++i) {
        uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
        uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
        w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    uint32_t a = state[0], b = state[1], c = state[2], d = state[3];
    uint32_t e = state[4], f = state[5], g = state[6], h = state[7];
    for (int i = 0; i < 64; ++i) {
        uint32_t sig1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
        uint32_t ch = (e & f) ^ (~e & g);
        uint32_t t1 = h + sig1 + ch + kRoundK[i] + w[i];
        uint32_t sig0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
        uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
        uint32_t t2 = sig0 + maj;
        h = g; g = f; f = e; e = d + t1;
        d = c; c = b; b = a; a = t1 + t2;
    }
    state[0] += a; state[1] += b; state[2] += c; state[3] += d;
    state[4] += e; state[5] += f; state[6] += g; state[7] += h;
}

// ------------------------------------------------------------ optimized path

inline void round_opt(uint32_t a, uint32_t b, uint32_t c, uint32_t& d, uint32_t e,
                      uint32_t f, uint32_t g, uint32_t& h, uint32_t kw) {
    uint32_t t1 = h + (rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25)) + ((e & f) ^ (~e & g)) + kw;
    uint32_t t2 = (rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22)) + ((a & b) ^ (a & c) ^ (b & c));
    d += t1;
    h = t1 + t2;
}

inline uint32_t sig0_opt(uint32_t x) { return rotr(x, 7) ^ rotr(x, 18) ^ (x >> 3); }
inline uint32_t sig1_opt(uint32_t x) { return rotr(x, 17) ^ rotr(x, 19) ^ (x >> 10); }

// Fully unrolled compression with a rolling 16-word schedule; no arrays, no
// spills the compiler can't keep in registers.
inline void compress_opt(uint32_t state[8], const uint8_t block[64]) {
    ++g_compressions;
    uint32_t a = state[0], b = state[1], c = state[2], d = state[3];
    uint32_t e = state[4], f = state[5], g = state[6], h = state[7];
    uint32_t w0, w1, w2, w3, w4, w5, w6, w7, w8, w9, w10, w11, w12, w13, w14, w15;

    round_opt(a, b, c, d, e, f, g, h, 0x428a2f98 + (w0 = read_be32(block + 0)));
    round_opt(h, a, b, c, d, e, f, g, 0x71374491 + (w1 = read_be32(block + 4)));
    round_opt(g, h, a, b, c, d, e, f, 0xb5c0fbcf + (w2 = read_be32(block + 8)));
    round_opt(f, g, h, a, b, c, d, e, 0xe9b5dba5 + (w3 = read_be32(block + 12)));
    round_opt(e, f, g, h, a, b, c, d, 0x3956c25b + (w4 = read_be32(block + 16)));
    round_opt(d, e, f, g, h, a, b, c, 0x59f111f1 + (w5 = read_be32(block + 20)));
    round_opt(c, d, e, f, g, h, a, b, 0x923f82a4 + (w6 = read_be32(block + 24)));
    round_opt(b, c, d, e, f, g, h, a, 0xab1c5ed5 + (w7 = read_be32(block + 28)));
    round_opt(a, b, c, d, e, f, g, h, 0xd807aa98 + (w8 = read_be32(block + 32)));
    round_opt(h, a, b, c, d, e, f, g, 0x12835b01 + (w9 = read_be32(block + 36)));
    round_opt(g, h, a, b, c, d, e, f, 0x243185be + (w10 = read_be32(block + 40)));
    round_opt(f, g, h, a, b, c, d, e, 0x550c7dc3 + (w11 = read_be32(block + 44)));
    round_opt(e, f, g, h, a, b, c, d, 0x72be5d74 + (w12 = read_be32(block + 48)));
    round_opt(d, e, f, g, h, a, b, c, 0x80deb1fe + (w13 = read_be32(block + 52)));
    round_opt(c, d, e, f, g, h, a, b, 0x9bdc06a7 + (w14 = read_be32(block + 56)));
    round_opt(b, c, d, e, f, g, h, a, 0xc19bf174 + (w15 = read_be32(block + 60)));

    round_opt(a, b, c, d, e, f, g, h, 0xe49b69c1 + (w0 += sig1_opt(w14) + w9 + sig0_opt(w1)));
    round_opt(h, a, b, c, d, e, f, g, 0xefbe4786 + (w1 += sig1_opt(w15) + w10 + sig0_opt(w2)));
    round_opt(g, h, a, b, c, d, e, f, 0x0fc19dc6 + (w2 += sig1_opt(w0) + w11 + sig0_opt(w3)));
    round_opt(f, g, h, a, b, c, d, e, 0x240ca1cc + (w3 += sig1_opt(w1) + w12 + sig0_opt(w4)));
    round_opt(e, f, g, h, a, b, c, d, 0x2de92c6f + (w4 += sig1_opt(w2) + w13 + sig0_opt(w5)));
    round_opt(d, e, f, g, h, a, b, c, 0x4a7484aa + (w5 += sig1_opt(w3) + w14 + sig0_opt(w6)));
    round_opt(c, d, e, f, g, h, a, b, 0x5cb0a9dc + (w6 += sig1_opt(w4) + w15 + sig0_opt(w7)));
    round_opt(b, c, d, e, f, g, h, a, 0x76f988da + (w7 += sig1_opt(w5) + w0 + sig0_opt(w8)));
    round_opt(a, b, c, d, e, f, g, h, 0x983e5152 + (w8 += sig1_opt(w6) + w1 + sig0_opt(w9)));
    round_opt(h, a, b, c, d, e, f, g, 0xa831c66d + (w9 += sig1_opt(w7) + w2 + sig0_opt(w10)));
    round_opt(g, h, a, b, c, d, e, f, 0xb00327c8 + (w10 += sig1_opt(w8) + w3 + sig0_opt(w11)));
    round_opt(f, g, h, a, b, c, d, e, 0xbf597fc7 + (w11 += sig1_opt(w9) + w4 + sig0_opt(w12)));
    round_opt(e, f, g, h, a, b, c, d, 0xc6e00bf3 + (w12 += sig1_opt(w10) + w5 + sig0_opt(w13)));
    round_opt(d, e, f, g, h, a, b, c, 0xd5a79147 + (w13 += sig1_opt(w11) + w6 + sig0_opt(w14)));
    round_opt(c, d, e, f, g, h, a, b, 0x06ca6351 + (w14 += sig1_opt(w12) + w7 + sig0_opt(w15)));
    round_opt(b, c, d, e, f, g, h, a, 0x14292967 + (w15 += sig1_opt(w13) + w8 + sig0_opt(w0)));

    round_opt(a, b, c, d, e, f, g, h, 0x27b70a85 + (w0 += sig1_opt(w14) + w9 + sig0_opt(w1)));
    round_opt(h, a, b, c, d, e, f, g, 0x2e1b2138 + (w1 += sig1_opt(w15) + w10 + sig0_opt(w2)));
    round_opt(g, h, a, b, c, d, e, f, 0x4d2c6dfc + (w2 += sig1_opt(w0) + w11 + sig0_opt(w3)));
    round_opt(f, g, h, a, b, c, d, e, 0x53380d13 + (w3 += sig1_opt(w1) + w12 + sig0_opt(w4)));
    round_opt(e, f, g, h, a, b, c, d, 0x650a7354 + (w4 += sig1_opt(w2) + w13 + sig0_opt(w5)));
    round_opt(d, e, f, g, h, a, b, c, 0x766a0abb + (w5 += sig1_opt(w3) + w14 + sig0_opt(w6)));
    round_opt(c, d, e, f, g, h, a, b, 0x81c2c92e + (w6 += sig1_opt(w4) + w15 + sig0_opt(w7)));
    round_opt(b, c, d, e, f, g, h, a, 0x92722c85 + (w7 += sig1_opt(w5) + w0 + sig0_opt(w8)));
    round_opt(a, b, c, d, e, f, g, h, 0xa2bfe8a1 + (w8 += sig1_opt(w6) + w1 + sig0_opt(w9)));
    round_opt(h, a, b, c, d, e, f, g, 0xa81a664b + (w9 += sig1_opt(w7) + w2 + sig0_opt(w10)));
    round_opt(g, h, a, b, c, d, e, f, 0xc24b8b70 + (w10 += sig1_opt(w8) + w3 + sig0_opt(w11)));
    round_opt(f, g, h, a, b, c, d, e, 0xc76c51a3 + (w11 += sig1_opt(w9) + w4 + sig0_opt(w12)));
    round_opt(e, f, g, h, a, b, c, d, 0xd192e819 + (w12 += sig1_opt(w10) + w5 + sig0_opt(w13)));
    round_opt(d, e, f, g, h, a, b, c, 0xd6990624 + (w13 += sig1_opt(w11) + w6 + sig0_opt(w14)));
    round_opt(c, d, e, f, g, h, a, b, 0xf40e3585 + (w14 += sig1_opt(w12) + w7 + sig0_opt(w15)));
    round_opt(b, c, d, e, f, g, h, a, 0x106aa070 + (w15 += sig1_opt(w13) + w8 + sig0_opt(w0)));

    round_opt(a, b, c, d, e, f, g, h, 0x19a4c116 + (w0 += sig1_opt(w14) + w9 + sig0_opt(w1)));
    round_opt(h, a, b, c, d, e, f, g, 0x1e376c08 + (w1 += sig1_opt(w15) + w10 + sig0_opt(w2)));
    round_opt(g, h, a, b, c, d, e, f, 0x2748774c + (w2 += sig1_opt(w0) + w11 + sig0_opt(w3)));
    round_opt(f, g, h, a, b, c, d, e, 0x34b0bcb5 + (w3 += sig1_opt(w1) + w12 + sig0_opt(w4)));
    round_opt(e, f, g, h, a, b, c, d, 0x391c0cb3 + (w4 += sig1_opt(w2) + w13 + sig0_opt(w5)));
    round_opt(d, e, f, g, h, a, b, c, 0x4ed8aa4a + (w5 += sig1_opt(w3) + w14 + sig0_opt(w6)));
    round_opt(c, d, e, f, g, h, a, b, 0x5b9cca4f + (w6 += sig1_opt(w4) + w15 + sig0_opt(w7)));
    round_opt(b, c, d, e, f, g, h, a, 0x682e6ff3 + (w7 += sig1_opt(w5) + w0 + sig0_opt(w8)));
    round_opt(a, b, c, d, e, f, g, h, 0x748f82ee + (w8 += sig1_opt(w6) + w1 + sig0_opt(w9)));
    round_opt(h, a, b, c, d, e, f, g, 0x78a5636f + (w9 += sig1_opt(w7) + w2 + sig0_opt(w10)));
    round_opt(g, h, a, b, c, d, e, f, 0x84c87814 + (w10 += sig1_opt(w8) + w3 + sig0_opt(w11)));
    round_opt(f, g, h, a, b, c, d, e, 0x8cc70208 + (w11 += sig1_opt(w9) + w4 + sig0_opt(w12)));
    round_opt(e, f, g, h, a, b, c, d, 0x90befffa + (w12 += sig1_opt(w10) + w5 + sig0_opt(w13)));
    round_opt(d, e, f, g, h, a, b, c, 0xa4506ceb + (w13 += sig1_opt(w11) + w6 + sig0_opt(w14)));
    round_opt(c, d, e, f, g, h, a, b, 0xbef9a3f7 + (w14 + sig1_opt(w12) + w7 + sig0_opt(w15)));
    round_opt(b, c, d, e, f, g, h, a, 0xc67178f2 + (w15 + sig1_opt(w13) + w8 + sig0_opt(w0)));

    state[0] += a; state[1] += b; state[2] += c; state[3] += d;
    state[4] += e; state[5] += f; state[6] += g; state[7] += h;
}

using CompressFn = void (*)(uint32_t*, const uint8_t*);

inline CompressFn compress_for(HashImpl impl) {
    return impl == HashImpl::Naive ? compress_naive : compress_opt;
}

inline Digest32 state_to_digest(const uint32_t state[8]) {
    Digest32 out;
    for (int i = 0; i < 8; ++i) write_be32(out.data() + 4 * i, state[i]);
    return out;
}

}  // namespace detail

// Number of compression-function invocations on this thread (both paths).
inline uint64_t compression_count() { return detail::g_compressions; }
inline void reset_compression_count() { detail::g_compressions = 0; }

// Compression state after some number of whole 64-byte blocks.
struct Midstate {
    std::array<uint32_t, 8> state;
    uint64_t blocks_consumed = 0;
};

// ------------------------------------------------------- streaming reference

// Buffered update/final hasher; this is the naive implementation's driver and
// carries its own padding logic, independent of the one-shot path below.
class Sha256 {
  public:
    Sha256() { reset(); }

    explicit Sha256(const Midstate& mid) {
        std::memcpy(state_, mid.state.data(), sizeof(state_));
        total_len_ = mid.blocks_consumed * 64;
        buffered_ = 0;
    }

    void reset() {
        std::memcpy(state_, detail::kInitState, sizeof(state_));
        total_len_ = 0;
        buffered_ = 0;
    }

    void update(const uint8_t* data, size_t len) {
        total_len_ += len;
        if (buffered_ > 0) {
            size_t take = std::min(len, size_t{64} - buffered_);
            std::memcpy(buf_ + buffered_, data, take);
            buffered_ += take;
            data += take;
            len -= take;
            if (buffered_ == 64) {
                detail::compress_naive(state_, buf_);
                buffered_ = 0;
            }
        }
        while (len >= 64) {
            detail::compress_naive(state_, data);
            data += 64;
            len -= 64;
        }
        if (len > 0) {
            std::memcpy(buf_, data, len);
            buffered_ = len;
        }
    }

    void update(std::span<const uint8_t> data) { update(data.data(), data.size()); }

    Digest32 finish() {
        uint64_t bits = total_len_ * 8;
        uint8_t pad = 0x80;
        update(&pad, 1);
        static const uint8_t zeros[64] = {0};
        while (buffered_ != 56) update(zeros, buffered_ < 56 ? 56 - buffered_ : 64 - buffered_);
        uint8_t len_be[8];
        for (int i = 0; i < 8; ++i) len_be[i] = static_cast<uint8_t>(bits >> (56 - 8 * i));
        update(len_be, 8);
        Digest32 out = detail::state_to_digest(state_);
        reset();
        return out;
    }

    Midstate midstate() const {
        if (buffered_ != 0) throw std::logic_error("midstate requires a block boundary");
        Midstate m;
        std::memcpy(m.state.data(), state_, sizeof(state_));
        m.blocks_consumed = total_len_ / 64;
        return m;
    }

  private:
    uint32_t state_[8];
    uint8_t buf_[64];
    uint64_t total_len_;
    size_t buffered_;
};

// ----------------------------------------------------------- one-shot driver

namespace detail {

// One-shot tail driver for the optimized path: fold whole blocks straight
// from the input, then pad on the stack. No buffering, no allocation.
inline void finish_tail_opt(uint32_t state[8], const uint8_t* tail, size_t tail_len,
                            uint64_t total_len) {
    while (tail_len >= 64) {
        compress_opt(state, tail);
        tail += 64;
        tail_len -= 64;
    }
    uint8_t block[64];
    std::memcpy(block, tail, tail_len);
    block[tail_len] = 0x80;
    if (tail_len + 1 > 56) {
        std::memset(block + tail_len + 1, 0, 64 - (tail_len + 1));
        compress_opt(state, block);
        std::memset(block, 0, 56);
    } else {
        std::memset(block + tail_len + 1, 0, 56 - (tail_len + 1));
    }
    uint64_t bits = total_len * 8;
    for (int i = 0; i < 8; ++i) block[56 + i] = static_cast<uint8_t>(bits >> (56 - 8 * i));
    compress_opt(state, block);
}

}  // namespace detail

// ------------------------------------------------------------------- public

inline Digest32 sha256(std::span<const uint8_t> message, HashImpl impl = HashImpl::Optimized) {
    if (impl == HashImpl::Naive) {
        Sha256 ctx;
        ctx.update(message);
        return ctx.finish();
    }
    uint32_t state[8];
    std::memcpy(state, detail::kInitState, sizeof(state));
    detail::finish_tail_opt(state, message.data(), message.size(), message.size());
    return detail::state_to_digest(state);
}

inline Digest32 sha256(std::string_view message, HashImpl impl = HashImpl::Optimized) {
    return sha256(std::span(reinterpret_cast<const uint8_t*>(message.data()), message.size()),
                  impl);
}

inline Digest32 double_sha256(std::span<const uint8_t> message,
                              HashImpl impl = HashImpl::Optimized) {
    Digest32 first = sha256(message, impl);
    return sha256(std::span<const uint8_t>(first.data(), first.size()), impl);
}

inline Digest32 double_sha256(std::string_view message, HashImpl impl = HashImpl::Optimized) {
    return double_sha256(
        std::span(reinterpret_cast<const uint8_t*>(message.data()), message.size()), impl);
}

// Compression state after folding `prefix`, whose length must be a positive
// multiple of 64.
inline Midstate sha256_midstate(std::span<const uint8_t> prefix,
                                HashImpl impl = HashImpl::Optimized) {
    if (prefix.empty() || prefix.size() % 64 != 0)
        throw std::invalid_argument("midstate prefix must be a positive multiple of 64 bytes");
    Midstate m;
    std::memcpy(m.state.data(), detail::kInitState, sizeof(detail::kInitState));
    auto compress = detail::compress_for(impl);
    for (size_t off = 0; off < prefix.size(); off += 64)
        compress(m.state.data(), prefix.data() + off);
    m.blocks_consumed = prefix.size() / 64;
    return m;
}

// Resume from a midstate and finish over `tail`. total_len is a consistency
// check: it must equal blocks_consumed * 64 + tail length.
inline Digest32 sha256_finish(const Midstate& mid, std::span<const uint8_t> tail,
                              uint64_t total_len, HashImpl impl = HashImpl::Optimized) {
    if (total_len != mid.blocks_consumed * 64 + tail.size())
        throw std::invalid_argument("total_len inconsistent with midstate and tail");
    if (impl == HashImpl::Naive) {
        Sha256 ctx(mid);
        ctx.update(tail);
        return ctx.finish();
    }
    uint32_t state[8];
    std::memcpy(state, mid.state.data(), sizeof(state));
    detail::finish_tail_opt(state, tail.data(), tail.size(), total_len);
    return detail::state_to_digest(state);
}

// Double SHA-256 of an 80-byte block header. With a cache (midstate over
// bytes 0..64) the optimized path costs 2 compressions per call instead of 3.
inline Digest32 double_sha256_80(std::span<const uint8_t> header, const Midstate* cache = nullptr,
                                 HashImpl impl = HashImpl::Optimized) {
    if (header.size() != 80) throw std::invalid_argument("header must be exactly 80 bytes");
    Digest32 first;
    if (cache != nullptr) {
        if (cache->blocks_consumed != 1)
            throw std::invalid_argument("header cache must cover exactly one block");
        first = sha256_finish(*cache, header.subspan(64), 80, impl);
    } else {
        first = sha256(header, impl);
    }
    return sha256(std::span<const uint8_t>(first.data(), first.size()), impl);
}

}  // namespace picomine
