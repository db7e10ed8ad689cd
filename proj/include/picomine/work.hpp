#pragma once

// Work assembly and nonce search: coinbase and merkle-root construction,
// 80-byte header serialization, budgeted nonce scanning, and extranonce2
// bookkeeping.
//
// Byte-order conventions (the mock pool mirrors these exactly):
//   - version / ntime / nbits / nonce travel as 8-char big-endian hex and
//     serialize little-endian into the header;
//   - the notify prevhash has its bytes reversed inside each aligned 4-byte
//     word before insertion (the de-facto Stratum delivery order);
//   - the merkle root is folded over raw digests and inserted byte-reversed;
//   - the final digest is compared to targets as a little-endian integer.

#include <array>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "picomine/hex.hpp"
#include "picomine/sha256.hpp"
#include "picomine/stratum.hpp"
#include "picomine/target.hpp"

namespace picomine {

using HeaderPrefix = std::array<uint8_t, 76>;

// Immutable snapshot handed to nonce-search workers.
struct WorkUnit {
    std::string job_id;
    HeaderPrefix header_prefix{};
    Target256 share_target;
    Target256 network_target;
    std::string extranonce2;  // fixed-width hex
    std::string ntime;        // 8-char hex
};

// A candidate solution heading for mining.submit.
struct Share {
    std::string job_id;
    std::string extranonce2;
    std::string ntime;
    uint32_t nonce = 0;
    Digest32 hash{};
};

struct SearchOutcome {
    std::optional<std::pair<uint32_t, Digest32>> found;
    uint64_t hashes_attempted = 0;
    bool exhausted = false;
};

// coinbase = coin1 || extranonce1 || extranonce2 || coin2, all hex-decoded.
inline std::vector<uint8_t> build_coinbase(std::string_view coin1, std::string_view extranonce1,
                                           std::string_view extranonce2, std::string_view coin2,
                                           int extranonce2_size) {
    if (extranonce2.size() != static_cast<size_t>(2 * extranonce2_size))
        throw std::invalid_argument("extranonce2 width does not match extranonce2_size");
    std::vector<uint8_t> out = hex_to_bytes(coin1);
    auto append = [&out](std::string_view hexpart) {
        auto bytes = hex_to_bytes(hexpart);
        out.insert(out.end(), bytes.begin(), bytes.end());
    };
    append(extranonce1);
    append(extranonce2);
    append(coin2);
    return out;
}

// Left-fold double SHA-256 over the coinbase and the pre-prepared branches.
inline Digest32 compute_merkle_root(std::span<const uint8_t> coinbase,
                                    const std::vector<Digest32>& branches,
                                    HashImpl impl = HashImpl::Optimized) {
    Digest32 root = double_sha256(coinbase, impl);
    uint8_t concat[64];
    for (const Digest32& branch : branches) {
        std::memcpy(concat, root.data(), 32);
        std::memcpy(concat + 32, branch.data(), 32);
        root = double_sha256(std::span<const uint8_t>(concat, 64), impl);
    }
    return root;
}

// Serialize the nonceless 76-byte header: version(4) || prevhash(32) ||
// reversed merkle root(32) || ntime(4) || nbits(4).
inline HeaderPrefix build_header_prefix(std::string_view version_hex, std::string_view prevhash_hex,
                                        const Digest32& merkle_root, std::string_view ntime_hex,
                                        std::string_view nbits_hex) {
    if (prevhash_hex.size() != 64 || !is_hex(prevhash_hex))
        throw std::invalid_argument("prevhash: expected 64 hex chars");
    HeaderPrefix h{};
    write_le32(h.data(), hex_to_u32(version_hex));
    auto prev = hex_to_bytes(prevhash_hex);
    swap_bytes_per_word32(prev.data(), prev.size());
    std::memcpy(h.data() + 4, prev.data(), 32);
    Digest32 root_rev = reversed32(merkle_root);
    std::memcpy(h.data() + 36, root_rev.data(), 32);
    write_le32(h.data() + 68, hex_to_u32(ntime_hex));
    write_le32(h.data() + 72, hex_to_u32(nbits_hex));
    return h;
}

// Scan nonces start, start+1, ... for at most `count` attempts, stopping at
// the 2^32 wrap. Returns the first hit, or exhausted once the scanned range
// is done. The optimized implementation reuses one midstate over the header's
// first 64 bytes for the entire scan.
inline SearchOutcome search_nonce(const HeaderPrefix& prefix, const Target256& target,
                                  uint32_t start, uint64_t count,
                                  HashImpl impl = HashImpl::Optimized) {
    if (count == 0) throw std::invalid_argument("nonce budget must be at least 1");
    uint8_t header[80];
    std::memcpy(header, prefix.data(), 76);
    uint64_t range = std::min<uint64_t>(count, (uint64_t{1} << 32) - start);

    SearchOutcome out;
    if (impl == HashImpl::Optimized) {
        Midstate cache = sha256_midstate(std::span<const uint8_t>(header, 64));
        for (uint64_t i = 0; i < range; ++i) {
            uint32_t nonce = start + static_cast<uint32_t>(i);
            write_le32(header + 76, nonce);
            Digest32 d = double_sha256_80(std::span<const uint8_t>(header, 80), &cache,
                                          HashImpl::Optimized);
            if (hash_meets_target(d, target)) {
                out.found = {nonce, d};
                out.hashes_attempted = i + 1;
                return out;
            }
        }
    } else {
        for (uint64_t i = 0; i < range; ++i) {
            uint32_t nonce = start + static_cast<uint32_t>(i);
            write_le32(header + 76, nonce);
            Digest32 d = double_sha256(std::span<const uint8_t>(header, 80), HashImpl::Naive);
            if (hash_meets_target(d, target)) {
                out.found = {nonce, d};
                out.hashes_attempted = i + 1;
                return out;
            }
        }
    }
    out.hashes_attempted = range;
    out.exhausted = true;
    return out;
}

// value + 1 modulo 2^(8*size), rendered as fixed-width hex.
inline std::string next_extranonce2(std::string_view current, int size) {
    if (size < 1 || size > 16) throw std::invalid_argument("extranonce2 size out of range [1,16]");
    if (current.size() != static_cast<size_t>(2 * size) || !is_hex(current))
        throw std::invalid_argument("extranonce2 width does not match size");
    auto bytes = hex_to_bytes(current);
    for (int i = size - 1; i >= 0; --i) {
        if (++bytes[i] != 0) break;  // stop once a byte doesn't wrap
    }
    return bytes_to_hex(bytes);
}

// Disjoint (start, count) ranges covering the full 32-bit nonce space.
inline std::vector<std::pair<uint32_t, uint64_t>> split_nonce_ranges(int workers) {
    if (workers < 1) throw std::invalid_argument("need at least one worker");
    std::vector<std::pair<uint32_t, uint64_t>> out;
    uint64_t total = uint64_t{1} << 32;
    uint64_t begin = 0;
    for (int w = 0; w < workers; ++w) {
        uint64_t end = total * (w + 1) / workers;
        out.emplace_back(static_cast<uint32_t>(begin), end - begin);
        begin = end;
    }
    return out;
}

// Assemble the immutable work snapshot for one (job, extranonce2) pair.
inline WorkUnit make_work_unit(const JobNotification& job, std::string_view extranonce1,
                               std::string_view extranonce2, int extranonce2_size,
                               double share_difficulty) {
    WorkUnit w;
    w.job_id = job.job_id;
    w.extranonce2 = std::string(extranonce2);
    w.ntime = job.ntime;
    auto coinbase =
        build_coinbase(job.coinbase1, extranonce1, extranonce2, job.coinbase2, extranonce2_size);
    Digest32 root = compute_merkle_root(coinbase, [&] {
        std::vector<Digest32> branches;
        branches.reserve(job.merkle_branches.size());
        for (const auto& b : job.merkle_branches) branches.push_back(hex_to_bytes32(b));
        return branches;
    }());
    w.header_prefix = build_header_prefix(job.version, job.prevhash, root, job.ntime, job.nbits);
    w.share_target = difficulty_to_target(share_difficulty);
    w.network_target = decode_compact_target(hex_to_u32(job.nbits));
    return w;
}

}  // namespace picomine
