#!/usr/bin/env python3
"""Independent oracle for the frozen test fixtures.

Recomputes every golden value used by the C++ test suites with nothing but
hashlib and Python big integers: known-answer hashes, compact-target
decodings, difficulty conversions, and one full job -> coinbase -> merkle ->
header -> winning-nonce chain. Run it to regenerate tests/fixtures.hpp; the
checked-in copy was produced by this script and is meant to stay frozen.
"""

import hashlib
import random
import sys

DIFF1 = 0xFFFF << 208


def sha256(b: bytes) -> bytes:
    return hashlib.sha256(b).digest()


def sha256d(b: bytes) -> bytes:
    return sha256(sha256(b))


def word_swap(b: bytes) -> bytes:
    """Reverse the bytes inside each aligned 4-byte word."""
    assert len(b) % 4 == 0
    return b"".join(b[i : i + 4][::-1] for i in range(0, len(b), 4))


def le32_from_hex(h: str) -> bytes:
    """8-char big-endian hex -> 4 bytes little-endian."""
    assert len(h) == 8
    return bytes.fromhex(h)[::-1]


def decode_compact(nbits: int) -> int:
    size = nbits >> 24
    word = nbits & 0x007FFFFF
    if size <= 3:
        word >>= 8 * (3 - size)
        return word
    return word << (8 * (size - 3))


def merkle_fold(coinbase: bytes, branches) -> bytes:
    root = sha256d(coinbase)
    for br in branches:
        root = sha256d(root + br)
    return root


def build_header_prefix(version_hex, prevhash_hex, merkle_root, ntime_hex, nbits_hex) -> bytes:
    h = le32_from_hex(version_hex)
    h += word_swap(bytes.fromhex(prevhash_hex))
    h += merkle_root[::-1]
    h += le32_from_hex(ntime_hex)
    h += le32_from_hex(nbits_hex)
    assert len(h) == 76
    return h


def hash_value(digest: bytes) -> int:
    return int.from_bytes(digest, "little")


def scan_nonce(prefix: bytes, target: int, limit: int = 1 << 22):
    for nonce in range(limit):
        digest = sha256d(prefix + nonce.to_bytes(4, "little"))
        if hash_value(digest) <= target:
            return nonce, digest
    raise RuntimeError("no nonce found within limit")


def cpp_hex(b: bytes) -> str:
    return b.hex()


def main() -> None:
    out = []
    emit = out.append

    # --- FIPS 180-2 known answers (sanity: recompute via hashlib) ---
    fips = [
        (b"", "empty"),
        (b"abc", "abc"),
        (b"abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq", "two_block"),
        (
            b"abcdefghbcdefghicdefghijdefghijkefghijklfghijklmghijklmnhijklmno"
            b"ijklmnopjklmnopqklmnopqrlmnopqrsmnopqrstnopqrstu",
            "four_block",
        ),
    ]
    emit("// FIPS 180-2 single SHA-256 known answers")
    for msg, name in fips:
        emit(f'inline constexpr const char* kSha256_{name} = "{sha256(msg).hex()}";')
    emit(f'inline constexpr const char* kSha256d_empty = "{sha256d(b"").hex()}";')
    emit("")

    # --- compact target vectors ---
    rng = random.Random(0x5EED)
    emit("// nbits -> target, big-integer oracle; sign bit never set")
    emit("struct CompactVector { uint32_t nbits; const char* target_hex; };")
    emit("inline constexpr CompactVector kCompactVectors[] = {")
    specials = [0x1D00FFFF, 0x03001234, 0x01110000, 0x1C2AC4AF, 0x170355F0, 0x00000000, 0x01003456, 0x04123456, 0x20123456]
    vectors = list(specials)
    while len(vectors) < 109:
        nbits = rng.getrandbits(32) & ~0x00800000
        # keep the decoded value inside 256 bits
        if decode_compact(nbits) >> 256:
            continue
        vectors.append(nbits)
    for nbits in vectors:
        emit(f'    {{0x{nbits:08x}u, "{decode_compact(nbits):064x}"}},')
    emit("};")
    emit("")

    # --- difficulty conversions ---
    emit("// floor(diff1 / difficulty), big-integer oracle")
    emit(f'inline constexpr const char* kTargetDiff1 = "{DIFF1:064x}";')
    emit(f'inline constexpr const char* kTargetDiff2 = "{DIFF1 // 2:064x}";')
    emit(f'inline constexpr const char* kTargetDiff13912524048946 = "{DIFF1 // 13912524048946:064x}";')
    # 2**-16 is exact in binary so the rational route reproduces the shift
    emit(f'inline constexpr const char* kTargetDiffTiny = "{DIFF1 << 16:064x}";  // difficulty 2^-16')
    emit("")

    # --- golden job fixture ---
    # Template values follow the classic Stratum documentation example job.
    version = "00000002"
    prevhash = "4d16b6f85af6e2198f44ae2a6de67f78487ae5611b77c6c0440b921e00000000"
    coinb1 = (
        "01000000010000000000000000000000000000000000000000000000000000000000000000"
        "ffffffff20020862062f503253482f04b8864e5008"
    )
    coinb2 = (
        "072f736c7573682f000000000100f2052a010000001976a914d23fcdf86f7e756a64a7a9"
        "688ef9903327048ed988ac00000000"
    )
    nbits = "1c2ac4af"
    ntime = "504e86b9"
    branches = [sha256(f"branch-{i}".encode()) for i in range(3)]
    extranonce1 = "08000002"
    extranonce2 = "00000005"
    share_difficulty = 2.0 ** -16
    share_target = DIFF1 << 16  # diff1 / 2^-16, exact

    coinbase = bytes.fromhex(coinb1 + extranonce1 + extranonce2 + coinb2)
    root = merkle_fold(coinbase, branches)
    prefix = build_header_prefix(version, prevhash, root, ntime, nbits)
    nonce, digest = scan_nonce(prefix, share_target)

    emit("// One frozen job -> coinbase -> merkle root -> header -> winning nonce chain.")
    emit("// Recomputed end to end by this repo's scripts/make_golden.py.")
    emit("struct GoldenJob {")
    emit("    const char* version;")
    emit("    const char* prevhash;")
    emit("    const char* coinbase1;")
    emit("    const char* coinbase2;")
    emit("    const char* branches[3];")
    emit("    const char* nbits;")
    emit("    const char* ntime;")
    emit("    const char* extranonce1;")
    emit("    const char* extranonce2;")
    emit("    double share_difficulty;")
    emit("    const char* share_target_hex;")
    emit("    const char* coinbase_hex;")
    emit("    const char* merkle_root_hex;")
    emit("    const char* header_prefix_hex;")
    emit("    uint32_t winning_nonce;")
    emit("    const char* winning_hash_hex;")
    emit("};")
    emit("inline constexpr GoldenJob kGoldenJob = {")
    emit(f'    "{version}",')
    emit(f'    "{prevhash}",')
    emit(f'    "{coinb1}",')
    emit(f'    "{coinb2}",')
    emit("    {" + ", ".join(f'"{b.hex()}"' for b in branches) + "},")
    emit(f'    "{nbits}",')
    emit(f'    "{ntime}",')
    emit(f'    "{extranonce1}",')
    emit(f'    "{extranonce2}",')
    emit(f"    {share_difficulty!r},")
    emit(f'    "{share_target:064x}",')
    emit(f'    "{coinbase.hex()}",')
    emit(f'    "{root.hex()}",')
    emit(f'    "{prefix.hex()}",')
    emit(f"    {nonce}u,")
    emit(f'    "{digest.hex()}",')
    emit("};")
    emit("")

    # --- Eq-style expectation: expected seconds for the estimate check ---
    seconds = 13912524048946 * 2**32 / 100e12
    emit(f"inline constexpr double kEstimateSecondsAt100TH = {seconds!r};  // difficulty 13912524048946")
    emit(f"inline constexpr double kEstimateYearsAt100TH = {seconds / (365 * 24 * 3600)!r};")

    body = "\n".join(out)
    header = (
        "// Frozen oracle fixtures. Generated by scripts/make_golden.py; do not edit by hand.\n"
        "#pragma once\n\n#include <cstdint>\n\nnamespace fixtures {\n\n"
        + body
        + "\n\n}  // namespace fixtures\n"
    )
    path = sys.argv[1] if len(sys.argv) > 1 else "tests/fixtures.hpp"
    with open(path, "w") as f:
        f.write(header)
    print(f"nonce={nonce} hash={digest.hex()}")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
