// Frozen oracle fixtures. Generated by scripts/make_golden.py; do not edit by hand.
#pragma once

#include <cstdint>

namespace fixtures {

// FIPS 180-2 single SHA-256 known answers
inline constexpr const char* kSha256_empty = "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855";
inline constexpr const char* kSha256_abc = "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad";
inline constexpr const char* kSha256_two_block = "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1";
inline constexpr const char* kSha256_four_block = "cf5b16a778af8380036ce59e7b0492370b249b11e8f07a51afac45037afee9d1";
inline constexpr const char* kSha256d_empty = "5df6e0e2761359d30a8275058e299fcc0381534545f55cf43e41983f5d4c9456";

// nbits -> target, big-integer oracle; sign bit never set
struct CompactVector { uint32_t nbits; const char* target_hex; };
inline constexpr CompactVector kCompactVectors[] = {
    {0x1d00ffffu, "00000000ffff0000000000000000000000000000000000000000000000000000"},
    {0x03001234u, "0000000000000000000000000000000000000000000000000000000000001234"},
    {0x01110000u, "0000000000000000000000000000000000000000000000000000000000000011"},
    {0x1c2ac4afu, "000000002ac4af00000000000000000000000000000000000000000000000000"},
    {0x170355f0u, "0000000000000000000355f00000000000000000000000000000000000000000"},
    {0x00000000u, "0000000000000000000000000000000000000000000000000000000000000000"},
    {0x01003456u, "0000000000000000000000000000000000000000000000000000000000000000"},
    {0x04123456u, "0000000000000000000000000000000000000000000000000000000012345600"},
    {0x20123456u, "1234560000000000000000000000000000000000000000000000000000000000"},
    {0x0e6c783bu, "0000000000000000000000000000000000006c783b0000000000000000000000"},
    {0x0c69fcbau, "000000000000000000000000000000000000000069fcba000000000000000000"},
    {0x0d50e066u, "0000000000000000000000000000000000000050e06600000000000000000000"},
    {0x1c098788u, "0000000009878800000000000000000000000000000000000000000000000000"},
    {0x1b447ae9u, "0000000000447ae9000000000000000000000000000000000000000000000000"},
    {0x0a41595au, "0000000000000000000000000000000000000000000041595a00000000000000"},
    {0x02265866u, "0000000000000000000000000000000000000000000000000000000000002658"},
    {0x0c596849u, "0000000000000000000000000000000000000000596849000000000000000000"},
    {0x1a43f6a6u, "00000000000043f6a60000000000000000000000000000000000000000000000"},
    {0x1b3658ffu, "00000000003658ff000000000000000000000000000000000000000000000000"},
    {0x0f6c8fcdu, "00000000000000000000000000000000006c8fcd000000000000000000000000"},
    {0x067be1c1u, "00000000000000000000000000000000000000000000000000007be1c1000000"},
    {0x1b0b7497u, "00000000000b7497000000000000000000000000000000000000000000000000"},
    {0x185a15e5u, "00000000000000005a15e5000000000000000000000000000000000000000000"},
    {0x1a7e5607u, "0000000000007e56070000000000000000000000000000000000000000000000"},
    {0x066d2240u, "00000000000000000000000000000000000000000000000000006d2240000000"},
    {0x185876d8u, "00000000000000005876d8000000000000000000000000000000000000000000"},
    {0x03641ccdu, "0000000000000000000000000000000000000000000000000000000000641ccd"},
    {0x0d461203u, "0000000000000000000000000000000000000046120300000000000000000000"},
    {0x075ec507u, "000000000000000000000000000000000000000000000000005ec50700000000"},
    {0x0933a072u, "000000000000000000000000000000000000000000000033a072000000000000"},
    {0x1d1fc8d5u, "0000001fc8d50000000000000000000000000000000000000000000000000000"},
    {0x1c74de9au, "0000000074de9a00000000000000000000000000000000000000000000000000"},
    {0x1d1a41fdu, "0000001a41fd0000000000000000000000000000000000000000000000000000"},
    {0x0b07334cu, "00000000000000000000000000000000000000000007334c0000000000000000"},
    {0x1f5fb2e9u, "005fb2e900000000000000000000000000000000000000000000000000000000"},
    {0x1730ddf5u, "00000000000000000030ddf50000000000000000000000000000000000000000"},
    {0x193a3a3bu, "000000000000003a3a3b00000000000000000000000000000000000000000000"},
    {0x0234302au, "0000000000000000000000000000000000000000000000000000000000003430"},
    {0x1c22cd0du, "0000000022cd0d00000000000000000000000000000000000000000000000000"},
    {0x0c12de20u, "000000000000000000000000000000000000000012de20000000000000000000"},
    {0x200b12f9u, "0b12f90000000000000000000000000000000000000000000000000000000000"},
    {0x095e29afu, "00000000000000000000000000000000000000000000005e29af000000000000"},
    {0x0678895eu, "000000000000000000000000000000000000000000000000000078895e000000"},
    {0x101c3295u, "000000000000000000000000000000001c329500000000000000000000000000"},
    {0x2047e1cbu, "47e1cb0000000000000000000000000000000000000000000000000000000000"},
    {0x012b76d3u, "000000000000000000000000000000000000000000000000000000000000002b"},
    {0x1a29f06du, "00000000000029f06d0000000000000000000000000000000000000000000000"},
    {0x0109b7ccu, "0000000000000000000000000000000000000000000000000000000000000009"},
    {0x0a655decu, "00000000000000000000000000000000000000000000655dec00000000000000"},
    {0x1f5c4f02u, "005c4f0200000000000000000000000000000000000000000000000000000000"},
    {0x032d4578u, "00000000000000000000000000000000000000000000000000000000002d4578"},
    {0x05216e35u, "000000000000000000000000000000000000000000000000000000216e350000"},
    {0x1a21f989u, "00000000000021f9890000000000000000000000000000000000000000000000"},
    {0x0c030116u, "0000000000000000000000000000000000000000030116000000000000000000"},
    {0x10774398u, "0000000000000000000000000000000077439800000000000000000000000000"},
    {0x154e7357u, "00000000000000000000004e7357000000000000000000000000000000000000"},
    {0x17408afeu, "000000000000000000408afe0000000000000000000000000000000000000000"},
    {0x0f23c875u, "000000000000000000000000000000000023c875000000000000000000000000"},
    {0x12732cbfu, "0000000000000000000000000000732cbf000000000000000000000000000000"},
    {0x02145b92u, "000000000000000000000000000000000000000000000000000000000000145b"},
    {0x0021ab96u, "0000000000000000000000000000000000000000000000000000000000000000"},
    {0x1056a381u, "0000000000000000000000000000000056a38100000000000000000000000000"},
    {0x1626dcffu, "0000000000000000000026dcff00000000000000000000000000000000000000"},
    {0x1b300d93u, "0000000000300d93000000000000000000000000000000000000000000000000"},
    {0x0d29c0f8u, "0000000000000000000000000000000000000029c0f800000000000000000000"},
    {0x0d09d2b9u, "0000000000000000000000000000000000000009d2b900000000000000000000"},
    {0x064fdee2u, "00000000000000000000000000000000000000000000000000004fdee2000000"},
    {0x085a354fu, "0000000000000000000000000000000000000000000000005a354f0000000000"},
    {0x00276cddu, "0000000000000000000000000000000000000000000000000000000000000000"},
    {0x00742c35u, "0000000000000000000000000000000000000000000000000000000000000000"},
    {0x160234ffu, "000000000000000000000234ff00000000000000000000000000000000000000"},
    {0x181a0563u, "00000000000000001a0563000000000000000000000000000000000000000000"},
    {0x007268ffu, "0000000000000000000000000000000000000000000000000000000000000000"},
    {0x02141566u, "0000000000000000000000000000000000000000000000000000000000001415"},
    {0x1d48b2bfu, "00000048b2bf0000000000000000000000000000000000000000000000000000"},
    {0x0603c87du, "000000000000000000000000000000000000000000000000000003c87d000000"},
    {0x0916eddbu, "000000000000000000000000000000000000000000000016eddb000000000000"},
    {0x04056574u, "0000000000000000000000000000000000000000000000000000000005657400"},
    {0x105e31f8u, "000000000000000000000000000000005e31f800000000000000000000000000"},
    {0x1e28c38du, "000028c38d000000000000000000000000000000000000000000000000000000"},
    {0x16330269u, "0000000000000000000033026900000000000000000000000000000000000000"},
    {0x111d0912u, "0000000000000000000000000000001d09120000000000000000000000000000"},
    {0x007e2d76u, "0000000000000000000000000000000000000000000000000000000000000000"},
    {0x00670916u, "0000000000000000000000000000000000000000000000000000000000000000"},
    {0x163b4e04u, "000000000000000000003b4e0400000000000000000000000000000000000000"},
    {0x15221bc3u, "0000000000000000000000221bc3000000000000000000000000000000000000"},
    {0x056ad661u, "0000000000000000000000000000000000000000000000000000006ad6610000"},
    {0x126dfb96u, "00000000000000000000000000006dfb96000000000000000000000000000000"},
    {0x033f5cf6u, "00000000000000000000000000000000000000000000000000000000003f5cf6"},
    {0x0027a96bu, "0000000000000000000000000000000000000000000000000000000000000000"},
    {0x0158694au, "0000000000000000000000000000000000000000000000000000000000000058"},
    {0x0a1c16f5u, "000000000000000000000000000000000000000000001c16f500000000000000"},
    {0x1305db62u, "0000000000000000000000000005db6200000000000000000000000000000000"},
    {0x1552eb00u, "000000000000000000000052eb00000000000000000000000000000000000000"},
    {0x0708a308u, "0000000000000000000000000000000000000000000000000008a30800000000"},
    {0x09795bd9u, "0000000000000000000000000000000000000000000000795bd9000000000000"},
    {0x094d2e07u, "00000000000000000000000000000000000000000000004d2e07000000000000"},
    {0x11369024u, "0000000000000000000000000000003690240000000000000000000000000000"},
    {0x07167be8u, "00000000000000000000000000000000000000000000000000167be800000000"},
    {0x2031d540u, "31d5400000000000000000000000000000000000000000000000000000000000"},
    {0x0b4f165eu, "0000000000000000000000000000000000000000004f165e0000000000000000"},
    {0x15373b19u, "0000000000000000000000373b19000000000000000000000000000000000000"},
    {0x0645936eu, "000000000000000000000000000000000000000000000000000045936e000000"},
    {0x1d7d6c45u, "0000007d6c450000000000000000000000000000000000000000000000000000"},
    {0x1f0a09ddu, "000a09dd00000000000000000000000000000000000000000000000000000000"},
    {0x1e736c4cu, "0000736c4c000000000000000000000000000000000000000000000000000000"},
    {0x090f5ba6u, "00000000000000000000000000000000000000000000000f5ba6000000000000"},
    {0x183b4707u, "00000000000000003b4707000000000000000000000000000000000000000000"},
    {0x11373f1cu, "000000000000000000000000000000373f1c0000000000000000000000000000"},
};

// floor(diff1 / difficulty), big-integer oracle
inline constexpr const char* kTargetDiff1 = "00000000ffff0000000000000000000000000000000000000000000000000000";
inline constexpr const char* kTargetDiff2 = "000000007fff8000000000000000000000000000000000000000000000000000";
inline constexpr const char* kTargetDiff13912524048946 = "000000000000000000143b40ffffffda539c446a44b06b6bb98e8ff2c58bc79f";
inline constexpr const char* kTargetDiffTiny = "0000ffff00000000000000000000000000000000000000000000000000000000";  // difficulty 2^-16

// One frozen job -> coinbase -> merkle root -> header -> winning nonce chain.
// Recomputed end to end by this repo's scripts/make_golden.py.
struct GoldenJob {
    const char* version;
    const char* prevhash;
    const char* coinbase1;
    const char* coinbase2;
    const char* branches[3];
    const char* nbits;
    const char* ntime;
    const char* extranonce1;
    const char* extranonce2;
    double share_difficulty;
    const char* share_target_hex;
    const char* coinbase_hex;
    const char* merkle_root_hex;
    const char* header_prefix_hex;
    uint32_t winning_nonce;
    const char* winning_hash_hex;
};
inline constexpr GoldenJob kGoldenJob = {
    "00000002",
    "4d16b6f85af6e2198f44ae2a6de67f78487ae5611b77c6c0440b921e00000000",
    "01000000010000000000000000000000000000000000000000000000000000000000000000ffffffff20020862062f503253482f04b8864e5008",
    "072f736c7573682f000000000100f2052a010000001976a914d23fcdf86f7e756a64a7a9688ef9903327048ed988ac00000000",
    {"59bb1fe0d2b2202f6780bfe19f9d845f8709c745f358f826b2ab02a510da070e", "064e57314e3f26e664ffcbc1526ac0622c044a3dd3228c964340490da8e75b8a", "b1b9158d0d5d266bdd6f53758fce2fbf782e1ec63e62b6da85bd0ff675628ff3"},
    "1c2ac4af",
    "504e86b9",
    "08000002",
    "00000005",
    1.52587890625e-05,
    "0000ffff00000000000000000000000000000000000000000000000000000000",
    "01000000010000000000000000000000000000000000000000000000000000000000000000ffffffff20020862062f503253482f04b8864e50080800000200000005072f736c7573682f000000000100f2052a010000001976a914d23fcdf86f7e756a64a7a9688ef9903327048ed988ac00000000",
    "79f8f2909c587a5c14aee8ba054a8f144fe77a5ff418b1e8f86b04b627135140",
    "02000000f8b6164d19e2f65a2aae448f787fe66d61e57a48c0c6771b1e920b440000000040511327b6046bf8e8b118f45f7ae74f148f4a05bae8ae145c7a589c90f2f879b9864e50afc42a1c",
    196037u,
    "d80af852f3e95a50470be917b5e7eba158d841724be501c5434734bc9aef0000",
};

inline constexpr double kEstimateSecondsAt100TH = 597538357.9503658;  // difficulty 13912524048946
inline constexpr double kEstimateYearsAt100TH = 18.947817032926363;

}  // namespace fixtures
