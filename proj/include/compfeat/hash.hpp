#pragma once

#include <cstdint>
#include <cstddef>
#include <span>

namespace compfeat {

// FNV-1a, used for skeleton/registry fingerprints in file headers.
// Not cryptographic; only has to be stable across platforms and runs.
constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

inline std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes,
                             std::uint64_t seed = kFnvOffset) {
    std::uint64_t h = seed;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= kFnvPrime;
    }
    return h;
}

inline std::uint64_t fnv1a64_u64(std::uint64_t value, std::uint64_t seed = kFnvOffset) {
    std::uint64_t h = seed;
    for (int i = 0; i < 8; ++i) {
        h ^= (value >> (8 * i)) & 0xffu;
        h *= kFnvPrime;
    }
    return h;
}

} // namespace compfeat
