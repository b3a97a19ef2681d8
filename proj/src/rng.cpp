#include "compfeat/rng.hpp"

#include "compfeat/error.hpp"

#include <cmath>
#include <numbers>

namespace compfeat {

namespace {

constexpr std::uint32_t kPhiloxW32A = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW32B = 0xBB67AE85u;
constexpr std::uint32_t kPhiloxM4x32A = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM4x32B = 0xCD9E8D57u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(p);
    hi = static_cast<std::uint32_t>(p >> 32);
}

inline void philox_round(std::array<std::uint32_t, 4>& ctr, const std::array<std::uint32_t, 2>& key) {
    std::uint32_t lo0, hi0, lo1, hi1;
    mul_hi_lo(kPhiloxM4x32A, ctr[0], lo0, hi0);
    mul_hi_lo(kPhiloxM4x32B, ctr[2], lo1, hi1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

inline std::array<std::uint32_t, 4> philox10(std::array<std::uint32_t, 4> ctr,
                                             std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        philox_round(ctr, key);
        key[0] += kPhiloxW32A;
        key[1] += kPhiloxW32B;
    }
    return ctr;
}

} // namespace

RandomStream::RandomStream(std::uint64_t key, std::uint64_t stream_id) {
    key_ = {static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
    // Low half of the counter is the block index, high half the stream id.
    counter_ = {0u, 0u,
                static_cast<std::uint32_t>(stream_id),
                static_cast<std::uint32_t>(stream_id >> 32)};
}

void RandomStream::refill() {
    block_ = philox10(counter_, key_);
    avail_ = 4;
    if (++counter_[0] == 0) ++counter_[1];
}

std::uint32_t RandomStream::next_u32() {
    if (avail_ == 0) refill();
    return block_[4 - avail_--];
}

std::uint64_t RandomStream::next_u64() {
    std::uint64_t lo = next_u32();
    std::uint64_t hi = next_u32();
    return lo | (hi << 32);
}

double RandomStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::uniform_below(std::uint64_t n) {
    if (n == 0) throw ParameterError("uniform_below: n must be >= 1");
    if (n == 1) return 0;
    // Rejection on the biased remainder region keeps the draw exact.
    std::uint64_t threshold = (0ull - n) % n; // 2^64 mod n
    for (;;) {
        std::uint64_t u = next_u64();
        if (u >= threshold) return u % n;
    }
}

int RandomStream::pm_one() {
    return (next_u32() & 1u) ? 1 : -1;
}

double RandomStream::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log1p(-u1)); // log(1-u1); u1 < 1 always
    double angle = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(angle);
    has_cached_normal_ = true;
    return r * std::cos(angle);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(master),
                                        static_cast<std::uint32_t>(master >> 32)};
    std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(a),
                                        static_cast<std::uint32_t>(a >> 32),
                                        static_cast<std::uint32_t>(b),
                                        static_cast<std::uint32_t>(b >> 32)};
    auto out = philox10(ctr, key);
    return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

} // namespace compfeat
