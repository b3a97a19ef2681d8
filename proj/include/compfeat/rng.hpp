#pragma once

#include <array>
#include <cstdint>

namespace compfeat {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//
// A stream is identified by (key, stream_id). Streams with the same key and
// different ids are statistically independent, and a stream's output depends
// only on its identity and how many values were consumed, never on which
// thread runs it. That property is what makes registry construction
// reproducible across thread counts.
class RandomStream {
public:
    RandomStream(std::uint64_t key, std::uint64_t stream_id);

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    /// Uniform double in [0, 1), 53 random bits.
    double uniform();

    /// Uniform integer in [0, n); unbiased (rejection sampling). n >= 1.
    std::uint64_t uniform_below(std::uint64_t n);

    /// -1 or +1 with equal probability.
    int pm_one();

    /// Standard normal via Box-Muller; second value of each pair is cached.
    double normal();

private:
    void refill();

    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> block_{};
    int avail_ = 0;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

/// Deterministic sub-seed derivation: one Philox block keyed by `master`
/// over the counter (a, b). Used to hand independent seeds to trials,
/// budgets and registry draws without coordination.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

} // namespace compfeat
