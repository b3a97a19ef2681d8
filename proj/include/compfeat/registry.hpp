#pragma once

#include "compfeat/feature.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace compfeat {

struct RegistryEntry {
    FeatureExpr expr;
    std::uint64_t multiplicity;
};

// The de-duplicated result of q independent RFSS draws from the output node.
// Entries are sorted by canonical encoding and multiplicities sum to q, so
// the registry (and its file form) is byte-stable across runs and thread
// counts. Immutable after construction.
class FeatureRegistry {
public:
    FeatureRegistry(std::vector<RegistryEntry> entries, std::uint64_t draws,
                    std::uint64_t master_seed, std::uint64_t skeleton_hash);

    const std::vector<RegistryEntry>& entries() const { return entries_; }
    std::size_t distinct_count() const { return entries_.size(); }
    std::uint64_t draws() const { return draws_; }
    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t skeleton_hash() const { return skeleton_hash_; }

    /// Fingerprint of (skeleton hash, seed, draws); embeddings carry it so
    /// that inner products across different registries are rejected.
    std::uint64_t fingerprint() const;

private:
    std::vector<RegistryEntry> entries_;
    std::uint64_t draws_;
    std::uint64_t master_seed_;
    std::uint64_t skeleton_hash_;
};

/// Runs q RFSS draws from out(S), draw i on its own stream derived from
/// (master_seed, i), and merges equal features. The result is independent
/// of `threads`.
FeatureRegistry build_registry(const Skeleton& skeleton, std::uint64_t q,
                               std::uint64_t master_seed, unsigned threads = 1);

struct SparsityStats {
    double mean_atoms = 0.0;    // multiplicity-weighted
    std::uint64_t max_atoms = 0;
    std::uint64_t distinct_count = 0;
    double dedup_ratio = 0.0;   // distinct / draws
};

SparsityStats sparsity_stats(const FeatureRegistry& registry);

struct CooccurrenceResult {
    std::size_t n = 0;
    std::vector<double> corr;            // n x n, row-major
    std::vector<std::uint8_t> zero_variance; // per input node flag

    double at(std::size_t i, std::size_t j) const { return corr[i * n + j]; }
};

/// Pearson correlation matrix of the per-draw indicators "input node i
/// occurs in the feature" (multiplicities counted). Rows/columns of
/// zero-variance indicators are zeroed and flagged; the diagonal is 1
/// where the indicator varies.
CooccurrenceResult cooccurrence_matrix(const FeatureRegistry& registry, std::size_t n_inputs);

/// Versioned binary registry file; round-trips losslessly byte-for-byte.
void save_registry(const FeatureRegistry& registry, const std::string& path);
void write_registry(const FeatureRegistry& registry, std::ostream& out);

/// Loads a registry; the skeleton is needed to decode parameters and its
/// structure hash must match the stored one.
FeatureRegistry load_registry(const std::string& path, const Skeleton& skeleton);
FeatureRegistry read_registry(std::istream& in, const Skeleton& skeleton);

} // namespace compfeat
