#pragma once

#include "compfeat/registry.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace compfeat {

/// One point of the product input space, coordinate v for input node v.
struct InputRecord {
    std::vector<BaseValue> coords;
};

/// Arity and per-coordinate domain checks; throws DomainMismatchError.
void check_record(const Skeleton& skeleton, const InputRecord& x);

/// Product of the atoms' base features; the empty product is 1.
std::complex<double> eval_feature(const Skeleton& skeleton, const FeatureExpr& expr,
                                  const InputRecord& x);

// A point's embedding under a registry. Coordinate d carries its dedup
// weight sqrt(mult_d / q) already multiplied in, so the empirical kernel is
// a plain inner product. In real mode each coordinate is
// w * sqrt(2) * R cos(theta + b) with the phase shift b in {0, pi/2} drawn
// once per registry entry (never per input) from real_seed.
struct Embedding {
    std::vector<std::complex<double>> values;
    std::vector<double> weights; // sqrt(mult_d / q)
    bool real_mode = false;
    std::uint64_t real_seed = 0;
    std::uint64_t registry_fingerprint = 0;
};

Embedding embed(const Skeleton& skeleton, const FeatureRegistry& registry, const InputRecord& x,
                bool real_mode = false, std::uint64_t real_seed = 0);

/// sum_d Re(values_d * conj(values'_d)). Throws UsageError when the two
/// embeddings come from different registries or real-mode settings.
double empirical_kernel(const Embedding& a, const Embedding& b);

/// Phase shifts (0 or pi/2) for every registry entry under real_seed.
std::vector<std::uint8_t> real_phase_bits(const FeatureRegistry& registry,
                                          std::uint64_t real_seed);

// Evaluates many records against one registry. Unique atoms are tabulated
// once so each base feature is computed a single time per record no matter
// how many entries share it.
class BatchEvaluator {
public:
    BatchEvaluator(const Skeleton& skeleton, const FeatureRegistry& registry,
                   bool real_mode = false, std::uint64_t real_seed = 0);

    Embedding operator()(const InputRecord& x) const;

    std::vector<Embedding> evaluate_all(std::span<const InputRecord> records,
                                        unsigned threads = 1) const;

    /// Real-mode embedding matrix, row r = embedding of records[r];
    /// out must hold records.size() * dimension() doubles (row-major).
    void fill_real_matrix(std::span<const InputRecord> records, double* out,
                          unsigned threads = 1) const;

    std::size_t dimension() const { return entry_weights_.size(); }
    bool real_mode() const { return real_mode_; }

private:
    const Skeleton& skeleton_;
    const FeatureRegistry& registry_;
    bool real_mode_;
    std::uint64_t real_seed_;
    std::vector<std::uint8_t> phase_bits_;

    // Flattened unique-atom table: entry d multiplies the unique atoms in
    // atom_indices_[entry_offsets_[d] .. entry_offsets_[d+1]).
    std::vector<FeatureAtom> unique_atoms_;
    std::vector<std::uint32_t> atom_indices_;
    std::vector<std::uint32_t> entry_offsets_;
    std::vector<double> entry_weights_;
};

} // namespace compfeat
