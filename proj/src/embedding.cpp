#include "compfeat/embedding.hpp"

#include "compfeat/error.hpp"
#include "compfeat/simd.hpp"
#include "compfeat/threads.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace compfeat {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

double entry_weight(std::uint64_t multiplicity, std::uint64_t draws) {
    return std::sqrt(static_cast<double>(multiplicity) / static_cast<double>(draws));
}

// b = 0: sqrt(2) R cos(theta) = sqrt(2) Re(psi)
// b = pi/2: sqrt(2) R cos(theta + pi/2) = -sqrt(2) Im(psi)
inline double realize(std::complex<double> value, std::uint8_t phase_bit) {
    return phase_bit ? -kSqrt2 * value.imag() : kSqrt2 * value.real();
}

} // namespace

void check_record(const Skeleton& skeleton, const InputRecord& x) {
    if (x.coords.size() != skeleton.num_inputs())
        throw DomainMismatchError("input record has " + std::to_string(x.coords.size()) +
                                  " coordinates, skeleton has " +
                                  std::to_string(skeleton.num_inputs()) + " inputs");
    for (std::size_t i = 0; i < x.coords.size(); ++i)
        check_value(skeleton.input_spaces()[i], x.coords[i]);
}

std::complex<double> eval_feature(const Skeleton& skeleton, const FeatureExpr& expr,
                                  const InputRecord& x) {
    std::complex<double> product{1.0, 0.0};
    for (const auto& atom : expr.atoms()) {
        if (!skeleton.is_input(atom.input_node))
            throw DomainMismatchError("feature atom references non-input node " +
                                      std::to_string(atom.input_node));
        if (atom.input_node > x.coords.size())
            throw DomainMismatchError("input record too short for feature atom");
        product *= eval_base_feature(skeleton.space(atom.input_node), atom.param,
                                     x.coords[atom.input_node - 1]);
    }
    return product;
}

std::vector<std::uint8_t> real_phase_bits(const FeatureRegistry& registry,
                                          std::uint64_t real_seed) {
    std::vector<std::uint8_t> bits(registry.distinct_count());
    for (std::size_t d = 0; d < bits.size(); ++d) {
        RandomStream rng(real_seed, d);
        bits[d] = static_cast<std::uint8_t>(rng.next_u32() & 1u);
    }
    return bits;
}

Embedding embed(const Skeleton& skeleton, const FeatureRegistry& registry, const InputRecord& x,
                bool real_mode, std::uint64_t real_seed) {
    check_record(skeleton, x);
    Embedding e;
    e.real_mode = real_mode;
    e.real_seed = real_mode ? real_seed : 0;
    e.registry_fingerprint = registry.fingerprint();
    e.values.reserve(registry.distinct_count());
    e.weights.reserve(registry.distinct_count());
    std::vector<std::uint8_t> bits;
    if (real_mode) bits = real_phase_bits(registry, real_seed);
    std::size_t d = 0;
    for (const auto& entry : registry.entries()) {
        double w = entry_weight(entry.multiplicity, registry.draws());
        std::complex<double> value = eval_feature(skeleton, entry.expr, x);
        e.weights.push_back(w);
        if (real_mode) {
            e.values.emplace_back(w * realize(value, bits[d]), 0.0);
        } else {
            e.values.push_back(w * value);
        }
        ++d;
    }
    return e;
}

double empirical_kernel(const Embedding& a, const Embedding& b) {
    if (a.registry_fingerprint != b.registry_fingerprint)
        throw UsageError("empirical_kernel: embeddings come from different registries");
    if (a.real_mode != b.real_mode || a.real_seed != b.real_seed)
        throw UsageError("empirical_kernel: embeddings use different real-mode settings");
    if (a.values.size() != b.values.size())
        throw UsageError("empirical_kernel: dimension mismatch");
    // Re(sum_d a_d conj(b_d)) = dot of the interleaved (re,im) doubles.
    return simd::dot(reinterpret_cast<const double*>(a.values.data()),
                     reinterpret_cast<const double*>(b.values.data()), 2 * a.values.size());
}

BatchEvaluator::BatchEvaluator(const Skeleton& skeleton, const FeatureRegistry& registry,
                               bool real_mode, std::uint64_t real_seed)
    : skeleton_(skeleton), registry_(registry), real_mode_(real_mode),
      real_seed_(real_mode ? real_seed : 0) {
    if (real_mode_) phase_bits_ = real_phase_bits(registry, real_seed);

    std::map<std::vector<std::uint8_t>, std::uint32_t> atom_ids;
    entry_offsets_.reserve(registry.distinct_count() + 1);
    entry_offsets_.push_back(0);
    std::vector<std::uint8_t> key;
    for (const auto& entry : registry.entries()) {
        for (const auto& atom : entry.expr.atoms()) {
            key.clear();
            NodeId v = atom.input_node;
            for (int i = 0; i < 4; ++i) key.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
            encode_param(skeleton.space(v), atom.param, key);
            auto [it, inserted] =
                atom_ids.try_emplace(key, static_cast<std::uint32_t>(unique_atoms_.size()));
            if (inserted) unique_atoms_.push_back(atom);
            atom_indices_.push_back(it->second);
        }
        entry_offsets_.push_back(static_cast<std::uint32_t>(atom_indices_.size()));
        entry_weights_.push_back(entry_weight(entry.multiplicity, registry.draws()));
    }
}

Embedding BatchEvaluator::operator()(const InputRecord& x) const {
    check_record(skeleton_, x);
    Embedding e;
    e.real_mode = real_mode_;
    e.real_seed = real_seed_;
    e.registry_fingerprint = registry_.fingerprint();
    e.weights = entry_weights_;
    e.values.resize(entry_weights_.size());

    std::vector<std::complex<double>> atom_values(unique_atoms_.size());
    for (std::size_t a = 0; a < unique_atoms_.size(); ++a) {
        const auto& atom = unique_atoms_[a];
        atom_values[a] = eval_base_feature(skeleton_.space(atom.input_node), atom.param,
                                           x.coords[atom.input_node - 1]);
    }
    for (std::size_t d = 0; d < entry_weights_.size(); ++d) {
        std::complex<double> product{1.0, 0.0};
        for (std::uint32_t k = entry_offsets_[d]; k < entry_offsets_[d + 1]; ++k)
            product *= atom_values[atom_indices_[k]];
        if (real_mode_) {
            e.values[d] = {entry_weights_[d] * realize(product, phase_bits_[d]), 0.0};
        } else {
            e.values[d] = entry_weights_[d] * product;
        }
    }
    return e;
}

std::vector<Embedding> BatchEvaluator::evaluate_all(std::span<const InputRecord> records,
                                                    unsigned threads) const {
    std::vector<Embedding> out(records.size());
    parallel_for(records.size(), threads, [&](std::size_t r) { out[r] = (*this)(records[r]); });
    return out;
}

void BatchEvaluator::fill_real_matrix(std::span<const InputRecord> records, double* out,
                                      unsigned threads) const {
    if (!real_mode_) throw UsageError("fill_real_matrix requires a real-mode evaluator");
    const std::size_t dim = dimension();
    parallel_for(records.size(), threads, [&](std::size_t r) {
        Embedding e = (*this)(records[r]);
        for (std::size_t d = 0; d < dim; ++d) out[r * dim + d] = e.values[d].real();
    });
}

} // namespace compfeat
