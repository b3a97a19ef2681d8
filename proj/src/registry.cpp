#include "compfeat/registry.hpp"

#include "compfeat/error.hpp"
#include "compfeat/hash.hpp"
#include "compfeat/threads.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace compfeat {

namespace {

constexpr char kMagic[4] = {'C', 'F', 'R', 'G'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
    char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>(v >> (8 * i));
    out.write(buf, 4);
}

void write_u64(std::ostream& out, std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>(v >> (8 * i));
    out.write(buf, 8);
}

std::uint32_t read_u32(std::istream& in) {
    unsigned char buf[4];
    in.read(reinterpret_cast<char*>(buf), 4);
    if (!in) throw ParseError("registry file: truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
    return v;
}

std::uint64_t read_u64(std::istream& in) {
    unsigned char buf[8];
    in.read(reinterpret_cast<char*>(buf), 8);
    if (!in) throw ParseError("registry file: truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
}

} // namespace

FeatureRegistry::FeatureRegistry(std::vector<RegistryEntry> entries, std::uint64_t draws,
                                 std::uint64_t master_seed, std::uint64_t skeleton_hash)
    : entries_(std::move(entries)), draws_(draws), master_seed_(master_seed),
      skeleton_hash_(skeleton_hash) {
    std::uint64_t total = 0;
    for (const auto& e : entries_) total += e.multiplicity;
    if (total != draws_)
        throw UsageError("registry: multiplicities sum to " + std::to_string(total) +
                         ", expected " + std::to_string(draws_));
}

std::uint64_t FeatureRegistry::fingerprint() const {
    std::uint64_t h = fnv1a64_u64(skeleton_hash_);
    h = fnv1a64_u64(master_seed_, h);
    h = fnv1a64_u64(draws_, h);
    return h;
}

FeatureRegistry build_registry(const Skeleton& skeleton, std::uint64_t q,
                               std::uint64_t master_seed, unsigned threads) {
    if (q == 0) throw ParameterError("build_registry: q must be >= 1");
    auto violations = validate(skeleton);
    if (!violations.empty())
        throw StructuralError("build_registry: invalid skeleton (" + violations.front().message +
                              ")");

    std::vector<FeatureExpr> draws(q);
    parallel_for(q, threads, [&](std::size_t i) {
        RandomStream rng(master_seed, i);
        draws[i] = rfss_sample(skeleton, skeleton.output(), rng);
    });

    // Sort-then-merge: the multiset of draws is thread-count independent,
    // so the sorted entry list is too.
    std::sort(draws.begin(), draws.end());
    std::vector<RegistryEntry> entries;
    for (std::size_t i = 0; i < draws.size();) {
        std::size_t j = i + 1;
        while (j < draws.size() && draws[j] == draws[i]) ++j;
        entries.push_back({std::move(draws[i]), static_cast<std::uint64_t>(j - i)});
        i = j;
    }
    return FeatureRegistry(std::move(entries), q, master_seed, skeleton.structure_hash());
}

SparsityStats sparsity_stats(const FeatureRegistry& registry) {
    SparsityStats stats;
    stats.distinct_count = registry.distinct_count();
    if (registry.draws() == 0) return stats;
    double weighted_atoms = 0.0;
    for (const auto& e : registry.entries()) {
        weighted_atoms += static_cast<double>(e.multiplicity) * static_cast<double>(e.expr.size());
        stats.max_atoms = std::max(stats.max_atoms, static_cast<std::uint64_t>(e.expr.size()));
    }
    stats.mean_atoms = weighted_atoms / static_cast<double>(registry.draws());
    stats.dedup_ratio =
        static_cast<double>(stats.distinct_count) / static_cast<double>(registry.draws());
    return stats;
}

CooccurrenceResult cooccurrence_matrix(const FeatureRegistry& registry, std::size_t n_inputs) {
    if (registry.entries().empty()) throw UsageError("cooccurrence_matrix: empty registry");
    CooccurrenceResult result;
    result.n = n_inputs;
    result.corr.assign(n_inputs * n_inputs, 0.0);
    result.zero_variance.assign(n_inputs, 0);

    const double q = static_cast<double>(registry.draws());
    // Indicator moments, multiplicity-weighted. occ is 0/1 per (entry, node).
    std::vector<double> mean(n_inputs, 0.0);
    std::vector<double> comoment(n_inputs * n_inputs, 0.0);
    std::vector<char> occ(n_inputs);
    for (const auto& e : registry.entries()) {
        std::fill(occ.begin(), occ.end(), 0);
        for (const auto& atom : e.expr.atoms()) {
            if (atom.input_node >= 1 && atom.input_node <= n_inputs)
                occ[atom.input_node - 1] = 1;
        }
        double w = static_cast<double>(e.multiplicity) / q;
        for (std::size_t i = 0; i < n_inputs; ++i) {
            if (!occ[i]) continue;
            mean[i] += w;
            for (std::size_t j = 0; j < n_inputs; ++j)
                if (occ[j]) comoment[i * n_inputs + j] += w;
        }
    }

    std::vector<double> stddev(n_inputs, 0.0);
    for (std::size_t i = 0; i < n_inputs; ++i) {
        double var = comoment[i * n_inputs + i] - mean[i] * mean[i];
        if (var <= 0.0) {
            result.zero_variance[i] = 1;
        } else {
            stddev[i] = std::sqrt(var);
        }
    }
    for (std::size_t i = 0; i < n_inputs; ++i) {
        for (std::size_t j = 0; j < n_inputs; ++j) {
            if (result.zero_variance[i] || result.zero_variance[j]) continue;
            if (i == j) {
                result.corr[i * n_inputs + j] = 1.0;
            } else {
                double cov = comoment[i * n_inputs + j] - mean[i] * mean[j];
                result.corr[i * n_inputs + j] = cov / (stddev[i] * stddev[j]);
            }
        }
    }
    return result;
}

void write_registry(const FeatureRegistry& registry, std::ostream& out) {
    out.write(kMagic, 4);
    write_u32(out, kVersion);
    write_u64(out, registry.master_seed());
    write_u64(out, registry.skeleton_hash());
    write_u64(out, registry.draws());
    write_u64(out, registry.distinct_count());
    for (const auto& e : registry.entries()) {
        write_u64(out, e.multiplicity);
        write_u32(out, static_cast<std::uint32_t>(e.expr.size()));
        const auto& bytes = e.expr.encoding();
        write_u64(out, bytes.size());
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    }
    if (!out) throw IoError("registry write failed");
}

void save_registry(const FeatureRegistry& registry, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    write_registry(registry, out);
}

FeatureRegistry read_registry(std::istream& in, const Skeleton& skeleton) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw ParseError("registry file: bad magic");
    std::uint32_t version = read_u32(in);
    if (version != kVersion)
        throw ParseError("registry file: unsupported version " + std::to_string(version));
    std::uint64_t master_seed = read_u64(in);
    std::uint64_t skeleton_hash = read_u64(in);
    if (skeleton_hash != skeleton.structure_hash())
        throw UsageError("registry file was built for a different skeleton");
    std::uint64_t draws = read_u64(in);
    std::uint64_t count = read_u64(in);

    std::vector<RegistryEntry> entries;
    entries.reserve(count);
    for (std::uint64_t e = 0; e < count; ++e) {
        std::uint64_t multiplicity = read_u64(in);
        std::uint32_t atom_count = read_u32(in);
        std::uint64_t byte_count = read_u64(in);
        std::vector<std::uint8_t> bytes(byte_count);
        in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(byte_count));
        if (!in) throw ParseError("registry file: truncated entry");
        std::vector<FeatureAtom> atoms;
        atoms.reserve(atom_count);
        std::size_t offset = 0;
        for (std::uint32_t a = 0; a < atom_count; ++a) {
            if (offset + 4 > bytes.size()) throw ParseError("registry file: truncated atom");
            NodeId node = 0;
            for (int i = 0; i < 4; ++i)
                node |= static_cast<NodeId>(bytes[offset + i]) << (8 * i);
            offset += 4;
            if (!skeleton.is_input(node))
                throw ParseError("registry file: atom references non-input node " +
                                 std::to_string(node));
            atoms.push_back({node, decode_param(skeleton.space(node), bytes, offset)});
        }
        if (offset != bytes.size()) throw ParseError("registry file: trailing atom bytes");
        entries.push_back(
            {FeatureExpr::from_atoms(skeleton, std::move(atoms)), multiplicity});
    }
    return FeatureRegistry(std::move(entries), draws, master_seed, skeleton_hash);
}

FeatureRegistry load_registry(const std::string& path, const Skeleton& skeleton) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return read_registry(in, skeleton);
}

} // namespace compfeat
