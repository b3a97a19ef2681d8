#include "compfeat/feature.hpp"

#include "compfeat/error.hpp"

#include <algorithm>

namespace compfeat {

namespace {

void encode_atom(const Skeleton& skeleton, const FeatureAtom& atom,
                 std::vector<std::uint8_t>& out) {
    NodeId v = atom.input_node;
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    encode_param(skeleton.space(atom.input_node), atom.param, out);
}

} // namespace

FeatureExpr FeatureExpr::from_atoms(const Skeleton& skeleton, std::vector<FeatureAtom> atoms) {
    FeatureExpr expr;
    std::vector<std::pair<std::vector<std::uint8_t>, std::size_t>> keyed(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        encode_atom(skeleton, atoms[i], keyed[i].first);
        keyed[i].second = i;
    }
    std::sort(keyed.begin(), keyed.end());
    expr.atoms_.reserve(atoms.size());
    for (const auto& [key, idx] : keyed) {
        expr.encoding_.insert(expr.encoding_.end(), key.begin(), key.end());
        expr.atoms_.push_back(std::move(atoms[idx]));
    }
    return expr;
}

FeatureExpr rfss_sample(const Skeleton& skeleton, NodeId node, RandomStream& rng) {
    if (!skeleton.is_node(node))
        throw StructuralError("rfss_sample: unknown node id " + std::to_string(node));

    std::vector<FeatureAtom> atoms;
    std::vector<NodeId> work{node};
    while (!work.empty()) {
        NodeId v = work.back();
        work.pop_back();
        if (skeleton.is_input(v)) {
            atoms.push_back({v, sample_base_param(skeleton.space(v), rng)});
            continue;
        }
        const InternalNode& internal = skeleton.internal(v);
        if (internal.inputs.empty())
            throw StructuralError("rfss_sample: internal node " + std::to_string(v) +
                                  " has no in-edges");
        std::uint32_t degree = internal.activation.sample_degree(rng);
        for (std::uint32_t j = 0; j < degree; ++j) {
            std::size_t pick = internal.inputs.size() == 1
                                   ? 0
                                   : static_cast<std::size_t>(
                                         rng.uniform_below(internal.inputs.size()));
            work.push_back(internal.inputs[pick]);
        }
    }
    return FeatureExpr::from_atoms(skeleton, std::move(atoms));
}

} // namespace compfeat
