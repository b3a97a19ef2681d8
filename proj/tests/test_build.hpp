#pragma once

// Skeleton construction helpers shared by the test suites.

#include "compfeat/skeleton.hpp"

#include <vector>

namespace testbuild {

using namespace compfeat;

/// Output is the input node itself.
inline Skeleton single_input(BaseSpace space) {
    return Skeleton({std::move(space)}, {}, 1);
}

/// One internal node fed by every input.
inline Skeleton flat(std::vector<BaseSpace> spaces, ConjugateActivation act) {
    NodeId out = static_cast<NodeId>(spaces.size() + 1);
    std::vector<NodeId> all;
    for (NodeId v = 1; v <= spaces.size(); ++v) all.push_back(v);
    return Skeleton(std::move(spaces), {{std::move(act), std::move(all)}}, out);
}

/// A flat layer followed by depth-1 chained single-parent nodes; complexity
/// is sigma_prime(act)^depth for any shared activation.
inline Skeleton layered_chain(std::vector<BaseSpace> spaces, const ConjugateActivation& act,
                              unsigned depth) {
    std::vector<InternalNode> internal;
    std::vector<NodeId> all;
    for (NodeId v = 1; v <= spaces.size(); ++v) all.push_back(v);
    NodeId next = static_cast<NodeId>(spaces.size() + 1);
    internal.push_back({act, all});
    for (unsigned layer = 1; layer < depth; ++layer) {
        internal.push_back({act, {next}});
        ++next;
    }
    return Skeleton(std::move(spaces), std::move(internal), next);
}

/// Two-layer locality structure: inputs grouped into patches of
/// `patch_size`, one internal node per patch, one output over the patches.
inline Skeleton two_layer_local(std::vector<BaseSpace> spaces, std::size_t patch_size,
                                const ConjugateActivation& act) {
    const std::size_t n = spaces.size();
    std::vector<InternalNode> internal;
    NodeId next = static_cast<NodeId>(n + 1);
    std::vector<NodeId> patches;
    for (std::size_t start = 0; start < n; start += patch_size) {
        std::vector<NodeId> in;
        for (std::size_t i = start; i < std::min(start + patch_size, n); ++i)
            in.push_back(static_cast<NodeId>(i + 1));
        internal.push_back({act, std::move(in)});
        patches.push_back(next++);
    }
    internal.push_back({act, std::move(patches)});
    return Skeleton(std::move(spaces), std::move(internal), next);
}

inline std::vector<BaseSpace> repeated(BaseSpace space, std::size_t count) {
    return std::vector<BaseSpace>(count, space);
}

} // namespace testbuild
