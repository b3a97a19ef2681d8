#pragma once

#include "compfeat/base_space.hpp"
#include "compfeat/skeleton.hpp"

#include <cstdint>
#include <vector>

namespace compfeat {

/// One base feature in a product: which input node, and the drawn parameter.
struct FeatureAtom {
    NodeId input_node;
    BaseParam param;
};

// A sampled random feature: a finite multiset of atoms whose product is the
// feature; the empty multiset is the constant-1 feature. Atoms are kept in
// canonical order (input node, encoded parameter bytes) and the full byte
// encoding is cached, so equality and ordering are plain byte comparisons.
class FeatureExpr {
public:
    FeatureExpr() = default;
    static FeatureExpr from_atoms(const Skeleton& skeleton, std::vector<FeatureAtom> atoms);

    const std::vector<FeatureAtom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }

    /// Canonical encoding: per atom, input node id (u32 LE) then the
    /// parameter encoding. Equal multisets encode identically.
    const std::vector<std::uint8_t>& encoding() const { return encoding_; }

    bool operator==(const FeatureExpr& other) const { return encoding_ == other.encoding_; }
    bool operator<(const FeatureExpr& other) const { return encoding_ < other.encoding_; }

private:
    std::vector<FeatureAtom> atoms_;
    std::vector<std::uint8_t> encoding_;
};

/// Algorithm: at an input node, return the single freshly-drawn atom; at an
/// internal node, sample a degree l from the activation, pick l children
/// uniformly from in(v), recurse, and return the multiset union. Implemented
/// with an explicit work stack; heavy-tailed degree draws cannot overflow
/// the call stack. Throws StructuralError for an unknown node id.
FeatureExpr rfss_sample(const Skeleton& skeleton, NodeId node, RandomStream& rng);

} // namespace compfeat
