#pragma once

#include "compfeat/activation.hpp"
#include "compfeat/base_space.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace compfeat {

using NodeId = std::uint32_t; // 1-based; inputs are 1..n, internal n+1..m

struct InternalNode {
    ConjugateActivation activation;
    std::vector<NodeId> inputs; // in(v), order as given
};

// A computation skeleton: input nodes carry base spaces, internal nodes
// carry conjugate activations and in-edge lists, and a single sink is the
// output. The constructor only stores the structure; validate() reports
// invariant violations so that invalid graphs can be inspected.
class Skeleton {
public:
    Skeleton(std::vector<BaseSpace> input_spaces, std::vector<InternalNode> internal_nodes,
             NodeId output);

    std::size_t num_inputs() const { return input_spaces_.size(); }
    std::size_t num_nodes() const { return input_spaces_.size() + internal_nodes_.size(); }
    NodeId output() const { return output_; }

    bool is_input(NodeId v) const { return v >= 1 && v <= input_spaces_.size(); }
    bool is_node(NodeId v) const { return v >= 1 && v <= num_nodes(); }

    const BaseSpace& space(NodeId v) const;
    const InternalNode& internal(NodeId v) const;
    const std::vector<BaseSpace>& input_spaces() const { return input_spaces_; }
    const std::vector<InternalNode>& internal_nodes() const { return internal_nodes_; }

    /// Stable fingerprint of the full structure (spaces, activation
    /// coefficients, edges, output); used in registry and model files.
    std::uint64_t structure_hash() const;

private:
    std::vector<BaseSpace> input_spaces_;
    std::vector<InternalNode> internal_nodes_;
    NodeId output_;
};

struct Violation {
    enum class Code {
        bad_output,       // output id is not a node
        bad_edge,         // in-edge references a nonexistent node
        empty_inputs,     // internal node with |in(v)| = 0
        multiple_sinks,   // a node other than the output has out-degree 0
        output_has_out,   // the output node feeds another node
        cycle,            // directed cycle
        unreachable,      // node with no directed path to the output
    };
    Code code;
    std::string message;
    std::vector<NodeId> nodes;
};

/// Returns every invariant violation; empty means the skeleton is valid.
std::vector<Violation> validate(const Skeleton& skeleton);

inline bool is_valid(const Skeleton& skeleton) { return validate(skeleton).empty(); }

/// Expected number of base-feature atoms in one sampled feature:
/// 1 at input nodes, sigma_prime_at_one(v) * mean over in(v) elsewhere.
/// Throws StructuralError on invalid skeletons.
double complexity(const Skeleton& skeleton);

/// Per-node complexity values (index 0 unused), for the CLI trace.
std::vector<double> complexity_per_node(const Skeleton& skeleton);

} // namespace compfeat
