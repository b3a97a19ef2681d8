#include "compfeat/skeleton.hpp"

#include "compfeat/error.hpp"
#include "compfeat/hash.hpp"

#include <algorithm>
#include <cstring>

namespace compfeat {

Skeleton::Skeleton(std::vector<BaseSpace> input_spaces, std::vector<InternalNode> internal_nodes,
                   NodeId output)
    : input_spaces_(std::move(input_spaces)), internal_nodes_(std::move(internal_nodes)),
      output_(output) {
    if (input_spaces_.empty()) throw StructuralError("skeleton: at least one input node required");
}

const BaseSpace& Skeleton::space(NodeId v) const {
    if (!is_input(v)) throw StructuralError("node " + std::to_string(v) + " is not an input node");
    return input_spaces_[v - 1];
}

const InternalNode& Skeleton::internal(NodeId v) const {
    if (!is_node(v) || is_input(v))
        throw StructuralError("node " + std::to_string(v) + " is not an internal node");
    return internal_nodes_[v - 1 - input_spaces_.size()];
}

std::uint64_t Skeleton::structure_hash() const {
    std::uint64_t h = kFnvOffset;
    auto mix_u64 = [&h](std::uint64_t v) { h = fnv1a64_u64(v, h); };
    auto mix_f64 = [&](double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        mix_u64(bits);
    };
    mix_u64(input_spaces_.size());
    for (const auto& space : input_spaces_) {
        mix_u64(static_cast<std::uint64_t>(space.kind()));
        mix_u64(space.extent());
        mix_f64(space.scale());
    }
    mix_u64(internal_nodes_.size());
    for (const auto& node : internal_nodes_) {
        mix_u64(static_cast<std::uint64_t>(node.activation.kind()));
        mix_u64(node.activation.coeffs().size());
        for (double a : node.activation.coeffs()) mix_f64(a);
        mix_u64(node.inputs.size());
        for (NodeId u : node.inputs) mix_u64(u);
    }
    mix_u64(output_);
    return h;
}

namespace {

std::string join_ids(const std::vector<NodeId>& ids) {
    std::string s;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(ids[i]);
    }
    return s;
}

} // namespace

std::vector<Violation> validate(const Skeleton& skeleton) {
    std::vector<Violation> out;
    const std::size_t n = skeleton.num_inputs();
    const std::size_t m = skeleton.num_nodes();

    if (!skeleton.is_node(skeleton.output())) {
        out.push_back({Violation::Code::bad_output,
                       "output id " + std::to_string(skeleton.output()) + " is not a node",
                       {skeleton.output()}});
        return out; // structure checks below need a usable output id
    }

    // Forward adjacency and out-degrees from the in-edge lists.
    std::vector<std::vector<NodeId>> succ(m + 1);
    bool edges_ok = true;
    for (std::size_t i = 0; i < skeleton.internal_nodes().size(); ++i) {
        NodeId v = static_cast<NodeId>(n + 1 + i);
        const auto& node = skeleton.internal_nodes()[i];
        if (node.inputs.empty()) {
            out.push_back({Violation::Code::empty_inputs,
                           "internal node " + std::to_string(v) + " has no in-edges",
                           {v}});
        }
        for (NodeId u : node.inputs) {
            if (!skeleton.is_node(u)) {
                out.push_back({Violation::Code::bad_edge,
                               "node " + std::to_string(v) + " references nonexistent node " +
                                   std::to_string(u),
                               {v, u}});
                edges_ok = false;
            } else {
                succ[u].push_back(v);
            }
        }
    }

    std::vector<NodeId> sinks;
    for (NodeId v = 1; v <= m; ++v)
        if (succ[v].empty()) sinks.push_back(v);
    for (NodeId v : sinks) {
        if (v != skeleton.output())
            out.push_back({Violation::Code::multiple_sinks,
                           "node " + std::to_string(v) + " has out-degree 0 but is not the output",
                           {v}});
    }
    if (!succ[skeleton.output()].empty())
        out.push_back({Violation::Code::output_has_out,
                       "output node " + std::to_string(skeleton.output()) + " feeds other nodes",
                       {skeleton.output()}});

    // Cycle detection: iterative three-color DFS over the forward graph.
    if (edges_ok) {
        enum : std::uint8_t { white, gray, black };
        std::vector<std::uint8_t> color(m + 1, white);
        std::vector<NodeId> order_stack;
        for (NodeId start = 1; start <= m; ++start) {
            if (color[start] != white) continue;
            std::vector<std::pair<NodeId, std::size_t>> stack{{start, 0}};
            color[start] = gray;
            order_stack.assign(1, start);
            while (!stack.empty()) {
                auto& [v, next] = stack.back();
                if (next < succ[v].size()) {
                    NodeId u = succ[v][next++];
                    if (color[u] == white) {
                        color[u] = gray;
                        stack.push_back({u, 0});
                        order_stack.push_back(u);
                    } else if (color[u] == gray) {
                        // The gray suffix of the DFS path starting at u is a cycle.
                        std::vector<NodeId> cycle;
                        auto it = std::find(order_stack.begin(), order_stack.end(), u);
                        cycle.assign(it, order_stack.end());
                        out.push_back({Violation::Code::cycle,
                                       "cycle through nodes " + join_ids(cycle), cycle});
                        color[u] = black; // report each cycle once
                    }
                } else {
                    color[v] = black;
                    stack.pop_back();
                    order_stack.pop_back();
                }
            }
        }
    }

    // Reverse reachability from the output.
    std::vector<char> reaches(m + 1, 0);
    std::vector<NodeId> work{skeleton.output()};
    reaches[skeleton.output()] = 1;
    while (!work.empty()) {
        NodeId v = work.back();
        work.pop_back();
        if (!skeleton.is_input(v)) {
            for (NodeId u : skeleton.internal(v).inputs) {
                if (skeleton.is_node(u) && !reaches[u]) {
                    reaches[u] = 1;
                    work.push_back(u);
                }
            }
        }
    }
    for (NodeId v = 1; v <= m; ++v) {
        if (!reaches[v])
            out.push_back({Violation::Code::unreachable,
                           "node " + std::to_string(v) + " has no directed path to the output",
                           {v}});
    }

    return out;
}

std::vector<double> complexity_per_node(const Skeleton& skeleton) {
    auto violations = validate(skeleton);
    if (!violations.empty())
        throw StructuralError("complexity: invalid skeleton (" + violations.front().message + ")");

    const std::size_t n = skeleton.num_inputs();
    const std::size_t m = skeleton.num_nodes();
    std::vector<double> c(m + 1, 0.0);
    std::vector<char> done(m + 1, 0);
    for (NodeId v = 1; v <= n; ++v) {
        c[v] = 1.0;
        done[v] = 1;
    }
    // Internal nodes in increasing id order are not necessarily topological;
    // resolve with an explicit dependency-driven stack.
    for (NodeId v = static_cast<NodeId>(n + 1); v <= m; ++v) {
        if (done[v]) continue;
        std::vector<NodeId> stack{v};
        while (!stack.empty()) {
            NodeId w = stack.back();
            if (done[w]) {
                stack.pop_back();
                continue;
            }
            const auto& node = skeleton.internal(w);
            bool ready = true;
            for (NodeId u : node.inputs) {
                if (!done[u]) {
                    stack.push_back(u);
                    ready = false;
                }
            }
            if (!ready) continue;
            double sum = 0.0;
            for (NodeId u : node.inputs) sum += c[u];
            c[w] = node.activation.sigma_prime_at_one() * sum /
                   static_cast<double>(node.inputs.size());
            done[w] = 1;
            stack.pop_back();
        }
    }
    return c;
}

double complexity(const Skeleton& skeleton) {
    return complexity_per_node(skeleton)[skeleton.output()];
}

} // namespace compfeat
