#include "compfeat/kernel_oracle.hpp"

#include "compfeat/error.hpp"

#include <cmath>
#include <complex>
#include <unordered_map>
#include <vector>

namespace compfeat {

namespace {

constexpr double kClampSlack = 1e-9;
constexpr double kMassTarget = 1.0 - 1e-10;

double clamp_child_average(double rho, NodeId v) {
    if (rho > 1.0) {
        if (rho > 1.0 + kClampSlack)
            throw StructuralError("kernel recurrence: child average " + std::to_string(rho) +
                                  " at node " + std::to_string(v) + " exceeds 1");
        return 1.0;
    }
    if (rho < -1.0) {
        if (rho < -1.0 - kClampSlack)
            throw StructuralError("kernel recurrence: child average " + std::to_string(rho) +
                                  " at node " + std::to_string(v) + " is below -1");
        return -1.0;
    }
    return rho;
}

struct NodeEnum {
    std::complex<double> value;
    double error;
};

class Enumerator {
public:
    Enumerator(const Skeleton& skeleton, const InputRecord& x, const InputRecord& y,
               std::uint32_t degree_cap)
        : skeleton_(skeleton), x_(x), y_(y), degree_cap_(degree_cap) {}

    NodeEnum run(NodeId v) {
        auto it = memo_.find(v);
        if (it != memo_.end()) return it->second;
        NodeEnum result = skeleton_.is_input(v) ? leaf(v) : internal(v);
        memo_.emplace(v, result);
        return result;
    }

private:
    NodeEnum leaf(NodeId v) {
        const BaseSpace& space = skeleton_.space(v);
        if (!is_discrete(space))
            throw UnsupportedSpaceError("enumerate_kernel: base space " +
                                        to_string(space.kind()) + " has no finite domain");
        std::size_t count = param_domain_size(space);
        std::complex<double> sum{0.0, 0.0};
        for (std::size_t i = 0; i < count; ++i) {
            BaseParam omega = param_at(space, i);
            sum += eval_base_feature(space, omega, x_.coords[v - 1]) *
                   std::conj(eval_base_feature(space, omega, y_.coords[v - 1]));
        }
        return {sum / static_cast<double>(count), 0.0};
    }

    NodeEnum internal(NodeId v) {
        const InternalNode& node = skeleton_.internal(v);
        const auto coeffs = node.activation.coeffs();
        const std::size_t k = node.inputs.size();

        std::vector<NodeEnum> children(k);
        double child_bound = 0.0;
        double child_error = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            children[i] = run(node.inputs[i]);
            child_bound = std::max(child_bound, std::abs(children[i].value) + children[i].error);
            child_error = std::max(child_error, children[i].error);
        }

        // Enumerate degrees until the activation mass target is met or the
        // cap is hit; whatever is left feeds the truncation bound.
        std::uint32_t max_l = static_cast<std::uint32_t>(coeffs.size()) - 1;
        std::uint32_t limit = std::min(degree_cap_, max_l);
        double mass = 0.0;
        std::uint32_t L = 0;
        for (std::uint32_t l = 0; l <= limit; ++l) {
            mass += coeffs[l];
            L = l;
            if (mass >= kMassTarget) break;
        }

        // Child powers up to L.
        std::vector<std::vector<std::complex<double>>> powers(k);
        for (std::size_t i = 0; i < k; ++i) {
            powers[i].resize(L + 1);
            powers[i][0] = {1.0, 0.0};
            for (std::uint32_t p = 1; p <= L; ++p)
                powers[i][p] = powers[i][p - 1] * children[i].value;
        }

        std::complex<double> total{0.0, 0.0};
        for (std::uint32_t l = 0; l <= L; ++l) {
            if (coeffs[l] == 0.0) continue;
            total += coeffs[l] * moment(powers, 0, l, 1.0);
        }

        // Dropped degrees: sum_{l > L} a_l * B^l (the coefficient table is
        // finite, so this is an exact finite sum), plus first-order
        // propagation of child errors through sigma_hat'(B).
        double tail_bound = 0.0;
        double b_pow = std::pow(child_bound, static_cast<double>(L) + 1.0);
        for (std::size_t l = L + 1; l < coeffs.size(); ++l) {
            tail_bound += coeffs[l] * b_pow;
            b_pow *= child_bound;
        }
        double lipschitz = 0.0;
        if (child_error > 0.0) {
            double bp = 1.0;
            for (std::size_t l = 1; l < coeffs.size(); ++l) {
                lipschitz += static_cast<double>(l) * coeffs[l] * bp;
                bp *= child_bound;
            }
        }
        return {total, tail_bound + lipschitz * child_error};
    }

    // Sum over compositions (c_i, ..., c_{k-1}) of `remaining` of
    //   P(composition) * prod_j E_j^{c_j},
    // recursing child by child with exact binomial splitting so every
    // partial weight stays in [0, 1].
    std::complex<double> moment(const std::vector<std::vector<std::complex<double>>>& powers,
                                std::size_t child, std::uint32_t remaining, double prob) {
        const std::size_t k = powers.size();
        if (child == k - 1) return prob * powers[child][remaining];
        const double p_here = 1.0 / static_cast<double>(k - child);
        std::complex<double> sum{0.0, 0.0};
        // binom(remaining, c) * p^c * (1-p)^(remaining-c), built incrementally
        double weight = std::pow(1.0 - p_here, static_cast<double>(remaining));
        for (std::uint32_t c = 0; c <= remaining; ++c) {
            if (weight > 0.0)
                sum += powers[child][c] *
                       moment(powers, child + 1, remaining - c, prob * weight);
            if (c < remaining) {
                weight *= p_here / (1.0 - p_here);
                weight *= static_cast<double>(remaining - c) / static_cast<double>(c + 1);
            }
        }
        return sum;
    }

    const Skeleton& skeleton_;
    const InputRecord& x_;
    const InputRecord& y_;
    std::uint32_t degree_cap_;
    std::unordered_map<NodeId, NodeEnum> memo_;
};

} // namespace

double exact_kernel(const Skeleton& skeleton, const InputRecord& x, const InputRecord& y) {
    check_record(skeleton, x);
    check_record(skeleton, y);

    const std::size_t n = skeleton.num_inputs();
    const std::size_t m = skeleton.num_nodes();
    std::vector<double> k_value(m + 1, 0.0);
    std::vector<char> done(m + 1, 0);
    for (NodeId v = 1; v <= n; ++v) {
        k_value[v] = base_kernel(skeleton.input_spaces()[v - 1], x.coords[v - 1], y.coords[v - 1]);
        done[v] = 1;
    }
    std::vector<NodeId> stack{skeleton.output()};
    while (!stack.empty()) {
        NodeId v = stack.back();
        if (done[v]) {
            stack.pop_back();
            continue;
        }
        const InternalNode& node = skeleton.internal(v);
        if (node.inputs.empty())
            throw StructuralError("exact_kernel: internal node " + std::to_string(v) +
                                  " has no in-edges");
        bool ready = true;
        for (NodeId u : node.inputs) {
            if (!skeleton.is_node(u))
                throw StructuralError("exact_kernel: bad edge into node " + std::to_string(v));
            if (!done[u]) {
                stack.push_back(u);
                ready = false;
            }
        }
        if (!ready) continue;
        double sum = 0.0;
        for (NodeId u : node.inputs) sum += k_value[u];
        double rho = clamp_child_average(sum / static_cast<double>(node.inputs.size()), v);
        k_value[v] = node.activation.evaluate(rho);
        done[v] = 1;
        stack.pop_back();
    }
    return k_value[skeleton.output()];
}

double mc_kernel(const Skeleton& skeleton, const InputRecord& x, const InputRecord& y,
                 std::uint64_t q, std::uint64_t seed, bool real_mode, std::uint64_t real_seed) {
    if (q == 0) throw ParameterError("mc_kernel: q must be >= 1");
    FeatureRegistry registry = build_registry(skeleton, q, seed);
    Embedding ex = embed(skeleton, registry, x, real_mode, real_seed);
    Embedding ey = embed(skeleton, registry, y, real_mode, real_seed);
    return empirical_kernel(ex, ey);
}

EnumeratedKernel enumerate_kernel(const Skeleton& skeleton, const InputRecord& x,
                                  const InputRecord& y, std::uint32_t degree_cap) {
    check_record(skeleton, x);
    check_record(skeleton, y);
    auto violations = validate(skeleton);
    if (!violations.empty())
        throw StructuralError("enumerate_kernel: invalid skeleton (" +
                              violations.front().message + ")");
    Enumerator enumerator(skeleton, x, y, degree_cap);
    NodeEnum result = enumerator.run(skeleton.output());
    // The kernel is real; the imaginary residue is enumeration round-off.
    return {result.value.real(), result.error + std::abs(result.value.imag())};
}

} // namespace compfeat
