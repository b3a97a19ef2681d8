#pragma once

#include "compfeat/embedding.hpp"

#include <cstdint>

namespace compfeat {

/// Exact compositional kernel k_S by the bottom-up recurrence: base kernels
/// at input nodes, sigma_hat_v(mean of in(v)) at internal nodes. Closed
/// forms are used where the activation kind provides one. Averaged child
/// values drifting past [-1,1] by <= 1e-9 are clamped; larger excursions
/// throw (they indicate a non-normalized base, not rounding).
double exact_kernel(const Skeleton& skeleton, const InputRecord& x, const InputRecord& y);

/// Monte Carlo estimate: builds a fresh q-draw registry from `seed` and
/// returns the empirical kernel of the two embeddings.
double mc_kernel(const Skeleton& skeleton, const InputRecord& x, const InputRecord& y,
                 std::uint64_t q, std::uint64_t seed, bool real_mode = false,
                 std::uint64_t real_seed = 0);

struct EnumeratedKernel {
    double value = 0.0;
    double truncation_bound = 0.0; // rigorous bound on the dropped mass
};

/// Brute-force oracle: E[psi(omega,x) conj(psi(omega,y))] by exact
/// enumeration of the sampling tree — base parameters over their finite
/// domains at the leaves, and at internal nodes every degree l (until the
/// cumulative activation mass reaches 1 - 1e-10, capped at degree_cap)
/// with every child multiset weighted by its multinomial probability.
/// Requires all base spaces discrete; throws UnsupportedSpaceError otherwise.
EnumeratedKernel enumerate_kernel(const Skeleton& skeleton, const InputRecord& x,
                                  const InputRecord& y, std::uint32_t degree_cap);

} // namespace compfeat
