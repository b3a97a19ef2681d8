#pragma once

#include <cstddef>
#include <span>

// Data-parallel inner loops behind the embedding and learner hot paths.
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The variant is picked once at startup from cpuid and
// can be overridden with force_backend() or COMPFEAT_SIMD=scalar|avx2.
// The two implementations are equivalence-tested against each other.
namespace compfeat::simd {

enum class Backend { scalar, avx2 };

Backend active_backend();
bool avx2_supported();

/// Select a backend explicitly. Throws ParameterError if the requested
/// backend is not supported on this machine.
void force_backend(Backend backend);

/// Sum of a[i] * b[i].
double dot(const double* a, const double* b, std::size_t n);

/// Sum of (a[i] - b[i])^2.
double squared_distance(const double* a, const double* b, std::size_t n);

/// y[i] += alpha * x[i].
void axpy(double alpha, const double* x, double* y, std::size_t n);

inline double dot(std::span<const double> a, std::span<const double> b) {
    return dot(a.data(), b.data(), a.size());
}
inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    return squared_distance(a.data(), b.data(), a.size());
}

namespace detail {
double dot_scalar(const double* a, const double* b, std::size_t n);
double squared_distance_scalar(const double* a, const double* b, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
#if defined(COMPFEAT_HAVE_AVX2_TU)
double dot_avx2(const double* a, const double* b, std::size_t n);
double squared_distance_avx2(const double* a, const double* b, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
#endif
} // namespace detail

} // namespace compfeat::simd
