#include "compfeat/simd.hpp"

#include "compfeat/error.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace compfeat::simd {

namespace {

using DotFn = double (*)(const double*, const double*, std::size_t);
using AxpyFn = void (*)(double, const double*, double*, std::size_t);

struct Table {
    DotFn dot;
    DotFn sqdist;
    AxpyFn axpy;
    Backend backend;
};

Table make_table(Backend backend) {
#if defined(COMPFEAT_HAVE_AVX2_TU)
    if (backend == Backend::avx2) {
        return {detail::dot_avx2, detail::squared_distance_avx2, detail::axpy_avx2,
                Backend::avx2};
    }
#endif
    return {detail::dot_scalar, detail::squared_distance_scalar, detail::axpy_scalar,
            Backend::scalar};
}

bool cpu_has_avx2() {
#if defined(COMPFEAT_HAVE_AVX2_TU) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend initial_backend() {
    if (const char* env = std::getenv("COMPFEAT_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Backend::avx2;
    }
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::mutex g_mutex;
std::atomic<const Table*> g_table{nullptr};

const Table* table() {
    const Table* t = g_table.load(std::memory_order_acquire);
    if (t) return t;
    std::lock_guard<std::mutex> lock(g_mutex);
    t = g_table.load(std::memory_order_relaxed);
    if (!t) {
        static Table storage = make_table(initial_backend());
        g_table.store(&storage, std::memory_order_release);
        t = &storage;
    }
    return t;
}

} // namespace

Backend active_backend() { return table()->backend; }

bool avx2_supported() { return cpu_has_avx2(); }

void force_backend(Backend backend) {
    if (backend == Backend::avx2 && !cpu_has_avx2())
        throw ParameterError("simd: AVX2 backend not supported on this CPU/build");
    std::lock_guard<std::mutex> lock(g_mutex);
    static Table forced;
    forced = make_table(backend);
    g_table.store(&forced, std::memory_order_release);
}

double dot(const double* a, const double* b, std::size_t n) {
    return table()->dot(a, b, n);
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    return table()->sqdist(a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    table()->axpy(alpha, x, y, n);
}

} // namespace compfeat::simd
