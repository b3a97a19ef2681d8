// AVX2+FMA kernel variants. This TU is the only one compiled with -mavx2;
// callers must check avx2_supported() first (the dispatcher does).

#include "compfeat/simd.hpp"

#if defined(COMPFEAT_HAVE_AVX2_TU)

#include <immintrin.h>

namespace compfeat::simd::detail {

namespace {
inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}
} // namespace

double dot_avx2(const double* a, const double* b, std::size_t n) {
    std::size_t tail = n & 3;
    std::size_t main = n - tail;
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < main; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i);
        __m256d vb = _mm256_loadu_pd(b + i);
        acc = _mm256_fmadd_pd(va, vb, acc);
    }
    double result = hsum(acc);
    for (std::size_t i = main; i < n; ++i) result += a[i] * b[i];
    return result;
}

double squared_distance_avx2(const double* a, const double* b, std::size_t n) {
    std::size_t tail = n & 3;
    std::size_t main = n - tail;
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < main; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double result = hsum(acc);
    for (std::size_t i = main; i < n; ++i) {
        double d = a[i] - b[i];
        result += d * d;
    }
    return result;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    std::size_t tail = n & 3;
    std::size_t main = n - tail;
    __m256d va = _mm256_set1_pd(alpha);
    for (std::size_t i = 0; i < main; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (std::size_t i = main; i < n; ++i) y[i] += alpha * x[i];
}

} // namespace compfeat::simd::detail

#endif // COMPFEAT_HAVE_AVX2_TU
