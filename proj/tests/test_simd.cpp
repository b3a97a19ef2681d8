#include <doctest.h>

#include "compfeat/rng.hpp"
#include "compfeat/simd.hpp"

#include <cmath>
#include <vector>

using namespace compfeat;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t stream) {
    RandomStream rng(77, stream);
    std::vector<double> v(n);
    for (double& x : v) x = rng.normal();
    return v;
}

const std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 31, 64, 100, 1023};

} // namespace

TEST_CASE("scalar reference values") {
    double a[] = {1.0, 2.0, 3.0, 4.0, 5.0};
    double b[] = {2.0, -1.0, 0.5, 0.0, 3.0};
    CHECK(simd::detail::dot_scalar(a, b, 5) == doctest::Approx(16.5).epsilon(1e-15));
    CHECK(simd::detail::squared_distance_scalar(a, b, 5) ==
          doctest::Approx(1.0 + 9.0 + 6.25 + 16.0 + 4.0).epsilon(1e-15));
    double y[] = {1.0, 1.0, 1.0, 1.0, 1.0};
    simd::detail::axpy_scalar(2.0, a, y, 5);
    CHECK(y[0] == 3.0);
    CHECK(y[4] == 11.0);
}

#if defined(COMPFEAT_HAVE_AVX2_TU)
TEST_CASE("avx2 variants match scalar") {
    if (!simd::avx2_supported()) {
        MESSAGE("AVX2 not available; equivalence checked at dispatch level only");
        return;
    }
    for (std::size_t n : kSizes) {
        auto a = random_vec(n, 2 * n);
        auto b = random_vec(n, 2 * n + 1);
        double ds = simd::detail::dot_scalar(a.data(), b.data(), n);
        double dv = simd::detail::dot_avx2(a.data(), b.data(), n);
        CHECK(std::abs(ds - dv) <= 1e-12 * (1.0 + std::abs(ds)) * (1.0 + std::sqrt(double(n))));

        double ss = simd::detail::squared_distance_scalar(a.data(), b.data(), n);
        double sv = simd::detail::squared_distance_avx2(a.data(), b.data(), n);
        CHECK(std::abs(ss - sv) <= 1e-12 * (1.0 + ss));

        auto y1 = random_vec(n, 3 * n + 2);
        auto y2 = y1;
        simd::detail::axpy_scalar(0.37, a.data(), y1.data(), n);
        simd::detail::axpy_avx2(0.37, a.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-15));
    }
}

TEST_CASE("integer-valued inputs are summed exactly by both backends") {
    if (!simd::avx2_supported()) return;
    RandomStream rng(5, 0);
    std::vector<double> a(257), b(257);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = static_cast<double>(static_cast<int>(rng.uniform_below(17)) - 8);
        b[i] = static_cast<double>(static_cast<int>(rng.uniform_below(17)) - 8);
    }
    // All intermediate sums are integers below 2^53: both orders are exact.
    CHECK(simd::detail::dot_scalar(a.data(), b.data(), a.size()) ==
          simd::detail::dot_avx2(a.data(), b.data(), a.size()));
}
#endif // COMPFEAT_HAVE_AVX2_TU

TEST_CASE("force_backend switches the dispatch table") {
    simd::force_backend(simd::Backend::scalar);
    CHECK(simd::active_backend() == simd::Backend::scalar);
    if (simd::avx2_supported()) {
        simd::force_backend(simd::Backend::avx2);
        CHECK(simd::active_backend() == simd::Backend::avx2);
    }
    double a[] = {1.0, 2.0};
    double b[] = {3.0, 4.0};
    CHECK(simd::dot(a, b, 2) == 11.0);
}
