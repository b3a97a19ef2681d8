#include <doctest.h>

#include "compfeat/rng.hpp"
#include "compfeat/threads.hpp"

#include <cmath>
#include <set>
#include <vector>

using namespace compfeat;

TEST_CASE("same key and stream reproduce the same sequence") {
    RandomStream a(42, 7);
    RandomStream b(42, 7);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct streams differ") {
    RandomStream a(42, 0);
    RandomStream b(42, 1);
    int same = 0;
    for (int i = 0; i < 64; ++i)
        if (a.next_u64() == b.next_u64()) ++same;
    CHECK(same == 0);
}

TEST_CASE("uniform lies in [0,1) and has the right mean") {
    RandomStream rng(1, 0);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    double mean = sum / n;
    // std of the mean is 1/sqrt(12 n) ~ 6.5e-4
    CHECK(std::abs(mean - 0.5) < 4.0 * 6.5e-4);
}

TEST_CASE("uniform_below is unbiased on a small range") {
    RandomStream rng(3, 5);
    const std::uint64_t n = 6;
    const int draws = 600000;
    std::vector<int> counts(n, 0);
    for (int i = 0; i < draws; ++i) ++counts[rng.uniform_below(n)];
    double expected = static_cast<double>(draws) / n;
    double se = std::sqrt(expected * (1.0 - 1.0 / n));
    for (std::uint64_t k = 0; k < n; ++k)
        CHECK(std::abs(counts[k] - expected) < 4.5 * se);
}

TEST_CASE("normal moments") {
    RandomStream rng(9, 2);
    const int n = 400000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double z = rng.normal();
        sum += z;
        sum2 += z * z;
    }
    double mean = sum / n;
    double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
    // var of sample variance of a normal is ~2/n
    CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("derive_seed separates and reproduces") {
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    std::set<std::uint64_t> seen;
    for (std::uint64_t a = 0; a < 100; ++a) seen.insert(derive_seed(5, a, 0));
    CHECK(seen.size() == 100);
}

TEST_CASE("per-index streams give thread-independent output") {
    const std::size_t n = 64;
    std::vector<std::uint64_t> serial(n), threaded(n);
    parallel_for(n, 1, [&](std::size_t i) {
        RandomStream rng(11, i);
        serial[i] = rng.next_u64();
    });
    parallel_for(n, 4, [&](std::size_t i) {
        RandomStream rng(11, i);
        threaded[i] = rng.next_u64();
    });
    CHECK(serial == threaded);
}
