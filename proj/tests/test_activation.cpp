#include <doctest.h>

#include "compfeat/activation.hpp"
#include "compfeat/error.hpp"

#include "test_util.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace compfeat;

TEST_CASE("explicit series validation") {
    CHECK_THROWS_AS(ConjugateActivation::explicit_series({0.5, -0.5, 1.0}), ParameterError);
    CHECK_THROWS_AS(ConjugateActivation::explicit_series({0.3, 0.3}), ParameterError);
    CHECK_THROWS_AS(ConjugateActivation::explicit_series({}), ParameterError);
    auto act = ConjugateActivation::explicit_series({0.25, 0.75});
    CHECK(act.coeff(0) == doctest::Approx(0.25));
    CHECK(act.coeff(1) == doctest::Approx(0.75));
}

TEST_CASE("exp_scaled truncates below 1e-12 and keeps a pmf") {
    for (double c : {0.25, 1.0, 4.0}) {
        auto act = ConjugateActivation::exp_scaled(c);
        CHECK(act.truncated_mass() >= 0.0);
        CHECK(act.truncated_mass() < 1e-12);
        double sum = 0.0;
        for (double a : act.coeffs()) {
            CHECK(a >= 0.0);
            sum += a;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
        // coefficients match the Poisson pmf (before the ~1e-12 renorm)
        for (unsigned i = 0; i < 5; ++i)
            CHECK(act.coeff(i) == doctest::Approx(testutil::poisson_pmf(c, i)).epsilon(1e-11));
    }
}

TEST_CASE("sigma_prime_at_one") {
    // exp(c=1): full-series value is exactly 1; truncation leaves ~1e-11.
    auto exp1 = ConjugateActivation::exp_scaled(1.0);
    CHECK(std::abs(exp1.sigma_prime_at_one() - 1.0) < 1e-9);

    // constant activation
    auto constant = ConjugateActivation::explicit_series({1.0});
    CHECK(constant.sigma_prime_at_one() == 0.0);

    // exp(c=1/4): derivative of exp((rho-1)/4) at rho=1 is 1/4.
    // Oracle: central finite difference of the closed form.
    auto exp_q = ConjugateActivation::exp_scaled(0.25);
    const double h = 1e-6;
    double fd = (std::exp((1.0 + h - 1.0) / 4.0) - std::exp((1.0 - h - 1.0) / 4.0)) / (2.0 * h);
    CHECK(exp_q.sigma_prime_at_one() == doctest::Approx(fd).epsilon(1e-9));
    CHECK(exp_q.sigma_prime_at_one() == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("sample_degree point masses") {
    auto a0 = ConjugateActivation::explicit_series({1.0});
    auto a3 = ConjugateActivation::explicit_series({0.0, 0.0, 0.0, 1.0});
    RandomStream rng(123, 0);
    for (int i = 0; i < 200; ++i) {
        CHECK(a0.sample_degree(rng) == 0);
        CHECK(a3.sample_degree(rng) == 3);
    }
}

TEST_CASE("sample_degree matches the Poisson(1) law") {
    auto act = ConjugateActivation::exp_scaled(1.0);
    const std::size_t draws = 1000000;
    RandomStream rng(2024, 0);
    std::vector<std::size_t> counts(act.coeffs().size(), 0);
    for (std::size_t i = 0; i < draws; ++i) ++counts[act.sample_degree(rng)];

    // per-bin 4-sigma check against the closed-form pmf
    for (unsigned i = 0; i < 8; ++i) {
        double p = testutil::poisson_pmf(1.0, i);
        double se = std::sqrt(p * (1.0 - p) * draws);
        CHECK(std::abs(static_cast<double>(counts[i]) - p * draws) < 4.0 * se);
    }

    // chi-square at significance 1e-3, merging bins with expectation < 10
    double stat = 0.0;
    double df = 0.0;
    double tail_expected = 0.0;
    double tail_observed = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        double expected = act.coeff(i) * draws;
        if (expected >= 10.0) {
            double d = counts[i] - expected;
            stat += d * d / expected;
            df += 1.0;
        } else {
            tail_expected += expected;
            tail_observed += counts[i];
        }
    }
    if (tail_expected > 0.0) {
        double d = tail_observed - tail_expected;
        stat += d * d / tail_expected;
        df += 1.0;
    }
    df -= 1.0;
    CHECK(stat < testutil::chi_square_critical(df, testutil::kZ999));
}

TEST_CASE("relu conjugate coefficients") {
    CHECK_THROWS_AS(ConjugateActivation::relu_conjugate(1), ParameterError);

    auto act = ConjugateActivation::relu_conjugate(64);
    auto reference = testutil::relu_series_reference(64);

    // odd coefficients above 1 vanish; a_1 = 1/2 exactly in the raw series
    CHECK(act.coeff(3) == 0.0);
    CHECK(act.coeff(5) == 0.0);

    // Oracle 1: closed-form grid fit (Vandermonde on Chebyshev nodes).
    auto closed_form = [](double rho) {
        return (std::sqrt(1.0 - rho * rho) +
                (std::numbers::pi - std::acos(rho)) * rho) / std::numbers::pi;
    };
    auto fitted = testutil::fit_series(closed_form, 14, 0.4);
    CHECK(fitted[1] == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(fitted[0] == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-8));
    CHECK(fitted[2] == doctest::Approx(reference[2]).epsilon(1e-6));

    // Oracle 2: the independent series recurrence, after renormalization.
    double ref_sum = 0.0;
    for (double a : reference) ref_sum += a;
    for (std::size_t i = 0; i < reference.size(); ++i)
        CHECK(act.coeff(i) == doctest::Approx(reference[i] / ref_sum).epsilon(1e-12));

    // The raw (pre-renormalization) mass at max_degree 64. The closed form
    // gives sigma_hat(1) = 1, but the even tail decays like k^{-5/2}, so the
    // deficit at degree 64 is ~1.6e-4 (frozen from the reference series),
    // far larger than the 1e-10 one might expect from exp-style decay.
    CHECK(ref_sum == doctest::Approx(0.999835826061).epsilon(1e-9));
    CHECK(1.0 - ref_sum > 1e-5);

    // sigma_hat(0) = 1/pi and sigma_hat(1) = 1 from the closed form.
    CHECK(closed_form(0.0) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-15));
    CHECK(closed_form(1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("relu sigma_prime_at_one converges to 1 like 1/sqrt(T)") {
    // Frozen from the reference recurrence: the truncated derivative at
    // max_degree 512 is ~0.9888, i.e. |1 - value| ~ 1.1e-2. It approaches 1
    // from below as the degree grows.
    auto ref_prime = [](std::size_t T) {
        auto a = testutil::relu_series_reference(T);
        double sum = 0.0, prime = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            sum += a[i];
            prime += static_cast<double>(i) * a[i];
        }
        return prime / sum; // after renormalization
    };

    double p64 = ConjugateActivation::relu_conjugate(64).sigma_prime_at_one();
    double p512 = ConjugateActivation::relu_conjugate(512).sigma_prime_at_one();
    double p4096 = ConjugateActivation::relu_conjugate(4096).sigma_prime_at_one();

    CHECK(p64 == doctest::Approx(ref_prime(64)).epsilon(1e-12));
    CHECK(p512 == doctest::Approx(ref_prime(512)).epsilon(1e-12));
    CHECK(p4096 == doctest::Approx(ref_prime(4096)).epsilon(1e-12));

    CHECK(p512 == doctest::Approx(0.988781).epsilon(1e-5));
    CHECK(p64 < p512);
    CHECK(p512 < p4096);
    CHECK(p4096 < 1.0);
    CHECK(1.0 - p4096 < 0.005);
}

TEST_CASE("series evaluation matches closed forms on [-1,1]") {
    auto exp_act = ConjugateActivation::exp_scaled(0.25);
    auto relu_act = ConjugateActivation::relu_conjugate(4096);
    // For ReLU the disagreement is exactly the renormalization scale: the
    // stored series is the closed form's truncation divided by (1 - cut).
    const double relu_tol = 3.0 * relu_act.truncated_mass() + 1e-12;
    for (int i = 0; i <= 40; ++i) {
        double rho = -1.0 + i * 0.05;
        CHECK(std::abs(exp_act.evaluate_series(rho) - exp_act.evaluate(rho)) <= 1e-10);
        // ReLU series converges slowly near |rho| = 1; interior only.
        if (std::abs(rho) <= 0.5)
            CHECK(std::abs(relu_act.evaluate_series(rho) - relu_act.evaluate(rho)) <= relu_tol);
    }
}
