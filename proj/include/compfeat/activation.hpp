#pragma once

#include "compfeat/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace compfeat {

enum class ActivationKind : std::uint8_t {
    explicit_series = 0,
    exp_scaled = 1,      // sigma_hat(rho) = exp(c * (rho - 1))
    relu_conjugate = 2,  // sigma_hat(rho) = (sqrt(1-rho^2) + (pi - acos(rho)) * rho) / pi
};

// A normalized PSD power series sigma_hat(rho) = sum_i a_i rho^i with
// a_i >= 0 and sum a_i = 1, stored as an explicit finite coefficient table.
// Construction truncates closed-form series and renormalizes, so the stored
// distribution is an exact pmf; truncated_mass() reports what was cut.
class ConjugateActivation {
public:
    /// Takes the coefficients as given; they must be nonnegative and sum to
    /// 1 within 1e-12 (then they are renormalized to sum exactly 1).
    static ConjugateActivation explicit_series(std::vector<double> coeffs);

    /// Poisson(c) degree law: a_i = e^{-c} c^i / i!, truncated once the
    /// remaining mass is provably below 1e-12.
    static ConjugateActivation exp_scaled(double c);

    /// Conjugate activation of ReLU, truncated at max_degree (>= 2) and
    /// renormalized. Coefficients: a_0 = 1/pi, a_1 = 1/2,
    /// a_{2k} = b_{k-1} / (2 pi k (2k-1)) with b_k = C(2k,k)/4^k;
    /// odd coefficients beyond 1 vanish. The even tail decays like k^{-5/2},
    /// so sigma_prime_at_one converges to 1 only as O(1/sqrt(max_degree)).
    static ConjugateActivation relu_conjugate(std::uint32_t max_degree);

    ActivationKind kind() const { return kind_; }
    std::span<const double> coeffs() const { return coeffs_; }
    double coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0.0; }
    std::size_t max_degree() const { return coeffs_.size() - 1; }

    /// Mass of the closed-form series beyond max_degree, before renormalization.
    double truncated_mass() const { return truncated_mass_; }

    /// Scale parameter c for exp_scaled; 0 otherwise.
    double exp_scale() const { return exp_c_; }

    /// sum_i i * a_i (the expected sampled degree).
    double sigma_prime_at_one() const;

    /// Closed form when the kind provides one, else the series.
    double evaluate(double rho) const;

    /// Horner evaluation of the stored series (oracle route for tests).
    double evaluate_series(double rho) const;

    /// Degree l with probability a_l, via the precomputed inverse-CDF table.
    std::uint32_t sample_degree(RandomStream& rng) const;

    bool operator==(const ConjugateActivation& other) const;

private:
    ConjugateActivation(ActivationKind kind, std::vector<double> coeffs,
                        double truncated_mass, double exp_c);
    void build_cdf();

    ActivationKind kind_;
    std::vector<double> coeffs_;
    std::vector<double> cdf_;
    double truncated_mass_ = 0.0;
    double exp_c_ = 0.0;
};

/// Free-function spellings used throughout the skeleton code.
inline double sigma_prime_at_one(const ConjugateActivation& act) {
    return act.sigma_prime_at_one();
}
inline std::uint32_t sample_degree(const ConjugateActivation& act, RandomStream& rng) {
    return act.sample_degree(rng);
}
inline ConjugateActivation relu_conjugate_coeffs(std::uint32_t max_degree) {
    return ConjugateActivation::relu_conjugate(max_degree);
}

} // namespace compfeat
