#include "compfeat/activation.hpp"

#include "compfeat/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace compfeat {

namespace {

void renormalize(std::vector<double>& coeffs) {
    double sum = std::accumulate(coeffs.begin(), coeffs.end(), 0.0);
    if (sum <= 0.0) throw ParameterError("activation: coefficient mass is zero");
    for (double& a : coeffs) a /= sum;
}

} // namespace

ConjugateActivation::ConjugateActivation(ActivationKind kind, std::vector<double> coeffs,
                                         double truncated_mass, double exp_c)
    : kind_(kind), coeffs_(std::move(coeffs)), truncated_mass_(truncated_mass), exp_c_(exp_c) {
    build_cdf();
}

void ConjugateActivation::build_cdf() {
    cdf_.resize(coeffs_.size());
    double run = 0.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        run += coeffs_[i];
        cdf_[i] = run;
    }
    // Guard the u ~ 1 edge; the stored pmf sums to 1 up to rounding.
    cdf_.back() = 1.0;
}

ConjugateActivation ConjugateActivation::explicit_series(std::vector<double> coeffs) {
    if (coeffs.empty()) throw ParameterError("explicit activation: empty coefficient list");
    double sum = 0.0;
    for (double a : coeffs) {
        if (!(a >= 0.0)) throw ParameterError("explicit activation: negative coefficient");
        sum += a;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw ParameterError("explicit activation: coefficients must sum to 1 (got " +
                             std::to_string(sum) + ")");
    renormalize(coeffs);
    return ConjugateActivation(ActivationKind::explicit_series, std::move(coeffs), 0.0, 0.0);
}

ConjugateActivation ConjugateActivation::exp_scaled(double c) {
    if (!(c > 0.0)) throw ParameterError("exp activation: c must be positive");
    std::vector<double> coeffs;
    double term = std::exp(-c); // a_0
    double acc = 0.0;
    std::size_t i = 0;
    for (;;) {
        coeffs.push_back(term);
        acc += term;
        ++i;
        term *= c / static_cast<double>(i);
        // Once the ratio c/(i+1) drops below 1 the tail is geometric:
        // sum_{j>i} a_j <= a_{i} * r / (1 - r) with r = c/(i+1).
        if (i > c) {
            double r = c / static_cast<double>(i + 1);
            double tail_bound = term / (1.0 - r);
            if (tail_bound < 0.5e-12) {
                renormalize(coeffs);
                return ConjugateActivation(ActivationKind::exp_scaled, std::move(coeffs),
                                           std::max(0.0, 1.0 - acc), c);
            }
        }
        if (coeffs.size() > 100000)
            throw ParameterError("exp activation: series did not truncate (c too large)");
    }
}

ConjugateActivation ConjugateActivation::relu_conjugate(std::uint32_t max_degree) {
    if (max_degree < 2) throw ParameterError("relu activation: max_degree must be >= 2");
    std::vector<double> coeffs(static_cast<std::size_t>(max_degree) + 1, 0.0);
    coeffs[0] = 1.0 / std::numbers::pi;
    coeffs[1] = 0.5;
    double b = 1.0; // b_{k-1}, starting at b_0 = 1
    double mass = coeffs[0] + coeffs[1];
    for (std::uint32_t k = 1; 2 * k <= max_degree; ++k) {
        double a2k = b / (2.0 * std::numbers::pi * k * (2.0 * k - 1.0));
        coeffs[2 * k] = a2k;
        mass += a2k;
        b *= (2.0 * k - 1.0) / (2.0 * k); // advance to b_k
    }
    double truncated = std::max(0.0, 1.0 - mass);
    renormalize(coeffs);
    return ConjugateActivation(ActivationKind::relu_conjugate, std::move(coeffs), truncated, 0.0);
}

double ConjugateActivation::sigma_prime_at_one() const {
    double acc = 0.0;
    for (std::size_t i = coeffs_.size(); i-- > 1;) acc += static_cast<double>(i) * coeffs_[i];
    return acc;
}

double ConjugateActivation::evaluate(double rho) const {
    switch (kind_) {
    case ActivationKind::exp_scaled:
        return std::exp(exp_c_ * (rho - 1.0));
    case ActivationKind::relu_conjugate: {
        double s = std::sqrt(std::max(0.0, 1.0 - rho * rho));
        return (s + (std::numbers::pi - std::acos(std::clamp(rho, -1.0, 1.0))) * rho) /
               std::numbers::pi;
    }
    case ActivationKind::explicit_series:
        return evaluate_series(rho);
    }
    return evaluate_series(rho);
}

double ConjugateActivation::evaluate_series(double rho) const {
    double acc = 0.0;
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * rho + coeffs_[i];
    return acc;
}

std::uint32_t ConjugateActivation::sample_degree(RandomStream& rng) const {
    double u = rng.uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<std::uint32_t>(it - cdf_.begin());
}

bool ConjugateActivation::operator==(const ConjugateActivation& other) const {
    return kind_ == other.kind_ && coeffs_ == other.coeffs_ && exp_c_ == other.exp_c_;
}

} // namespace compfeat
