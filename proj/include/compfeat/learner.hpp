#pragma once

#include "compfeat/kernel_oracle.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace compfeat {

enum class LossKind : std::uint8_t { squared = 0, logistic = 1 };

// Linear predictor over a real-mode embedding: f(x) = V Psi(x), V of shape
// t x D. Squared loss here is l(p, y) = |p - y|^2 / 2, which pairs with the
// lambda |V|_F^2 regularizer to give the normal equations
// (X^T X / m + 2 lambda I) V^T = X^T Y / m.
struct LinearModel {
    std::size_t out_dim = 0;  // t
    std::size_t feat_dim = 0; // D
    std::vector<double> v;    // t x D, row-major
    double lambda = 0.0;
    LossKind loss = LossKind::squared;
    std::uint64_t registry_fingerprint = 0;

    double frobenius_norm() const;
    void predict(const double* embedded, std::size_t rows, double* out) const;
};

struct AutoLambda {
    double B;   // norm budget of the comparator function
    double rho; // Lipschitz constant of the loss
};

struct TrainConfig {
    std::optional<double> lambda;       // exactly one of lambda / auto_rule
    std::optional<AutoLambda> auto_rule;
    double feature_bound = 1.0;         // C in the auto rule
    LossKind loss = LossKind::squared;
    std::size_t max_epochs = 20000;     // logistic only
    double gradient_tol = 1e-8;         // logistic only
};

/// lambda = sqrt(2) rho C / (sqrt(m) B).
double auto_lambda(const AutoLambda& rule, double feature_bound, std::size_t m);

/// Minimizes (1/m) sum_i l(V psi_i, y_i) + lambda |V|_F^2 over V.
/// embedded: m x d row-major (real mode); labels: m x t row-major.
/// Squared loss solves the normal equations; logistic runs gradient descent
/// with Armijo backtracking until the gradient norm reaches gradient_tol,
/// throwing ConvergenceError past max_epochs. Logistic labels must be +-1.
LinearModel train(const double* embedded, std::size_t m, std::size_t d, const double* labels,
                  std::size_t t, const TrainConfig& config);

struct EvalMetrics {
    double loss = 0.0;     // mean loss under the model's loss kind
    double mse = 0.0;      // mean squared error |p - y|^2 (sum over outputs)
    double mae = 0.0;      // mean absolute error, summed over outputs
    double accuracy = 0.0; // argmax match (t > 1) or sign match (t = 1)
};

EvalMetrics evaluate(const LinearModel& model, const double* embedded, std::size_t m,
                     const double* labels, std::size_t t);

/// A fixed function in the kernel space: f(x) = sum_j alpha_j k_S(x, anchor_j).
struct Teacher {
    std::vector<InputRecord> anchors;
    std::vector<double> alphas;

    double operator()(const Skeleton& skeleton, const InputRecord& x) const;
};

struct RatePoint {
    std::uint64_t q = 0;
    std::uint32_t trial = 0;
    double train_mse = 0.0;
    double test_mse = 0.0;
    double test_mae = 0.0;
};

struct RateExperimentConfig {
    std::size_t train_size = 256;
    std::size_t test_size = 256;
    std::vector<std::uint64_t> q_list;
    std::uint32_t trials = 10;
    double lambda = 1e-4;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

/// Trains on teacher labels at every q and reports held-out losses; the
/// mean test MAE decay against q is the 1/sqrt(q) rate check.
std::vector<RatePoint> rate_experiment(const Skeleton& skeleton, const Teacher& teacher,
                                       const RateExperimentConfig& config);

/// Versioned binary model file (V, lambda, loss kind, registry fingerprint).
void save_model(const LinearModel& model, const std::string& path);
LinearModel load_model(const std::string& path);

} // namespace compfeat
