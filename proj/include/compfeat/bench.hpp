#pragma once

#include "compfeat/dataset.hpp"
#include "compfeat/kernel_oracle.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace compfeat {

/// Error metrics of empirical vs exact kernels over input pairs, pooled
/// across `trials` fresh registries at feature budget `budget`.
struct ApproxReport {
    std::uint64_t budget = 0;
    std::uint32_t trials = 0;
    double mae = 0.0;
    double rmse = 0.0;
    double max_err = 0.0;
    double pearson = 0.0;
};

/// Feature budget sufficient for |k_hat - k| <= epsilon with probability
/// >= 1 - delta per pair (Hoeffding): q_min = ceil(2 C^4 ln(2/delta) / eps^2).
struct BudgetRule {
    double C = 1.0;
    double epsilon = 0.0;
    double delta = 0.0;
    std::uint64_t q_min = 0;
};

BudgetRule hoeffding_budget(double C, double epsilon, double delta);

struct TrialRow {
    std::uint64_t budget = 0;
    std::uint32_t trial = 0;
    double mae = 0.0;
    double rmse = 0.0;
    double max_err = 0.0;
    double pearson = 0.0;
};

struct ApproxExperimentResult {
    std::vector<TrialRow> rows;        // one per (budget, trial)
    std::vector<ApproxReport> summary; // one per budget, pooled over trials
};

/// For every budget and trial, builds a fresh registry, evaluates empirical
/// kernels on all unordered input pairs (i < j), and compares against the
/// exact kernel. Deterministic under (seed, inputs); independent of threads.
ApproxExperimentResult run_approx_experiment(const Skeleton& skeleton,
                                             const std::vector<InputRecord>& inputs,
                                             const std::vector<std::uint64_t>& budgets,
                                             std::uint32_t trials, std::uint64_t seed,
                                             bool real_mode = false, unsigned threads = 1);

/// Empirical failure rate of the Hoeffding guarantee: over `reps` fresh
/// registries at q = rule.q_min and `pairs` random input pairs, the fraction
/// of events |k_hat - k| >= rule.epsilon. Requires every base-space bound
/// <= rule.C so the compositional features are C-bounded.
double coverage_check(const Skeleton& skeleton, const BudgetRule& rule, std::size_t pairs,
                      std::size_t reps, std::uint64_t seed, unsigned threads = 1);

/// CSV with header budget,trial,mae,rmse,max_err,pearson.
void write_bench_csv(const std::string& path, const std::vector<TrialRow>& rows);
void write_bench_rows(std::ostream& out, const std::vector<TrialRow>& rows);

/// Human-readable per-budget summary table.
void print_summary(std::ostream& out, const std::vector<ApproxReport>& reports);

} // namespace compfeat
