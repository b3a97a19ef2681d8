#include "compfeat/bench.hpp"

#include "compfeat/error.hpp"
#include "compfeat/threads.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace compfeat {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Moment accumulator for (exact, empirical) pairs; combine order is fixed
// by the callers, so pooled results are deterministic.
struct PairStats {
    std::size_t count = 0;
    double abs_sum = 0.0;
    double sq_sum = 0.0;
    double max_err = 0.0;
    double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;

    void add(double exact, double empirical) {
        double err = std::abs(empirical - exact);
        ++count;
        abs_sum += err;
        sq_sum += err * err;
        max_err = std::max(max_err, err);
        sx += exact;
        sy += empirical;
        sxx += exact * exact;
        syy += empirical * empirical;
        sxy += exact * empirical;
    }

    void merge(const PairStats& other) {
        count += other.count;
        abs_sum += other.abs_sum;
        sq_sum += other.sq_sum;
        max_err = std::max(max_err, other.max_err);
        sx += other.sx;
        sy += other.sy;
        sxx += other.sxx;
        syy += other.syy;
        sxy += other.sxy;
    }

    double mae() const { return count ? abs_sum / static_cast<double>(count) : 0.0; }
    double rmse() const { return count ? std::sqrt(sq_sum / static_cast<double>(count)) : 0.0; }

    double pearson() const {
        if (count == 0) return 0.0;
        double n = static_cast<double>(count);
        double cov = sxy - sx * sy / n;
        double vx = sxx - sx * sx / n;
        double vy = syy - sy * sy / n;
        if (vx <= 0.0 || vy <= 0.0) return 0.0;
        return cov / std::sqrt(vx * vy);
    }
};

double certified_feature_bound(const Skeleton& skeleton) {
    double bound = 1.0;
    for (const auto& space : skeleton.input_spaces()) bound = std::max(bound, space.bound());
    return bound;
}

} // namespace

BudgetRule hoeffding_budget(double C, double epsilon, double delta) {
    if (!(C >= 1.0)) throw ParameterError("hoeffding_budget: C must be >= 1");
    if (!(epsilon > 0.0)) throw ParameterError("hoeffding_budget: epsilon must be positive");
    if (!(delta > 0.0 && delta < 1.0))
        throw ParameterError("hoeffding_budget: delta must be in (0,1)");
    double q = 2.0 * C * C * C * C * std::log(2.0 / delta) / (epsilon * epsilon);
    // ceil, but forgive sub-1e-9 float drift above an integer (e.g. q = 4).
    double rounded = std::nearbyint(q);
    double q_min = (std::abs(q - rounded) < 1e-9) ? rounded : std::ceil(q);
    BudgetRule rule;
    rule.C = C;
    rule.epsilon = epsilon;
    rule.delta = delta;
    rule.q_min = static_cast<std::uint64_t>(q_min);
    return rule;
}

ApproxExperimentResult run_approx_experiment(const Skeleton& skeleton,
                                             const std::vector<InputRecord>& inputs,
                                             const std::vector<std::uint64_t>& budgets,
                                             std::uint32_t trials, std::uint64_t seed,
                                             bool real_mode, unsigned threads) {
    if (inputs.size() < 2) throw ParameterError("approx experiment: need at least 2 inputs");
    if (budgets.empty()) throw ParameterError("approx experiment: empty budget list");
    if (trials == 0) throw ParameterError("approx experiment: trials must be >= 1");

    const std::size_t n = inputs.size();
    // Exact kernels once, off-diagonal unordered pairs.
    std::vector<double> exact(n * n, 0.0);
    parallel_for(n, threads, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j)
            exact[i * n + j] = exact_kernel(skeleton, inputs[i], inputs[j]);
    });

    ApproxExperimentResult result;
    result.rows.resize(budgets.size() * trials);
    std::vector<PairStats> stats(budgets.size() * trials);

    // One task per (budget, trial): fresh registry, all pairs.
    parallel_for(budgets.size() * trials, threads, [&](std::size_t task) {
        std::size_t bi = task / trials;
        std::uint32_t trial = static_cast<std::uint32_t>(task % trials);
        std::uint64_t reg_seed = derive_seed(seed, bi, trial);
        FeatureRegistry registry = build_registry(skeleton, budgets[bi], reg_seed);
        BatchEvaluator eval(skeleton, registry, real_mode, derive_seed(reg_seed, 0xB));
        std::vector<Embedding> embeddings(n);
        for (std::size_t i = 0; i < n; ++i) embeddings[i] = eval(inputs[i]);

        PairStats& ps = stats[task];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                ps.add(exact[i * n + j], empirical_kernel(embeddings[i], embeddings[j]));

        result.rows[task] = {budgets[bi], trial, ps.mae(), ps.rmse(), ps.max_err, ps.pearson()};
    });

    for (std::size_t bi = 0; bi < budgets.size(); ++bi) {
        PairStats pooled;
        for (std::uint32_t trial = 0; trial < trials; ++trial)
            pooled.merge(stats[bi * trials + trial]);
        result.summary.push_back({budgets[bi], trials, pooled.mae(), pooled.rmse(),
                                  pooled.max_err, pooled.pearson()});
    }
    return result;
}

double coverage_check(const Skeleton& skeleton, const BudgetRule& rule, std::size_t pairs,
                      std::size_t reps, std::uint64_t seed, unsigned threads) {
    if (pairs == 0 || reps == 0) throw ParameterError("coverage_check: pairs/reps must be >= 1");
    double bound = certified_feature_bound(skeleton);
    if (bound > rule.C + 1e-12)
        throw ParameterError("coverage_check: base-space bound " + std::to_string(bound) +
                             " exceeds the rule's C = " + std::to_string(rule.C));

    auto points = synth_records(skeleton, 2 * pairs, derive_seed(seed, 0xDA7A), 0.0);
    std::vector<double> exact(pairs);
    parallel_for(pairs, threads, [&](std::size_t p) {
        exact[p] = exact_kernel(skeleton, points[2 * p], points[2 * p + 1]);
    });

    std::vector<std::size_t> failures(reps, 0);
    parallel_for(reps, threads, [&](std::size_t rep) {
        std::uint64_t reg_seed = derive_seed(seed, 0x5EED, rep);
        FeatureRegistry registry = build_registry(skeleton, rule.q_min, reg_seed);
        BatchEvaluator eval(skeleton, registry);
        std::size_t count = 0;
        for (std::size_t p = 0; p < pairs; ++p) {
            double k_hat =
                empirical_kernel(eval(points[2 * p]), eval(points[2 * p + 1]));
            if (std::abs(k_hat - exact[p]) >= rule.epsilon) ++count;
        }
        failures[rep] = count;
    });

    std::size_t total = 0;
    for (std::size_t f : failures) total += f;
    return static_cast<double>(total) / (static_cast<double>(pairs) * static_cast<double>(reps));
}

void write_bench_rows(std::ostream& out, const std::vector<TrialRow>& rows) {
    out << "budget,trial,mae,rmse,max_err,pearson\n";
    for (const auto& r : rows) {
        out << r.budget << "," << r.trial << "," << format_double(r.mae) << ","
            << format_double(r.rmse) << "," << format_double(r.max_err) << ","
            << format_double(r.pearson) << "\n";
    }
}

void write_bench_csv(const std::string& path, const std::vector<TrialRow>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    write_bench_rows(out, rows);
    if (!out) throw IoError("bench csv write failed");
}

void print_summary(std::ostream& out, const std::vector<ApproxReport>& reports) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%10s %7s %12s %12s %12s %10s", "budget", "trials", "mae",
                  "rmse", "max_err", "pearson");
    out << buf << "\n";
    for (const auto& r : reports) {
        std::snprintf(buf, sizeof(buf), "%10llu %7u %12.6g %12.6g %12.6g %10.6f",
                      static_cast<unsigned long long>(r.budget), r.trials, r.mae, r.rmse,
                      r.max_err, r.pearson);
        out << buf << "\n";
    }
}

} // namespace compfeat
