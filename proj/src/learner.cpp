#include "compfeat/learner.hpp"

#include "compfeat/dataset.hpp"
#include "compfeat/error.hpp"
#include "compfeat/linalg.hpp"
#include "compfeat/simd.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

namespace compfeat {

double LinearModel::frobenius_norm() const {
    return std::sqrt(simd::dot(v.data(), v.data(), v.size()));
}

void LinearModel::predict(const double* embedded, std::size_t rows, double* out) const {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* x = embedded + r * feat_dim;
        for (std::size_t k = 0; k < out_dim; ++k)
            out[r * out_dim + k] = simd::dot(v.data() + k * feat_dim, x, feat_dim);
    }
}

double auto_lambda(const AutoLambda& rule, double feature_bound, std::size_t m) {
    if (!(rule.B > 0.0) || !(rule.rho > 0.0))
        throw ParameterError("auto lambda: B and rho must be positive");
    if (m == 0) throw ParameterError("auto lambda: empty training set");
    return std::sqrt(2.0) * rule.rho * feature_bound /
           (std::sqrt(static_cast<double>(m)) * rule.B);
}

namespace {

double resolve_lambda(const TrainConfig& config, std::size_t m) {
    if (config.lambda.has_value() == config.auto_rule.has_value())
        throw ParameterError("train: specify exactly one of lambda / auto rule");
    double lambda = config.lambda ? *config.lambda
                                  : auto_lambda(*config.auto_rule, config.feature_bound, m);
    if (!(lambda > 0.0)) throw ParameterError("train: lambda must be positive");
    return lambda;
}

LinearModel train_squared(const double* x, std::size_t m, std::size_t d, const double* y,
                          std::size_t t, double lambda) {
    std::vector<double> gram = gram_matrix(x, m, d);
    for (std::size_t j = 0; j < d; ++j) gram[j * d + j] += 2.0 * lambda;
    std::vector<double> rhs = cross_matrix(x, y, m, d, t); // d x t
    cholesky_solve_inplace(gram, rhs, d, t);               // rhs := V^T
    LinearModel model;
    model.out_dim = t;
    model.feat_dim = d;
    model.lambda = lambda;
    model.loss = LossKind::squared;
    model.v.resize(t * d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < t; ++k) model.v[k * d + j] = rhs[j * t + k];
    return model;
}

struct LogisticState {
    double objective = 0.0;
    std::vector<double> gradient; // t x d
};

// (1/m) sum_i sum_k log(1 + exp(-y_ik p_ik)) + lambda |V|_F^2, labels +-1.
LogisticState logistic_objective(const double* x, std::size_t m, std::size_t d, const double* y,
                                 std::size_t t, const std::vector<double>& v, double lambda,
                                 bool want_gradient) {
    LogisticState state;
    if (want_gradient) state.gradient.assign(t * d, 0.0);
    double loss = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        const double* xr = x + r * d;
        for (std::size_t k = 0; k < t; ++k) {
            double margin = y[r * t + k] * simd::dot(v.data() + k * d, xr, d);
            // log(1 + e^{-margin}) without overflow
            double l = margin > 0.0 ? std::log1p(std::exp(-margin))
                                    : -margin + std::log1p(std::exp(margin));
            loss += l;
            if (want_gradient) {
                double sig = margin > 0.0 ? std::exp(-margin) / (1.0 + std::exp(-margin))
                                          : 1.0 / (1.0 + std::exp(margin));
                double coeff = -y[r * t + k] * sig / static_cast<double>(m);
                simd::axpy(coeff, xr, state.gradient.data() + k * d, d);
            }
        }
    }
    state.objective = loss / static_cast<double>(m) + lambda * simd::dot(v.data(), v.data(), v.size());
    if (want_gradient) simd::axpy(2.0 * lambda, v.data(), state.gradient.data(), v.size());
    return state;
}

LinearModel train_logistic(const double* x, std::size_t m, std::size_t d, const double* y,
                           std::size_t t, double lambda, std::size_t max_epochs, double tol) {
    for (std::size_t i = 0; i < m * t; ++i)
        if (y[i] != 1.0 && y[i] != -1.0)
            throw ParameterError("logistic training: labels must be +-1");

    std::vector<double> v(t * d, 0.0);
    double step = 1.0;
    LogisticState state = logistic_objective(x, m, d, y, t, v, lambda, true);
    std::size_t epoch = 0;
    for (; epoch < max_epochs; ++epoch) {
        double grad_norm = std::sqrt(
            simd::dot(state.gradient.data(), state.gradient.data(), state.gradient.size()));
        if (grad_norm <= tol) break;
        // Armijo backtracking keeps the objective strictly decreasing.
        std::vector<double> trial(v.size());
        double g2 = grad_norm * grad_norm;
        bool moved = false;
        for (int probe = 0; probe < 60; ++probe) {
            for (std::size_t i = 0; i < v.size(); ++i)
                trial[i] = v[i] - step * state.gradient[i];
            LogisticState next = logistic_objective(x, m, d, y, t, trial, lambda, false);
            if (next.objective <= state.objective - 0.5 * step * g2) {
                v.swap(trial);
                state = logistic_objective(x, m, d, y, t, v, lambda, true);
                step *= 1.5; // recover after conservative shrinks
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved)
            throw ConvergenceError("logistic training: line search stalled at epoch " +
                                   std::to_string(epoch) + ", objective " +
                                   std::to_string(state.objective));
    }
    if (epoch == max_epochs) {
        double grad_norm = std::sqrt(
            simd::dot(state.gradient.data(), state.gradient.data(), state.gradient.size()));
        throw ConvergenceError("logistic training: gradient norm " + std::to_string(grad_norm) +
                               " after " + std::to_string(max_epochs) +
                               " epochs (tolerance " + std::to_string(tol) + ")");
    }

    LinearModel model;
    model.out_dim = t;
    model.feat_dim = d;
    model.lambda = lambda;
    model.loss = LossKind::logistic;
    model.v = std::move(v);
    return model;
}

} // namespace

LinearModel train(const double* embedded, std::size_t m, std::size_t d, const double* labels,
                  std::size_t t, const TrainConfig& config) {
    if (m == 0 || d == 0 || t == 0) throw ParameterError("train: empty problem");
    double lambda = resolve_lambda(config, m);
    if (config.loss == LossKind::squared) return train_squared(embedded, m, d, labels, t, lambda);
    return train_logistic(embedded, m, d, labels, t, lambda, config.max_epochs,
                          config.gradient_tol);
}

EvalMetrics evaluate(const LinearModel& model, const double* embedded, std::size_t m,
                     const double* labels, std::size_t t) {
    if (t != model.out_dim) throw UsageError("evaluate: label dimension mismatch");
    if (m == 0) throw UsageError("evaluate: empty dataset");
    EvalMetrics metrics;
    std::vector<double> pred(m * t);
    model.predict(embedded, m, pred.data());
    std::size_t correct = 0;
    for (std::size_t r = 0; r < m; ++r) {
        double se = 0.0;
        double ae = 0.0;
        for (std::size_t k = 0; k < t; ++k) {
            double diff = pred[r * t + k] - labels[r * t + k];
            se += diff * diff;
            ae += std::abs(diff);
            if (model.loss == LossKind::logistic) {
                double margin = labels[r * t + k] * pred[r * t + k];
                metrics.loss += margin > 0.0 ? std::log1p(std::exp(-margin))
                                             : -margin + std::log1p(std::exp(margin));
            }
        }
        metrics.mse += se;
        metrics.mae += ae;
        if (model.loss == LossKind::squared) metrics.loss += se / 2.0;
        if (t == 1) {
            if ((pred[r] >= 0.0) == (labels[r] >= 0.0)) ++correct;
        } else {
            std::size_t pa = static_cast<std::size_t>(
                std::max_element(pred.begin() + r * t, pred.begin() + (r + 1) * t) -
                (pred.begin() + r * t));
            std::size_t la = static_cast<std::size_t>(
                std::max_element(labels + r * t, labels + (r + 1) * t) - (labels + r * t));
            if (pa == la) ++correct;
        }
    }
    const double inv_m = 1.0 / static_cast<double>(m);
    metrics.loss *= inv_m;
    metrics.mse *= inv_m;
    metrics.mae *= inv_m;
    metrics.accuracy = static_cast<double>(correct) * inv_m;
    return metrics;
}

double Teacher::operator()(const Skeleton& skeleton, const InputRecord& x) const {
    if (anchors.size() != alphas.size())
        throw UsageError("teacher: anchors/alphas size mismatch");
    double f = 0.0;
    for (std::size_t j = 0; j < anchors.size(); ++j)
        f += alphas[j] * exact_kernel(skeleton, x, anchors[j]);
    return f;
}

std::vector<RatePoint> rate_experiment(const Skeleton& skeleton, const Teacher& teacher,
                                       const RateExperimentConfig& config) {
    if (config.q_list.empty()) throw ParameterError("rate_experiment: empty q list");
    if (config.trials == 0) throw ParameterError("rate_experiment: trials must be >= 1");

    std::vector<RatePoint> out;
    for (std::uint32_t trial = 0; trial < config.trials; ++trial) {
        // Fresh data per trial; labels are the exact teacher values.
        std::uint64_t data_seed = derive_seed(config.seed, 0xD, trial);
        auto train_x = synth_records(skeleton, config.train_size, data_seed, 0.0);
        auto test_x = synth_records(skeleton, config.test_size, derive_seed(config.seed, 0xE, trial), 0.0);
        std::vector<double> train_y(config.train_size);
        std::vector<double> test_y(config.test_size);
        for (std::size_t i = 0; i < train_x.size(); ++i) train_y[i] = teacher(skeleton, train_x[i]);
        for (std::size_t i = 0; i < test_x.size(); ++i) test_y[i] = teacher(skeleton, test_x[i]);

        for (std::size_t qi = 0; qi < config.q_list.size(); ++qi) {
            std::uint64_t q = config.q_list[qi];
            std::uint64_t reg_seed = derive_seed(config.seed, 0xF00 + qi, trial);
            FeatureRegistry registry = build_registry(skeleton, q, reg_seed, config.threads);
            BatchEvaluator eval(skeleton, registry, true, derive_seed(reg_seed, 0xB));
            const std::size_t dim = eval.dimension();
            std::vector<double> train_m(config.train_size * dim);
            std::vector<double> test_m(config.test_size * dim);
            eval.fill_real_matrix(train_x, train_m.data(), config.threads);
            eval.fill_real_matrix(test_x, test_m.data(), config.threads);

            TrainConfig tc;
            tc.lambda = config.lambda;
            LinearModel model = train(train_m.data(), config.train_size, dim, train_y.data(), 1, tc);
            EvalMetrics train_metrics =
                evaluate(model, train_m.data(), config.train_size, train_y.data(), 1);
            EvalMetrics test_metrics =
                evaluate(model, test_m.data(), config.test_size, test_y.data(), 1);
            out.push_back({q, trial, train_metrics.mse, test_metrics.mse, test_metrics.mae});
        }
    }
    return out;
}

namespace {
constexpr char kModelMagic[4] = {'C', 'F', 'M', 'D'};
constexpr std::uint32_t kModelVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
    char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>(v >> (8 * i));
    out.write(buf, 4);
}
void write_u64(std::ostream& out, std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>(v >> (8 * i));
    out.write(buf, 8);
}
void write_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    write_u64(out, bits);
}
std::uint32_t read_u32(std::istream& in) {
    unsigned char buf[4];
    in.read(reinterpret_cast<char*>(buf), 4);
    if (!in) throw ParseError("model file: truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
    return v;
}
std::uint64_t read_u64(std::istream& in) {
    unsigned char buf[8];
    in.read(reinterpret_cast<char*>(buf), 8);
    if (!in) throw ParseError("model file: truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
}
double read_f64(std::istream& in) {
    std::uint64_t bits = read_u64(in);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}
} // namespace

void save_model(const LinearModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(kModelMagic, 4);
    write_u32(out, kModelVersion);
    write_u32(out, static_cast<std::uint32_t>(model.loss));
    write_u64(out, model.out_dim);
    write_u64(out, model.feat_dim);
    write_u64(out, model.registry_fingerprint);
    write_f64(out, model.lambda);
    for (double v : model.v) write_f64(out, v);
    if (!out) throw IoError("model write failed");
}

LinearModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kModelMagic, 4) != 0) throw ParseError("model file: bad magic");
    std::uint32_t version = read_u32(in);
    if (version != kModelVersion)
        throw ParseError("model file: unsupported version " + std::to_string(version));
    LinearModel model;
    model.loss = static_cast<LossKind>(read_u32(in));
    model.out_dim = read_u64(in);
    model.feat_dim = read_u64(in);
    model.registry_fingerprint = read_u64(in);
    model.lambda = read_f64(in);
    model.v.resize(model.out_dim * model.feat_dim);
    for (double& v : model.v) v = read_f64(in);
    return model;
}

} // namespace compfeat
