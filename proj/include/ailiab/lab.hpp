#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ailiab/errors.hpp"
#include "ailiab/math/random.hpp"
#include "ailiab/roc.hpp"

namespace ailiab::lab {

// Two-class Gaussian task: features ~ N(mu_t, I) with the class means
// separated by class_separation along the first axis.
struct SyntheticTask {
    int dimension;
    double class_separation;
    double class_prior;
    RandomStream stream;

    SyntheticTask(int dimension_, double class_separation_, double class_prior_,
                  RandomStream stream_)
        : dimension(dimension_), class_separation(class_separation_), class_prior(class_prior_),
          stream(stream_) {
        if (dimension < 1) throw std::invalid_argument("SyntheticTask: dimension must be >= 1");
        if (!(class_separation >= 0.0)) {
            throw std::invalid_argument("SyntheticTask: class_separation must be >= 0");
        }
        if (!(class_prior > 0.0 && class_prior < 1.0)) {
            throw std::invalid_argument("SyntheticTask: class_prior must lie in (0,1)");
        }
    }
};

struct LabeledDataset {
    int dimension = 0;
    std::vector<double> features; // row-major size() x dimension
    std::vector<int> labels;      // in {0,1}

    std::size_t size() const { return labels.size(); }

    std::span<const double> row(std::size_t i) const {
        return {features.data() + i * static_cast<std::size_t>(dimension),
                static_cast<std::size_t>(dimension)};
    }
};

// Draws n i.i.d. labeled samples, consuming the task's stream: label first,
// then the feature coordinates, so reruns with an identical stream are
// bit-identical.
inline LabeledDataset generate_dataset(SyntheticTask& task, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("generate_dataset: n must be >= 1");
    LabeledDataset data;
    data.dimension = task.dimension;
    data.features.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(task.dimension));
    data.labels.reserve(static_cast<std::size_t>(n));
    const double offset = 0.5 * task.class_separation;
    for (std::int64_t i = 0; i < n; ++i) {
        const int label = task.stream.next_uniform() <= task.class_prior ? 1 : 0;
        data.labels.push_back(label);
        for (int j = 0; j < task.dimension; ++j) {
            const double mean = (j == 0) ? (label == 1 ? offset : -offset) : 0.0;
            data.features.push_back(mean + task.stream.next_normal());
        }
    }
    return data;
}

// SGD schedule: step alpha_t = step_scale / (smoothness * t) at step t,
// samples visited in deterministic cyclic order.
struct SgdConfig {
    std::int64_t iterations;
    double step_scale = 1.0;
    double smoothness = 1.0;
    int batch_size = 1;

    void validate() const {
        if (iterations < 1) throw std::invalid_argument("SgdConfig: iterations must be >= 1");
        if (!(step_scale > 0.0)) throw std::invalid_argument("SgdConfig: step_scale must be > 0");
        if (!(smoothness > 0.0)) throw std::invalid_argument("SgdConfig: smoothness must be > 0");
        if (batch_size < 1) throw std::invalid_argument("SgdConfig: batch_size must be >= 1");
    }

    static SgdConfig defaults_for(std::int64_t n_samples) {
        return {10 * n_samples, 1.0, 1.0, 1};
    }
};

struct TrainedClassifier {
    std::vector<double> weights; // bias first, then one weight per feature
    double train_log_loss = 0.0;
    double threshold = 0.5;

    // P[t=1 | x].
    double score(std::span<const double> x) const {
        double z = weights[0];
        for (std::size_t j = 0; j < x.size(); ++j) z += weights[j + 1] * x[j];
        if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
        const double e = std::exp(z);
        return e / (1.0 + e);
    }
};

namespace detail {

inline double scored(std::span<const double> w, std::span<const double> x) {
    double z = w[0];
    for (std::size_t j = 0; j < x.size(); ++j) z += w[j + 1] * x[j];
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

} // namespace detail

inline constexpr double score_clamp = 1e-12;

// Mean log loss of the weight vector (bias-first layout) over the dataset,
// with scores clamped to [1e-12, 1-1e-12] so the loss stays finite.
inline double log_loss_at(const LabeledDataset& data, std::span<const double> weights) {
    if (data.size() == 0) throw std::invalid_argument("log_loss_at: empty dataset");
    if (weights.size() != static_cast<std::size_t>(data.dimension) + 1) {
        throw std::invalid_argument("log_loss_at: weight size mismatch");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        double p = detail::scored(weights, data.row(i));
        p = std::clamp(p, score_clamp, 1.0 - score_clamp);
        total += data.labels[i] == 1 ? -std::log(p) : -std::log(1.0 - p);
    }
    return total / static_cast<double>(data.size());
}

// Full-batch gradient of the (unclamped) mean log loss: mean of (p - y) * (1, x).
inline std::vector<double> log_loss_gradient(const LabeledDataset& data,
                                             std::span<const double> weights) {
    if (data.size() == 0) throw std::invalid_argument("log_loss_gradient: empty dataset");
    if (weights.size() != static_cast<std::size_t>(data.dimension) + 1) {
        throw std::invalid_argument("log_loss_gradient: weight size mismatch");
    }
    std::vector<double> grad(weights.size(), 0.0);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto x = data.row(i);
        const double resid = detail::scored(weights, x) - static_cast<double>(data.labels[i]);
        grad[0] += resid;
        for (std::size_t j = 0; j < x.size(); ++j) grad[j + 1] += resid * x[j];
    }
    const double inv_n = 1.0 / static_cast<double>(data.size());
    for (double& g : grad) g *= inv_n;
    return grad;
}

// Logistic regression trained by SGD with the decaying step schedule.
// Weights start at zero; step t updates with the mean gradient of the batch
// of samples (t*B + j) mod N, j < B.
inline TrainedClassifier train_logistic_sgd(const LabeledDataset& data, const SgdConfig& cfg) {
    cfg.validate();
    const std::size_t n = data.size();
    if (n == 0) throw std::invalid_argument("train_logistic_sgd: empty dataset");
    for (const int label : data.labels) {
        if (label != 0 && label != 1) {
            throw std::invalid_argument("train_logistic_sgd: labels must be in {0,1}");
        }
    }
    const std::size_t dim = static_cast<std::size_t>(data.dimension);
    std::vector<double> w(dim + 1, 0.0);
    std::vector<double> grad(dim + 1, 0.0);
    const std::size_t batch = static_cast<std::size_t>(cfg.batch_size);
    for (std::int64_t t = 1; t <= cfg.iterations; ++t) {
        std::fill(grad.begin(), grad.end(), 0.0);
        const std::size_t start =
            (static_cast<std::size_t>(t - 1) * batch) % n;
        for (std::size_t b = 0; b < batch; ++b) {
            const std::size_t i = (start + b) % n;
            const auto x = data.row(i);
            const double resid = detail::scored(w, x) - static_cast<double>(data.labels[i]);
            grad[0] += resid;
            for (std::size_t j = 0; j < dim; ++j) grad[j + 1] += resid * x[j];
        }
        const double step = cfg.step_scale / (cfg.smoothness * static_cast<double>(t));
        const double scale = step / static_cast<double>(batch); // mean over the batch
        for (std::size_t j = 0; j <= dim; ++j) w[j] -= scale * grad[j];
        if (t % 4096 == 0 && !std::isfinite(w[0])) break;
    }
    for (const double wj : w) {
        if (!std::isfinite(wj)) {
            throw TrainingError("train_logistic_sgd: weights diverged to non-finite values");
        }
    }
    TrainedClassifier clf;
    clf.weights = std::move(w);
    clf.train_log_loss = log_loss_at(data, clf.weights);
    if (!std::isfinite(clf.train_log_loss)) {
        throw TrainingError("train_logistic_sgd: training loss is non-finite");
    }
    return clf;
}

inline double log_loss(const TrainedClassifier& clf, const LabeledDataset& data) {
    return log_loss_at(data, clf.weights);
}

// Empirical ROC of a trained classifier: the threshold sweeps n_thresholds
// quantiles of the predicted scores, descending, which makes both rates
// nondecreasing; the corner points are attached by construction.
inline EmpiricalRoc empirical_roc(const TrainedClassifier& clf, const LabeledDataset& data,
                                  int n_thresholds) {
    if (n_thresholds < 1) throw std::invalid_argument("empirical_roc: n_thresholds must be >= 1");
    std::size_t positives = 0;
    for (const int label : data.labels) positives += static_cast<std::size_t>(label);
    const std::size_t negatives = data.size() - positives;
    if (positives == 0 || negatives == 0) {
        throw std::domain_error("empirical_roc: need both classes in the data");
    }
    std::vector<double> scores(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) scores[i] = clf.score(data.row(i));
    std::vector<double> sorted = scores;
    std::sort(sorted.begin(), sorted.end());
    std::vector<OperatingPoint> pts;
    pts.reserve(static_cast<std::size_t>(n_thresholds));
    for (int k = n_thresholds; k >= 1; --k) {
        const double q = static_cast<double>(k) / static_cast<double>(n_thresholds + 1);
        const std::size_t idx = static_cast<std::size_t>(
            q * static_cast<double>(sorted.size() - 1));
        const double tau = sorted[idx];
        std::size_t tp = 0;
        std::size_t fp = 0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (scores[i] >= tau) {
                if (data.labels[i] == 1) ++tp;
                else ++fp;
            }
        }
        pts.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                       static_cast<double>(tp) / static_cast<double>(positives)});
    }
    std::sort(pts.begin(), pts.end(), [](const OperatingPoint& a, const OperatingPoint& b) {
        return a.p_f < b.p_f || (a.p_f == b.p_f && a.p_t < b.p_t);
    });
    return EmpiricalRoc::from_points(std::move(pts));
}

// Measured generalization error: |train log loss - log loss on a fresh test
// sample|, with train and test sets drawn from independent substreams.
inline double generalization_gap(const SyntheticTask& task, std::int64_t n_train,
                                 std::int64_t n_test, const SgdConfig& cfg) {
    SyntheticTask train_task = task;
    train_task.stream = task.stream.derive(1);
    SyntheticTask test_task = task;
    test_task.stream = task.stream.derive(2);
    const LabeledDataset train = generate_dataset(train_task, n_train);
    const LabeledDataset test = generate_dataset(test_task, n_test);
    const TrainedClassifier clf = train_logistic_sgd(train, cfg);
    return std::abs(log_loss(clf, train) - log_loss(clf, test));
}

} // namespace ailiab::lab
