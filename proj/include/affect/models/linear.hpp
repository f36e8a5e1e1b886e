#pragma once

#include <string>
#include <vector>

#include "affect/linalg.hpp"
#include "affect/models/common.hpp"

namespace affect {

// One-vs-rest linear classifier trained with the soft-margin hinge loss by
// per-example stochastic subgradient descent. Row c is the binary classifier
// for class c against the rest.
template <typename T>
struct LinearModel {
    Matrix<T> weights;      // K x D
    std::vector<T> biases;  // K
    bool multi_label = false;

    std::size_t n_classes() const { return biases.size(); }
    std::size_t input_dim() const { return weights.cols(); }

    std::vector<T> scores(std::span<const T> x) const {
        if (x.size() != weights.cols()) {
            throw_data("linear model expects dimension " + std::to_string(weights.cols()) +
                       ", got " + std::to_string(x.size()));
        }
        std::vector<T> s(n_classes());
        for (std::size_t c = 0; c < n_classes(); ++c) {
            s[c] = dot(weights.row(c), x) + biases[c];
        }
        return s;
    }
};

template <typename T>
std::vector<T> predict_linear(const LinearModel<T>& m, std::span<const T> x) {
    return m.scores(x);
}

template <typename T>
std::size_t predict_linear_class(const LinearModel<T>& m, std::span<const T> x) {
    std::vector<T> s = m.scores(x);
    std::vector<double> d(s.begin(), s.end());
    return argmax_lowest_tie(std::span<const double>(d));
}

// Multi-label decision: score > 0 per class.
template <typename T>
std::vector<std::uint8_t> predict_linear_labels(const LinearModel<T>& m, std::span<const T> x) {
    std::vector<T> s = m.scores(x);
    std::vector<std::uint8_t> bits(s.size());
    for (std::size_t c = 0; c < s.size(); ++c) bits[c] = s[c] > T(0) ? 1 : 0;
    return bits;
}

namespace detail {

// Binary hinge trainer for class c vs rest; y in {-1, +1}. L2 applies to the
// weight vector only. Example order is reshuffled from rng each epoch.
template <typename T>
void train_binary_hinge(const LabeledDataset<T>& ds, std::size_t cls, const TrainConfig& cfg,
                        Rng& rng, std::span<T> w, T& b) {
    const std::size_t n = ds.size();
    const T lr = static_cast<T>(cfg.learning_rate);
    const T l2 = static_cast<T>(cfg.l2);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t(0));
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t idx : order) {
            std::span<const T> x(ds.flat[idx]);
            T y = ds.labels[idx][cls] ? T(1) : T(-1);
            T margin = y * (dot(std::span<const T>(w), x) + b);
            // subgradient: l2*w - [margin < 1] * y * x
            for (std::size_t j = 0; j < w.size(); ++j) w[j] -= lr * l2 * w[j];
            if (margin < T(1)) {
                axpy(lr * y, x, w);
                b += lr * y;
            }
        }
    }
}

} // namespace detail

template <typename T>
LinearModel<T> train_ovr_linear(const LabeledDataset<T>& ds, const TrainConfig& cfg) {
    ds.validate();
    cfg.validate();
    if (ds.kind != InputKind::flat) throw_data("linear trainer needs flat inputs");
    const std::size_t k = ds.n_classes;
    const std::size_t d = ds.input_dim();

    for (std::size_t c = 0; c < k; ++c) {
        std::size_t pos = 0;
        for (const auto& label : ds.labels) pos += label[c] ? 1 : 0;
        if (pos == 0 || pos == ds.size()) {
            throw_train("degenerate class " + std::to_string(c) + ": " +
                        (pos == 0 ? "no positive examples" : "no negative examples"));
        }
    }

    LinearModel<T> model;
    model.weights = Matrix<T>(k, d, T(0));
    model.biases.assign(k, T(0));
    model.multi_label = ds.multi_label;
    for (std::size_t c = 0; c < k; ++c) {
        // each binary problem gets its own derived stream so the rows match
        // standalone binary trainings exactly
        Rng rng(derive_seed(cfg.seed, "ovr-class-" + std::to_string(c)));
        detail::train_binary_hinge(ds, c, cfg, rng, model.weights.row(c), model.biases[c]);
    }
    return model;
}

// Mean hinge loss over a batch plus (l2/2)*||W||^2; used by the gradient
// checker, which needs loss and analytic gradient in matching units.
template <typename T>
T hinge_batch_loss(const LinearModel<T>& m, const LabeledDataset<T>& ds,
                   std::span<const std::size_t> indices, double l2) {
    T loss = T(0);
    for (std::size_t idx : indices) {
        for (std::size_t c = 0; c < m.n_classes(); ++c) {
            T y = ds.labels[idx][c] ? T(1) : T(-1);
            T margin = y * (dot(m.weights.row(c), std::span<const T>(ds.flat[idx])) + m.biases[c]);
            loss += std::max(T(0), T(1) - margin);
        }
    }
    loss /= static_cast<T>(indices.size());
    loss += static_cast<T>(l2) / T(2) * squared_norm(m.weights.data());
    return loss;
}

template <typename T>
void hinge_batch_grad(const LinearModel<T>& m, const LabeledDataset<T>& ds,
                      std::span<const std::size_t> indices, double l2, Matrix<T>& dw,
                      std::vector<T>& db) {
    dw = Matrix<T>(m.weights.rows(), m.weights.cols(), T(0));
    db.assign(m.n_classes(), T(0));
    const T inv_n = T(1) / static_cast<T>(indices.size());
    for (std::size_t idx : indices) {
        for (std::size_t c = 0; c < m.n_classes(); ++c) {
            T y = ds.labels[idx][c] ? T(1) : T(-1);
            std::span<const T> x(ds.flat[idx]);
            T margin = y * (dot(m.weights.row(c), x) + m.biases[c]);
            if (margin < T(1)) {
                axpy(-y * inv_n, x, dw.row(c));
                db[c] -= y * inv_n;
            }
        }
    }
    for (std::size_t i = 0; i < dw.size(); ++i) {
        dw.data()[i] += static_cast<T>(l2) * m.weights.data()[i];
    }
}

} // namespace affect
