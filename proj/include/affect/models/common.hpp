#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "affect/common.hpp"
#include "affect/dataset.hpp"
#include "affect/rng.hpp"

namespace affect {

// Table 4 column order; OVR and SVM are aliases for the same linear hinge
// trainer and are kept as distinct names.
enum class Family { ovr, svm, nb, knn, mlp, lstm, cnn };

inline constexpr std::array<std::string_view, 7> kFamilyNames = {"ovr", "svm", "nb", "knn",
                                                                 "mlp", "lstm", "cnn"};

inline std::string_view to_string(Family f) { return kFamilyNames[static_cast<std::size_t>(f)]; }

inline Family family_from_string(const std::string& s) {
    for (std::size_t i = 0; i < kFamilyNames.size(); ++i) {
        if (s == kFamilyNames[i]) return static_cast<Family>(i);
    }
    if (s == "one-vs-rest") return Family::ovr;
    throw_config("unknown model family '" + s + "'");
}

inline bool uses_sequence_input(Family f) { return f == Family::cnn || f == Family::lstm; }

struct TrainConfig {
    double learning_rate = 0.01;
    std::size_t epochs = 200;
    double l2 = 1e-4;
    std::uint64_t seed = 0;
    std::size_t batch_size = 32;
    std::optional<double> clip_norm;  // set for LSTM by default_for()

    // family-specific knobs
    std::size_t hidden = 128;                  // MLP / LSTM
    std::size_t filters = 100;                 // CNN, per width
    std::vector<std::size_t> filter_widths = {3, 4, 5};
    double dropout = 0.5;                      // CNN pooled layer
    std::size_t knn_k = 5;
    double variance_floor = 1e-9;              // Gaussian NB

    static TrainConfig default_for(Family f) {
        TrainConfig cfg;
        if (f == Family::cnn || f == Family::lstm) cfg.epochs = 500;
        if (f == Family::lstm) cfg.clip_norm = 5.0;
        return cfg;
    }

    void validate() const {
        if (learning_rate <= 0) throw_config("learning_rate must be positive");
        if (epochs == 0) throw_config("epochs must be positive");
        if (l2 < 0) throw_config("l2 must be nonnegative");
        if (batch_size == 0) throw_config("batch_size must be positive");
        if (clip_norm && *clip_norm <= 0) throw_config("clip_norm must be positive");
        if (dropout < 0 || dropout >= 1) throw_config("dropout must be in [0, 1)");
    }
};

namespace detail {

// uniform(-r, r) with r = sqrt(6 / (fan_in + fan_out))
template <typename T>
void glorot_init(std::span<T> w, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    double r = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (T& x : w) x = static_cast<T>(rng.uniform(-r, r));
}

template <typename T>
void softmax_inplace(std::span<T> logits) {
    T mx = logits[0];
    for (T v : logits) mx = std::max(mx, v);
    T sum = T(0);
    for (T& v : logits) {
        v = std::exp(v - mx);
        sum += v;
    }
    for (T& v : logits) v /= sum;
}

template <typename T>
T sigmoid(T x) {
    return x >= T(0) ? T(1) / (T(1) + std::exp(-x)) : std::exp(x) / (T(1) + std::exp(x));
}

// Multiclass head: softmax + cross-entropy. Multi-label head: per-class
// logistic + binary cross-entropy averaged over classes. Both write
// d(loss)/d(logits) into dlogits and return the example loss.
template <typename T>
T head_loss_grad(std::span<const T> logits, std::span<const std::uint8_t> label, bool multi_label,
                 std::span<T> dlogits) {
    const std::size_t k = logits.size();
    if (!multi_label) {
        std::vector<T> p(logits.begin(), logits.end());
        softmax_inplace<T>(p);
        std::size_t y = 0;
        for (std::size_t c = 0; c < k; ++c) {
            if (label[c]) y = c;
        }
        for (std::size_t c = 0; c < k; ++c) dlogits[c] = p[c] - (c == y ? T(1) : T(0));
        return -std::log(std::max(p[y], T(1e-30)));
    }
    T loss = T(0);
    for (std::size_t c = 0; c < k; ++c) {
        T p = sigmoid(logits[c]);
        T y = label[c] ? T(1) : T(0);
        loss -= y * std::log(std::max(p, T(1e-30))) + (T(1) - y) * std::log(std::max(T(1) - p, T(1e-30)));
        dlogits[c] = (p - y) / static_cast<T>(k);
    }
    return loss / static_cast<T>(k);
}

template <typename T>
void clip_gradient(std::span<T> grad, std::optional<double> clip_norm) {
    if (!clip_norm) return;
    double norm = std::sqrt(static_cast<double>(squared_norm(std::span<const T>(grad))));
    if (norm > *clip_norm) {
        T scale = static_cast<T>(*clip_norm / norm);
        for (T& g : grad) g *= scale;
    }
}

// Deterministic epoch/batch schedule shared by every gradient trainer.
// visit(batch_indices, epoch) is called once per mini-batch.
template <typename Visit>
void for_each_batch(std::size_t n, std::size_t epochs, std::size_t batch_size, Rng& rng,
                    Visit visit) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t(0));
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < n; start += batch_size) {
            std::size_t end = std::min(start + batch_size, n);
            visit(std::span<const std::size_t>(order.data() + start, end - start), epoch);
        }
    }
}

inline void check_finite_loss(double loss, std::size_t epoch, std::string_view family) {
    if (!std::isfinite(loss)) {
        throw_train(std::string(family) + " training diverged: non-finite loss at epoch " +
                    std::to_string(epoch));
    }
}

} // namespace detail

// Probability contract shared by MLP/CNN/LSTM prediction: multiclass output
// sums to 1, multi-label output is per-class independent in [0, 1].
template <typename T>
std::vector<T> logits_to_proba(std::vector<T> logits, bool multi_label) {
    if (multi_label) {
        for (T& v : logits) v = detail::sigmoid(v);
    } else {
        detail::softmax_inplace<T>(std::span<T>(logits));
    }
    return logits;
}

inline std::size_t argmax_lowest_tie(std::span<const double> scores) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best]) best = i;
    }
    return best;
}

} // namespace affect
