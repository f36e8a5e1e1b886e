#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "affect/linalg.hpp"
#include "affect/models/common.hpp"

namespace affect {

// Gaussian naive Bayes over dense features: per-class per-feature sample mean
// and biased variance (floored), priors from class frequencies.
template <typename T>
struct GaussianNBModel {
    Matrix<T> means;       // K x D
    Matrix<T> variances;   // K x D, each >= variance_floor
    std::vector<T> log_priors;

    std::size_t n_classes() const { return log_priors.size(); }
    std::size_t input_dim() const { return means.cols(); }

    double log_posterior(std::size_t cls, std::span<const T> x) const {
        constexpr double log_2pi = 1.8378770664093454835606594728112; // ln(2*pi)
        double lp = static_cast<double>(log_priors[cls]);
        for (std::size_t j = 0; j < means.cols(); ++j) {
            double var = static_cast<double>(variances(cls, j));
            double diff = static_cast<double>(x[j]) - static_cast<double>(means(cls, j));
            lp -= 0.5 * (log_2pi + std::log(var) + diff * diff / var);
        }
        return lp;
    }
};

template <typename T>
GaussianNBModel<T> train_gnb(const LabeledDataset<T>& ds, double variance_floor = 1e-9) {
    ds.validate();
    if (ds.kind != InputKind::flat) throw_data("naive Bayes needs flat inputs");
    const std::size_t k = ds.n_classes;
    const std::size_t d = ds.input_dim();
    const std::size_t n = ds.size();

    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) counts[ds.label_index(i)] += 1;
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] < 2) {
            throw_train("class " + std::to_string(c) + " has " + std::to_string(counts[c]) +
                        " examples; Gaussian NB needs at least 2 per class");
        }
    }

    GaussianNBModel<T> model;
    model.means = Matrix<T>(k, d, T(0));
    model.variances = Matrix<T>(k, d, T(0));
    model.log_priors.resize(k);

    for (std::size_t i = 0; i < n; ++i) {
        std::size_t c = ds.label_index(i);
        for (std::size_t j = 0; j < d; ++j) model.means(c, j) += ds.flat[i][j];
    }
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t j = 0; j < d; ++j) model.means(c, j) /= static_cast<T>(counts[c]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t c = ds.label_index(i);
        for (std::size_t j = 0; j < d; ++j) {
            T diff = ds.flat[i][j] - model.means(c, j);
            model.variances(c, j) += diff * diff;
        }
    }
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t j = 0; j < d; ++j) {
            T v = model.variances(c, j) / static_cast<T>(counts[c]); // biased estimator
            model.variances(c, j) = std::max(v, static_cast<T>(variance_floor));
        }
        model.log_priors[c] =
            static_cast<T>(std::log(static_cast<double>(counts[c]) / static_cast<double>(n)));
    }
    return model;
}

// argmax of the log posterior; ties break toward the lower class index.
template <typename T>
std::size_t predict_gnb(const GaussianNBModel<T>& m, std::span<const T> x) {
    if (x.size() != m.input_dim()) {
        throw_data("naive Bayes expects dimension " + std::to_string(m.input_dim()) + ", got " +
                   std::to_string(x.size()));
    }
    std::vector<double> lp(m.n_classes());
    for (std::size_t c = 0; c < m.n_classes(); ++c) lp[c] = m.log_posterior(c, x);
    return argmax_lowest_tie(std::span<const double>(lp));
}

// Binary-relevance wrapper for multi-label tasks: one 2-class Gaussian NB per
// label (absent = class 0, present = class 1).
template <typename T>
struct BinaryRelevanceGNB {
    std::vector<GaussianNBModel<T>> per_label;

    std::size_t n_labels() const { return per_label.size(); }
    std::size_t input_dim() const { return per_label.empty() ? 0 : per_label.front().input_dim(); }
};

template <typename T>
BinaryRelevanceGNB<T> train_gnb_multilabel(const LabeledDataset<T>& ds,
                                           double variance_floor = 1e-9) {
    ds.validate();
    if (!ds.multi_label) throw_data("binary-relevance NB expects a multi-label dataset");
    BinaryRelevanceGNB<T> model;
    model.per_label.reserve(ds.n_classes);
    for (std::size_t c = 0; c < ds.n_classes; ++c) {
        LabeledDataset<T> binary;
        binary.kind = InputKind::flat;
        binary.n_classes = 2;
        binary.multi_label = false;
        binary.flat = ds.flat;
        binary.labels.reserve(ds.size());
        for (std::size_t i = 0; i < ds.size(); ++i) {
            binary.labels.push_back(one_hot(ds.labels[i][c] ? 1 : 0, 2));
        }
        model.per_label.push_back(train_gnb(binary, variance_floor));
    }
    return model;
}

template <typename T>
std::vector<std::uint8_t> predict_gnb_labels(const BinaryRelevanceGNB<T>& m,
                                             std::span<const T> x) {
    std::vector<std::uint8_t> bits(m.n_labels());
    for (std::size_t c = 0; c < m.n_labels(); ++c) {
        bits[c] = predict_gnb(m.per_label[c], x) == 1 ? 1 : 0;
    }
    return bits;
}

} // namespace affect
