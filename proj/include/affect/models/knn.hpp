#pragma once

#include <algorithm>
#include <vector>

#include "affect/linalg.hpp"
#include "affect/models/common.hpp"

namespace affect {

// k-nearest-neighbor over stored training examples, Euclidean distance.
// Distance ties break by lower stored index; vote ties return the class of
// the single nearest neighbor.
template <typename T>
struct KNNModel {
    std::vector<std::vector<T>> stored_inputs;
    std::vector<std::vector<std::uint8_t>> stored_labels;
    std::size_t n_classes = 0;
    std::size_t k = 5;
    bool multi_label = false;

    std::size_t input_dim() const { return stored_inputs.empty() ? 0 : stored_inputs.front().size(); }
};

template <typename T>
KNNModel<T> train_knn(const LabeledDataset<T>& ds, std::size_t k) {
    ds.validate();
    if (ds.kind != InputKind::flat) throw_data("KNN needs flat inputs");
    if (k == 0 || k > ds.size()) {
        throw_train("k=" + std::to_string(k) + " outside 1.." + std::to_string(ds.size()));
    }
    KNNModel<T> model;
    model.stored_inputs = ds.flat;
    model.stored_labels = ds.labels;
    model.n_classes = ds.n_classes;
    model.k = k;
    model.multi_label = ds.multi_label;
    return model;
}

namespace detail {

template <typename T>
std::vector<std::size_t> nearest_indices(const KNNModel<T>& m, std::span<const T> x) {
    if (x.size() != m.input_dim()) {
        throw_data("KNN expects dimension " + std::to_string(m.input_dim()) + ", got " +
                   std::to_string(x.size()));
    }
    const std::size_t n = m.stored_inputs.size();
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        double d = 0;
        const auto& s = m.stored_inputs[i];
        for (std::size_t j = 0; j < s.size(); ++j) {
            double diff = static_cast<double>(x[j]) - static_cast<double>(s[j]);
            d += diff * diff;
        }
        dist[i] = {d, i};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(m.k), dist.end());
    std::vector<std::size_t> out(m.k);
    for (std::size_t i = 0; i < m.k; ++i) out[i] = dist[i].second;
    return out;
}

} // namespace detail

template <typename T>
std::size_t predict_knn(const KNNModel<T>& m, std::span<const T> x) {
    std::vector<std::size_t> nn = detail::nearest_indices(m, x);
    std::vector<std::size_t> votes(m.n_classes, 0);
    for (std::size_t idx : nn) {
        const auto& label = m.stored_labels[idx];
        for (std::size_t c = 0; c < label.size(); ++c) {
            if (label[c]) votes[c] += 1;
        }
    }
    std::size_t best = 0;
    bool tie = false;
    for (std::size_t c = 1; c < votes.size(); ++c) {
        if (votes[c] > votes[best]) {
            best = c;
            tie = false;
        } else if (votes[c] == votes[best]) {
            tie = true;
        }
    }
    if (tie) {
        const auto& label = m.stored_labels[nn.front()];
        for (std::size_t c = 0; c < label.size(); ++c) {
            if (label[c]) return c;
        }
    }
    return best;
}

// Multi-label: a label is predicted when a strict majority of the k neighbors
// carries it.
template <typename T>
std::vector<std::uint8_t> predict_knn_labels(const KNNModel<T>& m, std::span<const T> x) {
    std::vector<std::size_t> nn = detail::nearest_indices(m, x);
    std::vector<std::uint8_t> bits(m.n_classes, 0);
    for (std::size_t c = 0; c < m.n_classes; ++c) {
        std::size_t count = 0;
        for (std::size_t idx : nn) count += m.stored_labels[idx][c] ? 1 : 0;
        bits[c] = (2 * count > m.k) ? 1 : 0;
    }
    return bits;
}

} // namespace affect
