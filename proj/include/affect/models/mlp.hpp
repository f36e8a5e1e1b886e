#pragma once

#include <vector>

#include "affect/linalg.hpp"
#include "affect/models/common.hpp"

namespace affect {

// Single-hidden-layer rectifier network. Parameters live in one flat vector
// (layout: W1 HxD, b1 H, W2 KxH, b2 K) so the finite-difference checker and
// the artifact serializer can walk them without knowing the topology.
template <typename T>
struct MLPModel {
    std::size_t input_dim = 0;
    std::size_t hidden = 0;
    std::size_t n_classes = 0;
    bool multi_label = false;
    std::vector<T> theta;

    std::size_t w1_off() const { return 0; }
    std::size_t b1_off() const { return hidden * input_dim; }
    std::size_t w2_off() const { return b1_off() + hidden; }
    std::size_t b2_off() const { return w2_off() + n_classes * hidden; }
    std::size_t param_count() const { return b2_off() + n_classes; }

    std::span<T> w1() { return {theta.data() + w1_off(), hidden * input_dim}; }
    std::span<const T> w1() const { return {theta.data() + w1_off(), hidden * input_dim}; }
    std::span<T> b1() { return {theta.data() + b1_off(), hidden}; }
    std::span<const T> b1() const { return {theta.data() + b1_off(), hidden}; }
    std::span<T> w2() { return {theta.data() + w2_off(), n_classes * hidden}; }
    std::span<const T> w2() const { return {theta.data() + w2_off(), n_classes * hidden}; }
    std::span<T> b2() { return {theta.data() + b2_off(), n_classes}; }
    std::span<const T> b2() const { return {theta.data() + b2_off(), n_classes}; }

    void init(std::size_t d, std::size_t h, std::size_t k, bool ml, Rng& rng) {
        input_dim = d;
        hidden = h;
        n_classes = k;
        multi_label = ml;
        theta.assign(param_count(), T(0));
        detail::glorot_init(w1(), d, h, rng);
        detail::glorot_init(w2(), h, k, rng);
    }

    std::vector<T> logits(std::span<const T> x, std::vector<T>* hidden_out = nullptr) const {
        if (x.size() != input_dim) {
            throw_data("MLP expects dimension " + std::to_string(input_dim) + ", got " +
                       std::to_string(x.size()));
        }
        std::vector<T> h(hidden);
        auto w1v = w1();
        auto b1v = b1();
        for (std::size_t i = 0; i < hidden; ++i) {
            T s = b1v[i];
            const T* row = w1v.data() + i * input_dim;
            for (std::size_t j = 0; j < input_dim; ++j) s += row[j] * x[j];
            h[i] = s > T(0) ? s : T(0);
        }
        std::vector<T> out(n_classes);
        auto w2v = w2();
        auto b2v = b2();
        for (std::size_t c = 0; c < n_classes; ++c) {
            T s = b2v[c];
            const T* row = w2v.data() + c * hidden;
            for (std::size_t i = 0; i < hidden; ++i) s += row[i] * h[i];
            out[c] = s;
        }
        if (hidden_out) *hidden_out = std::move(h);
        return out;
    }

    std::vector<T> predict_proba(std::span<const T> x) const {
        return logits_to_proba(logits(x), multi_label);
    }
};

// Mean head loss over the batch plus (l2/2)*||W1||^2 + (l2/2)*||W2||^2
// (biases unregularized). grad, when given, must be zeroed and sized like theta.
template <typename T>
T mlp_batch_loss_grad(const MLPModel<T>& m, const LabeledDataset<T>& ds,
                      std::span<const std::size_t> indices, double l2,
                      std::vector<T>* grad = nullptr) {
    const T inv_n = T(1) / static_cast<T>(indices.size());
    T loss = T(0);
    std::vector<T> dlogits(m.n_classes);
    for (std::size_t idx : indices) {
        std::span<const T> x(ds.flat[idx]);
        std::vector<T> h;
        std::vector<T> out = m.logits(x, &h);
        loss += detail::head_loss_grad<T>(out, std::span<const std::uint8_t>(ds.labels[idx]),
                                          m.multi_label, dlogits);
        if (!grad) continue;
        std::span<T> g(*grad);
        // dense head
        for (std::size_t c = 0; c < m.n_classes; ++c) {
            T d = dlogits[c] * inv_n;
            g[m.b2_off() + c] += d;
            T* grow = g.data() + m.w2_off() + c * m.hidden;
            for (std::size_t i = 0; i < m.hidden; ++i) grow[i] += d * h[i];
        }
        // hidden layer through the rectifier mask
        auto w2v = m.w2();
        for (std::size_t i = 0; i < m.hidden; ++i) {
            if (h[i] <= T(0)) continue;
            T dh = T(0);
            for (std::size_t c = 0; c < m.n_classes; ++c) dh += w2v[c * m.hidden + i] * dlogits[c];
            dh *= inv_n;
            g[m.b1_off() + i] += dh;
            T* grow = g.data() + m.w1_off() + i * m.input_dim;
            for (std::size_t j = 0; j < m.input_dim; ++j) grow[j] += dh * x[j];
        }
    }
    loss *= inv_n;
    const T l2t = static_cast<T>(l2);
    loss += l2t / T(2) * (squared_norm(m.w1()) + squared_norm(m.w2()));
    if (grad) {
        std::span<T> g(*grad);
        auto w1v = m.w1();
        for (std::size_t i = 0; i < w1v.size(); ++i) g[m.w1_off() + i] += l2t * w1v[i];
        auto w2v = m.w2();
        for (std::size_t i = 0; i < w2v.size(); ++i) g[m.w2_off() + i] += l2t * w2v[i];
    }
    return loss;
}

template <typename T>
MLPModel<T> train_mlp(const LabeledDataset<T>& ds, const TrainConfig& cfg) {
    ds.validate();
    cfg.validate();
    if (ds.kind != InputKind::flat) throw_data("MLP needs flat inputs");

    MLPModel<T> model;
    Rng rng(derive_seed(cfg.seed, "mlp-init"));
    model.init(ds.input_dim(), cfg.hidden, ds.n_classes, ds.multi_label, rng);

    std::vector<T> grad(model.param_count());
    Rng order_rng(derive_seed(cfg.seed, "mlp-order"));
    detail::for_each_batch(ds.size(), cfg.epochs, cfg.batch_size, order_rng,
                           [&](std::span<const std::size_t> batch, std::size_t epoch) {
                               std::fill(grad.begin(), grad.end(), T(0));
                               T loss = mlp_batch_loss_grad(model, ds, batch, cfg.l2, &grad);
                               detail::check_finite_loss(static_cast<double>(loss), epoch, "mlp");
                               detail::clip_gradient(std::span<T>(grad), cfg.clip_norm);
                               const T lr = static_cast<T>(cfg.learning_rate);
                               for (std::size_t i = 0; i < grad.size(); ++i) {
                                   model.theta[i] -= lr * grad[i];
                               }
                           });
    return model;
}

} // namespace affect
