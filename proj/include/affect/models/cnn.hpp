#pragma once

#include <vector>

#include "affect/linalg.hpp"
#include "affect/models/common.hpp"

namespace affect {

// Word-sequence CNN: for each filter width w a bank of F filters runs a valid
// 1-D convolution down the rows of the tweet matrix, rectifies, and
// max-over-time pools to a single scalar per filter. The concatenated pooled
// vector feeds the dense head. Dropout applies to the pooled vector during
// training only.
//
// theta layout: per width (filters F x (w*dim), then biases F), then dense
// W (K x total_filters), dense b (K).
template <typename T>
struct ConvModel {
    std::size_t max_len = 0;
    std::size_t dim = 0;
    std::size_t filters = 0;
    std::vector<std::size_t> widths;
    std::size_t n_classes = 0;
    bool multi_label = false;
    double dropout = 0.0;
    std::vector<T> theta;

    std::size_t total_filters() const { return widths.size() * filters; }

    std::size_t bank_off(std::size_t wi) const {
        std::size_t off = 0;
        for (std::size_t i = 0; i < wi; ++i) off += filters * (widths[i] * dim) + filters;
        return off;
    }
    std::size_t bank_bias_off(std::size_t wi) const {
        return bank_off(wi) + filters * (widths[wi] * dim);
    }
    std::size_t dense_w_off() const { return bank_off(widths.size()); }
    std::size_t dense_b_off() const { return dense_w_off() + n_classes * total_filters(); }
    std::size_t param_count() const { return dense_b_off() + n_classes; }

    void init(std::size_t len, std::size_t d, std::size_t f, std::vector<std::size_t> ws,
              std::size_t k, bool ml, double drop, Rng& rng) {
        max_len = len;
        dim = d;
        filters = f;
        widths = std::move(ws);
        n_classes = k;
        multi_label = ml;
        dropout = drop;
        for (std::size_t w : widths) {
            if (w == 0 || w > max_len) throw_config("filter width must be in 1..max_len");
        }
        theta.assign(param_count(), T(0));
        for (std::size_t wi = 0; wi < widths.size(); ++wi) {
            std::span<T> bank(theta.data() + bank_off(wi), filters * widths[wi] * dim);
            detail::glorot_init(bank, widths[wi] * dim, std::size_t(1), rng);
        }
        std::span<T> dense(theta.data() + dense_w_off(), n_classes * total_filters());
        detail::glorot_init(dense, total_filters(), n_classes, rng);
    }

    // forward to the pooled vector; records the argmax position per filter
    void pool(const Matrix<T>& x, std::vector<T>& pooled, std::vector<std::size_t>* argmax) const {
        pooled.assign(total_filters(), T(0));
        if (argmax) argmax->assign(total_filters(), 0);
        for (std::size_t wi = 0; wi < widths.size(); ++wi) {
            const std::size_t w = widths[wi];
            const std::size_t positions = max_len - w + 1;
            const T* bank = theta.data() + bank_off(wi);
            const T* bias = theta.data() + bank_bias_off(wi);
            for (std::size_t f = 0; f < filters; ++f) {
                const T* filter = bank + f * w * dim;
                T best = T(0); // rectifier floor: max(0, act) pooled
                std::size_t best_t = 0;
                bool found = false;
                for (std::size_t t = 0; t < positions; ++t) {
                    T s = bias[f];
                    const T* window = x.data().data() + t * dim;
                    for (std::size_t i = 0; i < w * dim; ++i) s += filter[i] * window[i];
                    T act = s > T(0) ? s : T(0);
                    if (!found || act > best) {
                        best = act;
                        best_t = t;
                        found = true;
                    }
                }
                pooled[wi * filters + f] = best;
                if (argmax) (*argmax)[wi * filters + f] = best_t;
            }
        }
    }

    std::vector<T> logits(const Matrix<T>& x) const {
        if (x.rows() != max_len || x.cols() != dim) throw_data("CNN input shape mismatch");
        std::vector<T> pooled;
        pool(x, pooled, nullptr);
        std::vector<T> out(n_classes);
        const T* dw = theta.data() + dense_w_off();
        const T* db = theta.data() + dense_b_off();
        for (std::size_t c = 0; c < n_classes; ++c) {
            T s = db[c];
            const T* row = dw + c * total_filters();
            for (std::size_t i = 0; i < pooled.size(); ++i) s += row[i] * pooled[i];
            out[c] = s;
        }
        return out;
    }

    std::vector<T> predict_proba(const Matrix<T>& x) const {
        return logits_to_proba(logits(x), multi_label);
    }
};

// Batch loss/gradient. dropout_rng == nullptr disables dropout (prediction
// and gradient-check paths); training passes the run's stream.
template <typename T>
T cnn_batch_loss_grad(const ConvModel<T>& m, const LabeledDataset<T>& ds,
                      std::span<const std::size_t> indices, double l2,
                      std::vector<T>* grad = nullptr, Rng* dropout_rng = nullptr) {
    const T inv_n = T(1) / static_cast<T>(indices.size());
    T loss = T(0);
    std::vector<T> dlogits(m.n_classes);
    std::vector<T> pooled;
    std::vector<std::size_t> argmax;
    const std::size_t tf = m.total_filters();
    std::vector<T> kept(tf);
    const T keep_scale =
        m.dropout > 0 ? static_cast<T>(1.0 / (1.0 - m.dropout)) : T(1);

    for (std::size_t idx : indices) {
        const Matrix<T>& x = ds.seq[idx];
        if (x.rows() != m.max_len || x.cols() != m.dim) throw_data("CNN input shape mismatch");
        m.pool(x, pooled, grad ? &argmax : nullptr);

        // inverted dropout on the pooled vector
        std::vector<std::uint8_t> mask;
        if (dropout_rng && m.dropout > 0) {
            mask.resize(tf);
            for (std::size_t i = 0; i < tf; ++i) {
                mask[i] = dropout_rng->next_double() >= m.dropout ? 1 : 0;
                kept[i] = mask[i] ? pooled[i] * keep_scale : T(0);
            }
        } else {
            std::copy(pooled.begin(), pooled.end(), kept.begin());
        }

        std::vector<T> out(m.n_classes);
        const T* dw = m.theta.data() + m.dense_w_off();
        const T* db = m.theta.data() + m.dense_b_off();
        for (std::size_t c = 0; c < m.n_classes; ++c) {
            T s = db[c];
            const T* row = dw + c * tf;
            for (std::size_t i = 0; i < tf; ++i) s += row[i] * kept[i];
            out[c] = s;
        }
        loss += detail::head_loss_grad<T>(out, std::span<const std::uint8_t>(ds.labels[idx]),
                                          m.multi_label, dlogits);
        if (!grad) continue;

        std::span<T> g(*grad);
        std::vector<T> dpooled(tf, T(0));
        for (std::size_t c = 0; c < m.n_classes; ++c) {
            T d = dlogits[c] * inv_n;
            g[m.dense_b_off() + c] += d;
            T* grow = g.data() + m.dense_w_off() + c * tf;
            const T* row = dw + c * tf;
            for (std::size_t i = 0; i < tf; ++i) {
                grow[i] += d * kept[i];
                dpooled[i] += row[i] * dlogits[c];
            }
        }
        if (!mask.empty()) {
            for (std::size_t i = 0; i < tf; ++i) dpooled[i] = mask[i] ? dpooled[i] * keep_scale : T(0);
        }
        // route pooled gradients to the argmax window of each filter
        for (std::size_t wi = 0; wi < m.widths.size(); ++wi) {
            const std::size_t w = m.widths[wi];
            for (std::size_t f = 0; f < m.filters; ++f) {
                const std::size_t pi = wi * m.filters + f;
                if (pooled[pi] <= T(0)) continue; // pre-activation <= 0: rectifier kills the path
                T dact = dpooled[pi] * inv_n;
                const std::size_t t = argmax[pi];
                g[m.bank_bias_off(wi) + f] += dact;
                T* gfilter = g.data() + m.bank_off(wi) + f * w * m.dim;
                const T* window = x.data().data() + t * m.dim;
                for (std::size_t i = 0; i < w * m.dim; ++i) gfilter[i] += dact * window[i];
            }
        }
    }
    loss *= inv_n;

    const T l2t = static_cast<T>(l2);
    // L2 on filters and dense weights, not biases
    T reg = T(0);
    for (std::size_t wi = 0; wi < m.widths.size(); ++wi) {
        std::span<const T> bank(m.theta.data() + m.bank_off(wi),
                                m.filters * m.widths[wi] * m.dim);
        reg += squared_norm(bank);
        if (grad) {
            std::span<T> g(*grad);
            for (std::size_t i = 0; i < bank.size(); ++i) g[m.bank_off(wi) + i] += l2t * bank[i];
        }
    }
    std::span<const T> dense(m.theta.data() + m.dense_w_off(), m.n_classes * tf);
    reg += squared_norm(dense);
    if (grad) {
        std::span<T> g(*grad);
        for (std::size_t i = 0; i < dense.size(); ++i) g[m.dense_w_off() + i] += l2t * dense[i];
    }
    loss += l2t / T(2) * reg;
    return loss;
}

template <typename T>
ConvModel<T> train_cnn(const LabeledDataset<T>& ds, const TrainConfig& cfg) {
    ds.validate();
    cfg.validate();
    if (ds.kind != InputKind::sequence) throw_data("CNN needs sequence inputs");

    ConvModel<T> model;
    Rng init_rng(derive_seed(cfg.seed, "cnn-init"));
    model.init(ds.seq.front().rows(), ds.seq.front().cols(), cfg.filters, cfg.filter_widths,
               ds.n_classes, ds.multi_label, cfg.dropout, init_rng);

    std::vector<T> grad(model.param_count());
    Rng order_rng(derive_seed(cfg.seed, "cnn-order"));
    Rng dropout_rng(derive_seed(cfg.seed, "cnn-dropout"));
    detail::for_each_batch(ds.size(), cfg.epochs, cfg.batch_size, order_rng,
                           [&](std::span<const std::size_t> batch, std::size_t epoch) {
                               std::fill(grad.begin(), grad.end(), T(0));
                               T loss = cnn_batch_loss_grad(model, ds, batch, cfg.l2, &grad,
                                                            &dropout_rng);
                               detail::check_finite_loss(static_cast<double>(loss), epoch, "cnn");
                               detail::clip_gradient(std::span<T>(grad), cfg.clip_norm);
                               const T lr = static_cast<T>(cfg.learning_rate);
                               for (std::size_t i = 0; i < grad.size(); ++i) {
                                   model.theta[i] -= lr * grad[i];
                               }
                           });
    return model;
}

} // namespace affect
