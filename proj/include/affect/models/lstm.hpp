#pragma once

#include <vector>

#include "affect/linalg.hpp"
#include "affect/models/common.hpp"

namespace affect {

// Standard gated recurrence over the padded tweet rows; zero initial hidden
// and cell state; the final hidden state feeds the dense head. Training is
// backpropagation through time over the full sequence.
//
// theta layout: 4 gate blocks in order (input, forget, output, candidate),
// each Wx (H x dim), Wh (H x H), b (H); then readout W (K x H), b (K).
template <typename T>
struct LSTMModel {
    std::size_t max_len = 0;
    std::size_t dim = 0;
    std::size_t hidden = 0;
    std::size_t n_classes = 0;
    bool multi_label = false;
    std::vector<T> theta;

    std::size_t gate_block() const { return hidden * dim + hidden * hidden + hidden; }
    std::size_t wx_off(std::size_t gate) const { return gate * gate_block(); }
    std::size_t wh_off(std::size_t gate) const { return wx_off(gate) + hidden * dim; }
    std::size_t b_off(std::size_t gate) const { return wh_off(gate) + hidden * hidden; }
    std::size_t readout_w_off() const { return 4 * gate_block(); }
    std::size_t readout_b_off() const { return readout_w_off() + n_classes * hidden; }
    std::size_t param_count() const { return readout_b_off() + n_classes; }

    void init(std::size_t len, std::size_t d, std::size_t h, std::size_t k, bool ml, Rng& rng) {
        max_len = len;
        dim = d;
        hidden = h;
        n_classes = k;
        multi_label = ml;
        theta.assign(param_count(), T(0));
        for (std::size_t gate = 0; gate < 4; ++gate) {
            detail::glorot_init(std::span<T>(theta.data() + wx_off(gate), hidden * dim), d + h, h,
                                rng);
            detail::glorot_init(std::span<T>(theta.data() + wh_off(gate), hidden * hidden), d + h,
                                h, rng);
        }
        // forget gate bias starts at 1 so cell memory survives the PAD tail
        for (std::size_t u = 0; u < hidden; ++u) theta[b_off(1) + u] = T(1);
        detail::glorot_init(std::span<T>(theta.data() + readout_w_off(), n_classes * hidden), h, k,
                            rng);
    }

    // caches for backpropagation through time
    struct Trace {
        std::vector<T> gates[4]; // sigma/tanh activations per step, L x H each
        std::vector<T> cell;     // L x H
        std::vector<T> cell_tanh;
        std::vector<T> hidden_states; // L x H
    };

    std::vector<T> final_hidden(const Matrix<T>& x, Trace* trace = nullptr) const {
        if (x.rows() != max_len || x.cols() != dim) throw_data("LSTM input shape mismatch");
        const std::size_t H = hidden;
        std::vector<T> h(H, T(0)), c(H, T(0));
        if (trace) {
            for (auto& g : trace->gates) g.assign(max_len * H, T(0));
            trace->cell.assign(max_len * H, T(0));
            trace->cell_tanh.assign(max_len * H, T(0));
            trace->hidden_states.assign(max_len * H, T(0));
        }
        std::vector<T> pre(4 * H);
        for (std::size_t t = 0; t < max_len; ++t) {
            std::span<const T> xt = x.row(t);
            for (std::size_t gate = 0; gate < 4; ++gate) {
                const T* wx = theta.data() + wx_off(gate);
                const T* wh = theta.data() + wh_off(gate);
                const T* b = theta.data() + b_off(gate);
                for (std::size_t u = 0; u < H; ++u) {
                    T s = b[u];
                    const T* wxr = wx + u * dim;
                    for (std::size_t j = 0; j < dim; ++j) s += wxr[j] * xt[j];
                    const T* whr = wh + u * H;
                    for (std::size_t j = 0; j < H; ++j) s += whr[j] * h[j];
                    pre[gate * H + u] = s;
                }
            }
            for (std::size_t u = 0; u < H; ++u) {
                T ig = detail::sigmoid(pre[0 * H + u]);
                T fg = detail::sigmoid(pre[1 * H + u]);
                T og = detail::sigmoid(pre[2 * H + u]);
                T gg = std::tanh(pre[3 * H + u]);
                T cu = fg * c[u] + ig * gg;
                T ct = std::tanh(cu);
                c[u] = cu;
                h[u] = og * ct;
                if (trace) {
                    trace->gates[0][t * H + u] = ig;
                    trace->gates[1][t * H + u] = fg;
                    trace->gates[2][t * H + u] = og;
                    trace->gates[3][t * H + u] = gg;
                    trace->cell[t * H + u] = cu;
                    trace->cell_tanh[t * H + u] = ct;
                    trace->hidden_states[t * H + u] = h[u];
                }
            }
        }
        return h;
    }

    std::vector<T> logits(const Matrix<T>& x) const {
        std::vector<T> h = final_hidden(x);
        std::vector<T> out(n_classes);
        const T* w = theta.data() + readout_w_off();
        const T* b = theta.data() + readout_b_off();
        for (std::size_t cidx = 0; cidx < n_classes; ++cidx) {
            T s = b[cidx];
            const T* row = w + cidx * hidden;
            for (std::size_t u = 0; u < hidden; ++u) s += row[u] * h[u];
            out[cidx] = s;
        }
        return out;
    }

    std::vector<T> predict_proba(const Matrix<T>& x) const {
        return logits_to_proba(logits(x), multi_label);
    }
};

template <typename T>
T lstm_batch_loss_grad(const LSTMModel<T>& m, const LabeledDataset<T>& ds,
                       std::span<const std::size_t> indices, double l2,
                       std::vector<T>* grad = nullptr) {
    const std::size_t H = m.hidden;
    const std::size_t L = m.max_len;
    const T inv_n = T(1) / static_cast<T>(indices.size());
    T loss = T(0);
    std::vector<T> dlogits(m.n_classes);
    typename LSTMModel<T>::Trace trace;

    for (std::size_t idx : indices) {
        const Matrix<T>& x = ds.seq[idx];
        std::vector<T> hT = m.final_hidden(x, grad ? &trace : nullptr);

        std::vector<T> out(m.n_classes);
        const T* w = m.theta.data() + m.readout_w_off();
        const T* bw = m.theta.data() + m.readout_b_off();
        for (std::size_t cidx = 0; cidx < m.n_classes; ++cidx) {
            T s = bw[cidx];
            const T* row = w + cidx * H;
            for (std::size_t u = 0; u < H; ++u) s += row[u] * hT[u];
            out[cidx] = s;
        }
        loss += detail::head_loss_grad<T>(out, std::span<const std::uint8_t>(ds.labels[idx]),
                                          m.multi_label, dlogits);
        if (!grad) continue;

        std::span<T> g(*grad);
        std::vector<T> dh(H, T(0)), dc(H, T(0));
        for (std::size_t cidx = 0; cidx < m.n_classes; ++cidx) {
            T d = dlogits[cidx] * inv_n;
            g[m.readout_b_off() + cidx] += d;
            T* grow = g.data() + m.readout_w_off() + cidx * H;
            const T* row = w + cidx * H;
            for (std::size_t u = 0; u < H; ++u) {
                grow[u] += d * hT[u];
                dh[u] += row[u] * dlogits[cidx] * inv_n;
            }
        }

        std::vector<T> dpre(4 * H);
        for (std::size_t t = L; t-- > 0;) {
            std::span<const T> xt = x.row(t);
            const T* hprev = t > 0 ? trace.hidden_states.data() + (t - 1) * H : nullptr;
            for (std::size_t u = 0; u < H; ++u) {
                const T ig = trace.gates[0][t * H + u];
                const T fg = trace.gates[1][t * H + u];
                const T og = trace.gates[2][t * H + u];
                const T gg = trace.gates[3][t * H + u];
                const T ct = trace.cell_tanh[t * H + u];
                const T cprev = t > 0 ? trace.cell[(t - 1) * H + u] : T(0);

                const T do_ = dh[u] * ct;
                dc[u] += dh[u] * og * (T(1) - ct * ct);
                const T df = dc[u] * cprev;
                const T di = dc[u] * gg;
                const T dg = dc[u] * ig;

                dpre[0 * H + u] = di * ig * (T(1) - ig);
                dpre[1 * H + u] = df * fg * (T(1) - fg);
                dpre[2 * H + u] = do_ * og * (T(1) - og);
                dpre[3 * H + u] = dg * (T(1) - gg * gg);

                dc[u] = dc[u] * fg; // flows to t-1
            }
            std::fill(dh.begin(), dh.end(), T(0));
            for (std::size_t gate = 0; gate < 4; ++gate) {
                const T* wh = m.theta.data() + m.wh_off(gate);
                for (std::size_t u = 0; u < H; ++u) {
                    const T dp = dpre[gate * H + u];
                    if (dp == T(0)) continue;
                    g[m.b_off(gate) + u] += dp;
                    T* gwx = g.data() + m.wx_off(gate) + u * m.dim;
                    for (std::size_t j = 0; j < m.dim; ++j) gwx[j] += dp * xt[j];
                    if (hprev) {
                        T* gwh = g.data() + m.wh_off(gate) + u * H;
                        for (std::size_t j = 0; j < H; ++j) gwh[j] += dp * hprev[j];
                    }
                    const T* whr = wh + u * H;
                    for (std::size_t j = 0; j < H; ++j) dh[j] += whr[j] * dp;
                }
            }
        }
    }
    loss *= inv_n;

    const T l2t = static_cast<T>(l2);
    T reg = T(0);
    auto add_reg = [&](std::size_t off, std::size_t len) {
        std::span<const T> block(m.theta.data() + off, len);
        reg += squared_norm(block);
        if (grad) {
            std::span<T> g(*grad);
            for (std::size_t i = 0; i < len; ++i) g[off + i] += l2t * block[i];
        }
    };
    for (std::size_t gate = 0; gate < 4; ++gate) {
        add_reg(m.wx_off(gate), H * m.dim);
        add_reg(m.wh_off(gate), H * H);
    }
    add_reg(m.readout_w_off(), m.n_classes * H);
    loss += l2t / T(2) * reg;
    return loss;
}

template <typename T>
LSTMModel<T> train_lstm(const LabeledDataset<T>& ds, const TrainConfig& cfg) {
    ds.validate();
    cfg.validate();
    if (ds.kind != InputKind::sequence) throw_data("LSTM needs sequence inputs");

    LSTMModel<T> model;
    Rng init_rng(derive_seed(cfg.seed, "lstm-init"));
    model.init(ds.seq.front().rows(), ds.seq.front().cols(), cfg.hidden, ds.n_classes,
               ds.multi_label, init_rng);

    std::vector<T> grad(model.param_count());
    Rng order_rng(derive_seed(cfg.seed, "lstm-order"));
    detail::for_each_batch(ds.size(), cfg.epochs, cfg.batch_size, order_rng,
                           [&](std::span<const std::size_t> batch, std::size_t epoch) {
                               std::fill(grad.begin(), grad.end(), T(0));
                               T loss = lstm_batch_loss_grad(model, ds, batch, cfg.l2, &grad);
                               detail::check_finite_loss(static_cast<double>(loss), epoch, "lstm");
                               detail::clip_gradient(std::span<T>(grad), cfg.clip_norm);
                               const T lr = static_cast<T>(cfg.learning_rate);
                               for (std::size_t i = 0; i < grad.size(); ++i) {
                                   model.theta[i] -= lr * grad[i];
                               }
                           });
    return model;
}

} // namespace affect
