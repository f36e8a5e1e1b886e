#include <catch2/catch_amalgamated.hpp>

#include "affect/models/gradient_check.hpp"
#include "affect/models/linear.hpp"
#include "affect/models/lstm.hpp"
#include "support/helpers.hpp"

using namespace affect;

TEST_CASE("zero weights keep the hidden state at zero for any input") {
    LSTMModel<double> m;
    Rng init(1);
    m.init(5, 3, 4, 2, false, init);
    std::fill(m.theta.begin(), m.theta.end(), 0.0);

    Rng rng(2);
    auto x = testsupport::random_matrix<double>(5, 3, rng);
    auto h = m.final_hidden(x);
    for (double v : h) CHECK(v == 0.0);
}

TEST_CASE("LSTM gradient matches central differences (H=6)") {
    Rng rng(41);
    LabeledDataset<double> ds;
    ds.kind = InputKind::sequence;
    ds.n_classes = 2;
    for (int i = 0; i < 2; ++i) {
        ds.add_sequence(testsupport::random_matrix<double>(6, 4, rng), one_hot(std::size_t(i), 2));
    }
    LSTMModel<double> m;
    Rng init(7);
    m.init(6, 4, 6, 2, false, init);

    std::vector<std::size_t> indices = {0, 1};
    std::vector<double> grad(m.param_count(), 0.0);
    lstm_batch_loss_grad(m, ds, std::span<const std::size_t>(indices), 1e-3, &grad);
    auto loss = [&]() {
        return lstm_batch_loss_grad(m, ds, std::span<const std::size_t>(indices), 1e-3);
    };
    double err = gradient_check<double>(m.theta, std::span<const double>(grad), loss, 1e-5);
    CHECK(err < 1e-3);
}

TEST_CASE("LSTM multi-label gradient matches central differences") {
    Rng rng(43);
    LabeledDataset<double> ds;
    ds.kind = InputKind::sequence;
    ds.n_classes = 3;
    ds.multi_label = true;
    for (int i = 0; i < 2; ++i) {
        std::vector<std::uint8_t> bits(3);
        for (auto& b : bits) b = rng.next_below(2) ? 1 : 0;
        ds.add_sequence(testsupport::random_matrix<double>(5, 3, rng), bits);
    }
    LSTMModel<double> m;
    Rng init(17);
    m.init(5, 3, 4, 3, true, init);

    std::vector<std::size_t> indices = {0, 1};
    std::vector<double> grad(m.param_count(), 0.0);
    lstm_batch_loss_grad(m, ds, std::span<const std::size_t>(indices), 1e-4, &grad);
    auto loss = [&]() {
        return lstm_batch_loss_grad(m, ds, std::span<const std::size_t>(indices), 1e-4);
    };
    double err = gradient_check<double>(m.theta, std::span<const double>(grad), loss, 1e-5);
    CHECK(err < 1e-3);
}

TEST_CASE("LSTM learns token order where a bag model stays at chance") {
    // label = which of the two marker tokens comes first; the token multiset
    // is identical across classes, so an order-blind model cannot separate.
    const std::size_t len = 8, dim = 6;
    Rng rng(55);
    std::vector<float> marker_a = testsupport::random_vector(dim, rng);
    std::vector<float> marker_b = testsupport::random_vector(dim, rng);
    std::vector<float> filler = testsupport::random_vector(dim, rng, -0.1, 0.1);

    auto build = [&](bool a_first, Rng& r) {
        Matrix<float> m(len, dim, 0.f);
        std::size_t pos1 = r.next_below(3);           // 0..2
        std::size_t pos2 = 4 + r.next_below(3);       // 4..6
        const auto& first = a_first ? marker_a : marker_b;
        const auto& second = a_first ? marker_b : marker_a;
        for (std::size_t t = 0; t < len; ++t) {
            const std::vector<float>* src = &filler;
            if (t == pos1) src = &first;
            if (t == pos2) src = &second;
            for (std::size_t j = 0; j < dim; ++j) m(t, j) = (*src)[j];
        }
        return m;
    };

    LabeledDataset<float> ds;
    ds.kind = InputKind::sequence;
    ds.n_classes = 2;
    Rng gen(66);
    for (int i = 0; i < 40; ++i) {
        bool a_first = i % 2 == 0;
        ds.add_sequence(build(a_first, gen), one_hot(a_first ? 0 : 1, 2));
    }

    TrainConfig cfg = TrainConfig::default_for(Family::lstm);
    cfg.hidden = 12;
    cfg.epochs = 400;
    cfg.learning_rate = 0.05;
    cfg.seed = 9;
    auto model = train_lstm(ds, cfg);

    std::size_t hits = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        auto p = model.predict_proba(ds.seq[i]);
        std::vector<double> d(p.begin(), p.end());
        hits += argmax_lowest_tie(std::span<const double>(d)) == ds.label_index(i) ? 1 : 0;
    }
    CHECK(double(hits) / double(ds.size()) > 0.95);

    // order-blind control: linear hinge on the mean embedding
    LabeledDataset<float> bag;
    bag.kind = InputKind::flat;
    bag.n_classes = 2;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        std::vector<float> mean(dim, 0.f);
        for (std::size_t t = 0; t < len; ++t) {
            for (std::size_t j = 0; j < dim; ++j) mean[j] += ds.seq[i](t, j);
        }
        for (auto& v : mean) v /= float(len);
        bag.add_flat(mean, ds.labels[i]);
    }
    TrainConfig bag_cfg;
    bag_cfg.epochs = 200;
    bag_cfg.seed = 10;
    auto bag_model = train_ovr_linear(bag, bag_cfg);
    std::size_t bag_hits = 0;
    for (std::size_t i = 0; i < bag.size(); ++i) {
        bag_hits += predict_linear_class(bag_model, std::span<const float>(bag.flat[i])) ==
                            bag.label_index(i)
                        ? 1
                        : 0;
    }
    double bag_acc = double(bag_hits) / double(bag.size());
    CHECK(bag_acc < 0.7); // chance-level on an order-only task
}

TEST_CASE("LSTM training is deterministic in the seed") {
    Rng rng(71);
    LabeledDataset<float> ds;
    ds.kind = InputKind::sequence;
    ds.n_classes = 2;
    for (int i = 0; i < 6; ++i) {
        ds.add_sequence(testsupport::random_matrix<float>(5, 3, rng), one_hot(std::size_t(i) % 2, 2));
    }
    TrainConfig cfg = TrainConfig::default_for(Family::lstm);
    cfg.hidden = 4;
    cfg.epochs = 15;
    cfg.seed = 2;
    auto a = train_lstm(ds, cfg);
    auto b = train_lstm(ds, cfg);
    CHECK(a.theta == b.theta);
}

TEST_CASE("LSTM probabilities satisfy the head contracts") {
    LSTMModel<float> m;
    Rng init(3);
    m.init(4, 3, 5, 3, false, init);
    Rng rng(4);
    for (int iter = 0; iter < 10; ++iter) {
        auto x = testsupport::random_matrix<float>(4, 3, rng);
        auto p = m.predict_proba(x);
        double sum = 0;
        for (float v : p) sum += v;
        CHECK(std::abs(sum - 1.0) < 1e-6);
    }
}
