#include <catch2/catch_amalgamated.hpp>

#include "affect/models/artifact.hpp"
#include "support/helpers.hpp"

using namespace affect;

namespace {

LabeledDataset<float> flat_fixture(std::size_t n, std::size_t dim, std::size_t k, std::uint64_t seed,
                                   bool multi_label = false) {
    Rng rng(seed);
    LabeledDataset<float> ds;
    ds.kind = InputKind::flat;
    ds.n_classes = k;
    ds.multi_label = multi_label;
    for (std::size_t i = 0; i < n; ++i) {
        auto x = testsupport::random_vector(dim, rng);
        if (multi_label) {
            std::vector<std::uint8_t> bits(k, 0);
            bits[i % k] = 1;
            if (i % 3 == 0) bits[(i + 1) % k] = 1;
            ds.add_flat(x, bits);
        } else {
            ds.add_flat(x, one_hot(i % k, k));
        }
    }
    return ds;
}

LabeledDataset<float> seq_fixture(std::size_t n, std::size_t len, std::size_t dim, std::size_t k,
                                  std::uint64_t seed) {
    Rng rng(seed);
    LabeledDataset<float> ds;
    ds.kind = InputKind::sequence;
    ds.n_classes = k;
    for (std::size_t i = 0; i < n; ++i) {
        ds.add_sequence(testsupport::random_matrix<float>(len, dim, rng), one_hot(i % k, k));
    }
    return ds;
}

TaskSpec anger_task() { return TaskSpec::intensity("anger"); }

void check_roundtrip_predictions(const ModelArtifact& a, const ModelArtifact& b,
                                 const LabeledDataset<float>& flat_ds,
                                 const LabeledDataset<float>& seq_ds) {
    static const Matrix<float> kNoSeq;
    static const std::vector<float> kNoFlat;
    const std::size_t n = a.uses_sequence() ? seq_ds.size() : flat_ds.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (a.uses_sequence()) {
            CHECK(a.predict_class(kNoFlat, seq_ds.seq[i]) == b.predict_class(kNoFlat, seq_ds.seq[i]));
        } else {
            CHECK(a.predict_class(flat_ds.flat[i], kNoSeq) ==
                  b.predict_class(flat_ds.flat[i], kNoSeq));
        }
    }
}

} // namespace

TEST_CASE("save/load round-trip reproduces predictions for every family") {
    testsupport::TempDir tmp("artifact");
    auto flat_ds = flat_fixture(12, 6, 4, 1);
    auto seq_ds = seq_fixture(12, 5, 3, 4, 2);

    TrainConfig cfg;
    cfg.epochs = 10;
    cfg.hidden = 5;
    cfg.filters = 3;
    cfg.filter_widths = {2, 3};
    cfg.seed = 31;

    for (Family family : {Family::ovr, Family::svm, Family::nb, Family::knn, Family::mlp,
                          Family::lstm, Family::cnn}) {
        INFO("family: " << to_string(family));
        const auto& ds = uses_sequence_input(family) ? seq_ds : flat_ds;
        ModelArtifact a = train_model(family, ds, cfg, anger_task(), "fixture", 3, 5);
        auto path = tmp.path() / (std::string(to_string(family)) + ".model");
        save_model(a, path.string());
        ModelArtifact b = load_model(path.string());
        CHECK(b.family == a.family);
        CHECK(b.task_id == "EI-oc:anger");
        CHECK(b.embedding_name == "fixture");
        CHECK(b.n_classes == 4);
        check_roundtrip_predictions(a, b, flat_ds, seq_ds);
    }
}

TEST_CASE("multi-label artifacts round-trip (binary-relevance NB included)") {
    testsupport::TempDir tmp("artifact_ml");
    auto ds = flat_fixture(24, 5, 3, 7, true);
    TrainConfig cfg;
    cfg.epochs = 8;
    cfg.hidden = 4;
    cfg.seed = 3;

    TaskSpec task = TaskSpec::emotion();
    task.n_classes = 3; // reduced fixture width
    for (Family family : {Family::ovr, Family::nb, Family::knn, Family::mlp}) {
        INFO("family: " << to_string(family));
        ModelArtifact a = train_model(family, ds, cfg, task, "fixture", 5, 1);
        auto path = tmp.path() / (std::string(to_string(family)) + "_ml.model");
        save_model(a, path.string());
        ModelArtifact b = load_model(path.string());
        static const Matrix<float> kNoSeq;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            CHECK(a.predict_labels(ds.flat[i], kNoSeq) == b.predict_labels(ds.flat[i], kNoSeq));
        }
    }
}

TEST_CASE("save/load round-trip is byte-stable") {
    testsupport::TempDir tmp("artifact_bytes");
    auto ds = flat_fixture(10, 4, 2, 9);
    TrainConfig cfg;
    cfg.epochs = 5;
    cfg.seed = 17;
    ModelArtifact a = train_model(Family::ovr, ds, cfg, anger_task(), "fixture", 4, 1);
    auto p1 = tmp.path() / "a.model";
    auto p2 = tmp.path() / "b.model";
    save_model(a, p1.string());
    ModelArtifact b = load_model(p1.string());
    save_model(b, p2.string());
    CHECK(testsupport::read_file(p1) == testsupport::read_file(p2));
}

TEST_CASE("loading a non-model file fails with a config error") {
    testsupport::TempDir tmp("artifact_bad");
    auto path = tmp.path() / "junk.model";
    testsupport::write_file(path, "not a model\n");
    CHECK_THROWS_AS(load_model(path.string()), Error);
    CHECK_THROWS_AS(load_model((tmp.path() / "missing.model").string()), Error);
}

TEST_CASE("artifact header carries hyperparameters and provenance") {
    testsupport::TempDir tmp("artifact_meta");
    auto ds = seq_fixture(8, 4, 2, 2, 5);
    TrainConfig cfg;
    cfg.epochs = 3;
    cfg.hidden = 4;
    cfg.seed = 77;
    ModelArtifact a = train_model(Family::lstm, ds, cfg, anger_task(), "glove", 2, 4);
    auto path = tmp.path() / "meta.model";
    save_model(a, path.string());
    ModelArtifact b = load_model(path.string());
    CHECK(b.hyperparams.at("hidden") == "4");
    CHECK(b.hyperparams.at("epochs") == "3");
    CHECK(b.embedding_name == "glove");
    CHECK(b.max_len == 4);
    CHECK(b.dim == 2);
}
