#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include "affect/config.hpp"
#include "support/helpers.hpp"

using namespace affect;

namespace {

// minimal on-disk project: embedding + one task + corpus
struct ConfigFixture {
    testsupport::TempDir tmp{"config"};

    std::filesystem::path write_all(bool with_task = true) {
        testsupport::write_file(tmp.path() / "emb.txt", "girl 1 0\nmad 0 1\n");
        testsupport::write_file(tmp.path() / "train.tsv",
                                "ID\tTweet\tAffect Dimension\tIntensity Class\n"
                                "a\tmad day\tanger\t3: high\n");
        testsupport::write_file(tmp.path() / "dev.tsv",
                                "ID\tTweet\tAffect Dimension\tIntensity Class\n"
                                "b\tcalm\tanger\t0: none\n");
        testsupport::write_file(tmp.path() / "test.tsv",
                                "ID\tTweet\tAffect Dimension\tIntensity Class\n"
                                "c\tfury\tanger\t2: moderate\n");
        testsupport::write_file(tmp.path() / "cats.tsv",
                                "ID\tTweet\tCategory\nc1\tmad girl\tSexual harassment\n");
        nlohmann::json j = {
            {"seed", 9},
            {"output_dir", "out"},
            {"embedding", {{"dim", 2}, {"oov_mode", "mean_chars"}}},
            {"embeddings", {{"tiny", "emb.txt"}}},
            {"preprocess", {{"max_len", 10}}},
            {"category_corpus", "cats.tsv"},
            {"grid", {{"families", {"nb", "mlp"}}, {"embeddings", {"tiny"}}}},
            {"train",
             {{"default", {{"epochs", 7}, {"learning_rate", 0.5}}},
              {"mlp", {{"hidden", 3}, {"epochs", 9}}}}},
            {"multilabel_metric", "subset"},
            {"lda", {{"topics", 2}, {"iterations", 5}, {"top_k", 1}}},
        };
        if (with_task) {
            j["tasks"] = {{"EI-oc:anger",
                           {{"train", "train.tsv"}, {"validation", "dev.tsv"}, {"test", "test.tsv"}}}};
        }
        auto path = tmp.path() / "config.json";
        testsupport::write_file(path, j.dump(2));
        return path;
    }
};

} // namespace

TEST_CASE("config loads with per-family training overrides") {
    ConfigFixture fx;
    auto cfg = load_run_config(fx.write_all());
    CHECK(cfg.seed == 9);
    CHECK(cfg.embedding_dim == 2);
    CHECK(cfg.oov_mode == OovMode::mean_chars);
    CHECK(cfg.preprocess.max_len == 10);
    CHECK(cfg.multilabel_metric == MultilabelMetric::subset);
    CHECK(cfg.grid_families == std::vector<std::string>{"nb", "mlp"});

    // "default" block merges under the family block
    const auto& mlp = cfg.train_configs.at("mlp");
    CHECK(mlp.epochs == 9);
    CHECK(mlp.hidden == 3);
    CHECK(mlp.learning_rate == 0.5);
    const auto& nb = cfg.train_configs.at("nb");
    CHECK(nb.epochs == 7);
    CHECK(nb.learning_rate == 0.5);
    // families keep their own defaults where not overridden
    const auto& lstm = cfg.train_configs.at("lstm");
    CHECK(lstm.clip_norm.has_value());
    CHECK(lstm.epochs == 7); // default block still applies

    CHECK(cfg.lda.topics == 2);
    CHECK(cfg.lda.iterations == 5);

    // paths resolve relative to the config file
    CHECK(std::filesystem::exists(cfg.embeddings.at("tiny")));
    CHECK(cfg.tasks.count("EI-oc:anger") == 1);
}

TEST_CASE("validate_config passes when files exist and fails when they vanish") {
    ConfigFixture fx;
    auto cfg = load_run_config(fx.write_all());
    validate_config(cfg, CommandScope::all);

    std::filesystem::remove(fx.tmp.path() / "emb.txt");
    try {
        validate_config(cfg, CommandScope::grid);
        FAIL("expected a config error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::config);
        CHECK(std::string(e.what()).find("emb.txt") != std::string::npos);
    }
}

TEST_CASE("scope-sensitive validation: topics does not need embeddings") {
    ConfigFixture fx;
    auto cfg = load_run_config(fx.write_all());
    std::filesystem::remove(fx.tmp.path() / "emb.txt");
    validate_config(cfg, CommandScope::topics); // only the corpus matters here
}

TEST_CASE("malformed config files raise config errors") {
    testsupport::TempDir tmp("badcfg");
    auto path = tmp.path() / "broken.json";
    testsupport::write_file(path, "{ not json");
    CHECK_THROWS_AS(load_run_config(path), Error);

    auto unknown_task = tmp.path() / "task.json";
    testsupport::write_file(unknown_task,
                            R"({"tasks": {"bogus": {"train": "a", "validation": "b", "test": "c"}}})");
    CHECK_THROWS_AS(load_run_config(unknown_task), Error);

    auto bad_family = tmp.path() / "family.json";
    testsupport::write_file(bad_family, R"({"grid": {"families": ["quantum"]}})");
    CHECK_THROWS_AS(load_run_config(bad_family), Error);

    CHECK_THROWS_AS(load_run_config(tmp.path() / "missing.json"), Error);
}

TEST_CASE("grid seeds derive from the global seed and cell names") {
    auto s1 = derive_seed(9, "EI-oc:anger|mlp|tiny");
    auto s2 = derive_seed(9, "EI-oc:anger|nb|tiny");
    auto s3 = derive_seed(10, "EI-oc:anger|mlp|tiny");
    CHECK(s1 != s2);
    CHECK(s1 != s3);
    CHECK(s1 == derive_seed(9, "EI-oc:anger|mlp|tiny"));
}

TEST_CASE("task ids parse into task specs") {
    auto anger = TaskSpec::from_id("EI-oc:anger");
    CHECK(anger.kind == TaskKind::intensity);
    CHECK(anger.n_classes == 4);
    CHECK_FALSE(anger.multi_label);

    auto ec = TaskSpec::from_id("E-c");
    CHECK(ec.multi_label);
    CHECK(ec.n_classes == 11);

    auto voc = TaskSpec::from_id("V-oc");
    CHECK(voc.n_classes == 7);

    CHECK_THROWS_AS(TaskSpec::from_id("EI-oc:confusion"), Error);
    CHECK_THROWS_AS(TaskSpec::from_id("nope"), Error);
}
