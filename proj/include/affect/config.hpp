#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "affect/eval.hpp"
#include "affect/preprocess.hpp"
#include "affect/topics.hpp"

namespace affect {

// One JSON configuration file drives every command; flags override keys.
// The global seed derives every per-cell seed (see derive_seed).
struct RunConfig {
    std::uint64_t seed = 0;
    std::filesystem::path output_dir = "out";
    bool output_dir_overridden = false; // set by the CLI flag; beats the env var

    std::size_t embedding_dim = 300;
    OovMode oov_mode = OovMode::truncate_concat;
    std::map<std::string, std::filesystem::path> embeddings; // provenance name -> file

    PreprocessConfig preprocess;
    std::optional<std::filesystem::path> lemma_exceptions_path;

    struct TaskPaths {
        std::filesystem::path train;
        std::filesystem::path validation;
        std::filesystem::path test;
    };
    std::map<std::string, TaskPaths> tasks; // keyed by task id

    std::optional<std::filesystem::path> category_corpus;

    std::vector<std::string> grid_families = {"ovr", "svm", "nb", "knn", "mlp", "lstm", "cnn"};
    std::vector<std::string> grid_embeddings; // defaults to all configured embeddings

    std::map<std::string, TrainConfig> train_configs; // per-family; "default" merges first
    MultilabelMetric multilabel_metric = MultilabelMetric::jaccard;

    bool include_information_threat = false;
    std::map<std::string, std::filesystem::path> profile_model_overrides; // task id -> artifact

    LDAConfig lda;

    std::filesystem::path resolved_output_dir() const {
        if (!output_dir_overridden) {
            if (const char* env = std::getenv("AFFECT_OUTPUT_DIR"); env && *env) {
                return std::filesystem::path(env);
            }
        }
        return output_dir;
    }

    GridRunConfig grid_run_config() const {
        GridRunConfig g;
        g.preprocess = preprocess;
        g.oov_mode = oov_mode;
        g.global_seed = seed;
        g.multilabel_metric = multilabel_metric;
        g.train_configs = train_configs;
        return g;
    }
};

namespace detail {

inline TrainConfig parse_train_config(const nlohmann::json& j, TrainConfig base) {
    if (j.contains("learning_rate")) base.learning_rate = j["learning_rate"].get<double>();
    if (j.contains("epochs")) base.epochs = j["epochs"].get<std::size_t>();
    if (j.contains("l2")) base.l2 = j["l2"].get<double>();
    if (j.contains("batch_size")) base.batch_size = j["batch_size"].get<std::size_t>();
    if (j.contains("clip_norm")) {
        if (j["clip_norm"].is_null()) {
            base.clip_norm.reset();
        } else {
            base.clip_norm = j["clip_norm"].get<double>();
        }
    }
    if (j.contains("hidden")) base.hidden = j["hidden"].get<std::size_t>();
    if (j.contains("filters")) base.filters = j["filters"].get<std::size_t>();
    if (j.contains("filter_widths")) {
        base.filter_widths = j["filter_widths"].get<std::vector<std::size_t>>();
    }
    if (j.contains("dropout")) base.dropout = j["dropout"].get<double>();
    if (j.contains("knn_k")) base.knn_k = j["knn_k"].get<std::size_t>();
    if (j.contains("variance_floor")) base.variance_floor = j["variance_floor"].get<double>();
    return base;
}

} // namespace detail

inline RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw_config("cannot open config file '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw_config("config file '" + path.string() + "': " + e.what());
    }

    RunConfig cfg;
    const std::filesystem::path base = path.has_parent_path() ? path.parent_path() : ".";
    auto resolve = [&](const std::string& p) {
        std::filesystem::path fp(p);
        return fp.is_absolute() ? fp : base / fp;
    };

    try {
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("output_dir")) cfg.output_dir = resolve(j["output_dir"].get<std::string>());

        if (j.contains("embedding")) {
            const auto& je = j["embedding"];
            if (je.contains("dim")) cfg.embedding_dim = je["dim"].get<std::size_t>();
            if (je.contains("oov_mode")) {
                cfg.oov_mode = oov_mode_from_string(je["oov_mode"].get<std::string>());
            }
        }
        if (j.contains("embeddings")) {
            for (const auto& [name, p] : j["embeddings"].items()) {
                cfg.embeddings[name] = resolve(p.get<std::string>());
            }
        }

        if (j.contains("preprocess")) {
            const auto& jp = j["preprocess"];
            if (jp.contains("max_len")) cfg.preprocess.max_len = jp["max_len"].get<std::size_t>();
            if (jp.contains("lemma_exceptions")) {
                cfg.lemma_exceptions_path = resolve(jp["lemma_exceptions"].get<std::string>());
            }
        }
        if (cfg.preprocess.max_len == 0) throw_config("preprocess.max_len must be at least 1");

        if (j.contains("tasks")) {
            for (const auto& [task_id, jt] : j["tasks"].items()) {
                TaskSpec::from_id(task_id); // validates the id
                RunConfig::TaskPaths tp;
                tp.train = resolve(jt.at("train").get<std::string>());
                tp.validation = resolve(jt.at("validation").get<std::string>());
                tp.test = resolve(jt.at("test").get<std::string>());
                cfg.tasks[task_id] = tp;
            }
        }

        if (j.contains("category_corpus")) {
            cfg.category_corpus = resolve(j["category_corpus"].get<std::string>());
        }

        if (j.contains("grid")) {
            const auto& jg = j["grid"];
            if (jg.contains("families")) {
                cfg.grid_families = jg["families"].get<std::vector<std::string>>();
                for (const auto& f : cfg.grid_families) family_from_string(f);
            }
            if (jg.contains("embeddings")) {
                cfg.grid_embeddings = jg["embeddings"].get<std::vector<std::string>>();
            }
        }
        if (cfg.grid_embeddings.empty()) {
            for (const auto& [name, p] : cfg.embeddings) cfg.grid_embeddings.push_back(name);
        }

        if (j.contains("train")) {
            const bool have_defaults = j["train"].contains("default");
            for (const auto& name : kFamilyNames) {
                std::string fname(name);
                TrainConfig base = TrainConfig::default_for(family_from_string(fname));
                if (have_defaults) {
                    base = detail::parse_train_config(j["train"]["default"], base);
                }
                if (j["train"].contains(fname)) {
                    base = detail::parse_train_config(j["train"][fname], base);
                }
                cfg.train_configs[fname] = base;
            }
        }

        if (j.contains("multilabel_metric")) {
            cfg.multilabel_metric =
                multilabel_metric_from_string(j["multilabel_metric"].get<std::string>());
        }

        if (j.contains("profile")) {
            const auto& jp = j["profile"];
            if (jp.contains("include_information_threat")) {
                cfg.include_information_threat = jp["include_information_threat"].get<bool>();
            }
            if (jp.contains("models")) {
                for (const auto& [task_id, p] : jp["models"].items()) {
                    cfg.profile_model_overrides[task_id] = resolve(p.get<std::string>());
                }
            }
        }

        if (j.contains("lda")) {
            const auto& jl = j["lda"];
            if (jl.contains("topics")) cfg.lda.topics = jl["topics"].get<std::size_t>();
            if (jl.contains("alpha")) cfg.lda.alpha = jl["alpha"].get<double>();
            if (jl.contains("beta")) cfg.lda.beta = jl["beta"].get<double>();
            if (jl.contains("iterations")) cfg.lda.iterations = jl["iterations"].get<std::size_t>();
            if (jl.contains("top_k")) cfg.lda.top_k = jl["top_k"].get<std::size_t>();
            if (jl.contains("stopwords")) {
                for (const auto& w : jl["stopwords"]) cfg.lda.stopwords.insert(w.get<std::string>());
            }
        }
        cfg.lda.seed = derive_seed(cfg.seed, "lda");
    } catch (const nlohmann::json::exception& e) {
        throw_config("config file '" + path.string() + "': " + e.what());
    }

    if (cfg.lemma_exceptions_path) {
        cfg.preprocess.load_lemma_exceptions(cfg.lemma_exceptions_path->string());
    }
    return cfg;
}

// Path validation happens before any output is written (validation-first).
enum class CommandScope { train, grid, profile, topics, predict, all };

inline void validate_config(const RunConfig& cfg, CommandScope scope) {
    namespace fs = std::filesystem;
    auto require = [](const fs::path& p, const std::string& what) {
        if (!fs::exists(p)) throw_config("missing " + what + ": '" + p.string() + "'");
    };

    const bool needs_tasks = scope == CommandScope::train || scope == CommandScope::grid ||
                             scope == CommandScope::all;
    const bool needs_embeddings = scope != CommandScope::topics;
    const bool needs_corpus = scope == CommandScope::profile || scope == CommandScope::topics ||
                              scope == CommandScope::all;

    if (needs_embeddings) {
        if (cfg.embeddings.empty() && scope != CommandScope::predict) {
            throw_config("no embedding files configured");
        }
        for (const auto& [name, p] : cfg.embeddings) {
            require(p, "embedding file for '" + name + "'");
        }
    }
    if (needs_tasks) {
        if (cfg.tasks.empty()) throw_config("no tasks configured");
        for (const auto& [id, tp] : cfg.tasks) {
            require(tp.train, "train split for " + id);
            require(tp.validation, "validation split for " + id);
            require(tp.test, "test split for " + id);
        }
        for (const auto& name : cfg.grid_embeddings) {
            if (!cfg.embeddings.count(name)) {
                throw_config("grid references unconfigured embedding '" + name + "'");
            }
        }
    }
    if (needs_corpus) {
        if (!cfg.category_corpus) throw_config("no category_corpus configured");
        require(*cfg.category_corpus, "category corpus");
    }
    if (cfg.lemma_exceptions_path) require(*cfg.lemma_exceptions_path, "lemma exception table");
}

} // namespace affect
