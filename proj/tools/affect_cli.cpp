// Command-line surface for the affect analysis pipeline: train, grid,
// profile, topics, predict, validate-config. One JSON config file drives all
// commands; flags override config keys. Exit codes: 0 success, 2 config
// error, 3 data error, 4 training error.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "affect/config.hpp"
#include "affect/profile.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitTrain = 4;

int exit_code_for(affect::ErrorCategory c) {
    switch (c) {
        case affect::ErrorCategory::config: return kExitConfig;
        case affect::ErrorCategory::data: return kExitData;
        case affect::ErrorCategory::train: return kExitTrain;
    }
    return 1;
}

// Timestamped line log; never interleaved into report outputs.
class RunLog {
public:
    void open(const fs::path& dir, const std::string& command) {
        fs::create_directories(dir);
        out_.open(dir / (command + ".log"), std::ios::app);
    }

    void line(const std::string& msg) {
        if (out_) {
            auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
            char stamp[32];
            std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%S", std::gmtime(&now));
            out_ << stamp << " " << msg << '\n';
            out_.flush();
        }
        std::cerr << msg << '\n';
    }

private:
    std::ofstream out_;
};

std::string sanitize(const std::string& id) {
    std::string out = id;
    for (char& c : out) {
        if (c == ':' || c == '/' || c == ' ') c = '_';
    }
    return out;
}

void require_writable(const fs::path& p, bool force) {
    if (fs::exists(p) && !force) {
        affect::throw_config("output '" + p.string() + "' already exists (use --force to overwrite)");
    }
}

void write_text(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) affect::throw_data("cannot write '" + p.string() + "'");
    out << content;
}

struct LoadedEmbeddings {
    std::map<std::string, affect::EmbeddingTable> tables;

    const affect::EmbeddingTable& get(const std::string& name) const {
        auto it = tables.find(name);
        if (it == tables.end()) {
            affect::throw_config("no embedding table loaded for provenance '" + name + "'");
        }
        return it->second;
    }

    affect::EmbeddingLookup lookup() const {
        affect::EmbeddingLookup l;
        for (const auto& [name, table] : tables) l[name] = &table;
        return l;
    }
};

LoadedEmbeddings load_embeddings(const affect::RunConfig& cfg,
                                 const std::vector<std::string>& names, RunLog& log) {
    LoadedEmbeddings loaded;
    for (const auto& name : names) {
        auto it = cfg.embeddings.find(name);
        if (it == cfg.embeddings.end()) {
            affect::throw_config("embedding '" + name + "' is not configured");
        }
        log.line("loading embedding '" + name + "' from " + it->second.string());
        affect::EmbeddingTable table =
            affect::EmbeddingTable::load(it->second.string(), cfg.embedding_dim, name);
        log.line("  " + std::to_string(table.size()) + " entries, dim " +
                 std::to_string(table.dim()));
        loaded.tables.emplace(name, std::move(table));
    }
    return loaded;
}

affect::CorpusSplit parse_split(const affect::TaskSpec& task, const fs::path& path,
                                affect::SplitRole role) {
    if (task.multi_label) return affect::parse_ec_file(path.string(), role);
    return affect::parse_ei_file(path.string(), task.dimension, role);
}

struct SplitSet {
    affect::CorpusSplit train, validation, test;
};

SplitSet load_splits(const affect::RunConfig& cfg, const std::string& task_id) {
    auto it = cfg.tasks.find(task_id);
    if (it == cfg.tasks.end()) {
        affect::throw_config("task '" + task_id + "' is not configured");
    }
    affect::TaskSpec task = affect::TaskSpec::from_id(task_id);
    SplitSet s;
    s.train = parse_split(task, it->second.train, affect::SplitRole::train);
    s.validation = parse_split(task, it->second.validation, affect::SplitRole::validation);
    s.test = parse_split(task, it->second.test, affect::SplitRole::test);
    return s;
}

double score_on_split(const affect::ModelArtifact& artifact, const affect::CorpusSplit& split,
                      const affect::RunConfig& cfg, const affect::EmbeddingTable& table) {
    auto seq = affect::encode_split<float>(split, cfg.preprocess, table,
                                           affect::InputKind::sequence, cfg.oov_mode);
    auto flat = affect::to_flat(seq);
    return affect::detail::score_artifact(artifact, seq, flat, cfg.multilabel_metric);
}

// ---- commands ----

int cmd_train(const affect::RunConfig& cfg, const std::string& task_id, const std::string& family,
              const std::string& embedding, bool force) {
    affect::validate_config(cfg, affect::CommandScope::train);
    affect::TaskSpec task = affect::TaskSpec::from_id(task_id);
    affect::Family fam = affect::family_from_string(family);

    const fs::path out_root = cfg.resolved_output_dir();
    RunLog log;
    log.open(out_root / "logs", "train");

    const fs::path model_dir = out_root / "models";
    const fs::path model_path =
        model_dir / (sanitize(task_id) + "__" + family + "__" + embedding + ".model");
    require_writable(model_path, force);

    SplitSet splits = load_splits(cfg, task_id);
    LoadedEmbeddings emb = load_embeddings(cfg, {embedding}, log);
    const affect::EmbeddingTable& table = emb.get(embedding);

    affect::GridRunConfig grc = cfg.grid_run_config();
    affect::TrainConfig tc = grc.config_for(fam);
    tc.seed = affect::derive_seed(cfg.seed, task_id + "|" + family + "|" + embedding);

    log.line("training " + family + " on " + task_id + " with " + embedding);
    auto train_ds = affect::encode_split<float>(
        splits.train, cfg.preprocess, table,
        affect::uses_sequence_input(fam) ? affect::InputKind::sequence : affect::InputKind::flat,
        cfg.oov_mode);
    affect::ModelArtifact artifact = affect::train_model(fam, train_ds, tc, task, embedding,
                                                         table.dim(), cfg.preprocess.max_len);

    double train_acc = score_on_split(artifact, splits.train, cfg, table);
    double val_acc = score_on_split(artifact, splits.validation, cfg, table);

    fs::create_directories(model_dir);
    affect::save_model(artifact, model_path.string());
    log.line("saved model to " + model_path.string());

    std::cout << "task=" << task_id << " family=" << family << " embedding=" << embedding
              << " train_accuracy=" << affect::detail::format_accuracy(train_acc)
              << " val_accuracy=" << affect::detail::format_accuracy(val_acc) << '\n';
    std::cout << "model=" << model_path.string() << '\n';
    return kExitOk;
}

int cmd_grid(const affect::RunConfig& cfg, std::vector<std::string> task_ids, bool force) {
    affect::validate_config(cfg, affect::CommandScope::grid);
    if (task_ids.empty()) {
        for (const auto& [id, paths] : cfg.tasks) task_ids.push_back(id);
    }
    if (task_ids.empty()) affect::throw_config("no tasks configured for the grid");

    const fs::path out_root = cfg.resolved_output_dir();
    const fs::path grids_dir = out_root / "grids";
    for (const auto& id : task_ids) {
        require_writable(grids_dir / sanitize(id) / "grid.csv", force);
    }

    RunLog log;
    log.open(out_root / "logs", "grid");

    LoadedEmbeddings emb = load_embeddings(cfg, cfg.grid_embeddings, log);
    std::vector<std::pair<std::string, const affect::EmbeddingTable*>> tables;
    for (const auto& name : cfg.grid_embeddings) tables.emplace_back(name, &emb.get(name));

    std::vector<affect::Family> families;
    for (const auto& f : cfg.grid_families) families.push_back(affect::family_from_string(f));

    affect::GridRunConfig grc = cfg.grid_run_config();

    std::vector<affect::GridResult> results;
    bool any_cell_ok = false;
    for (const auto& task_id : task_ids) {
        affect::TaskSpec task = affect::TaskSpec::from_id(task_id);
        log.line("grid for " + task_id + ": " + std::to_string(families.size()) + " families x " +
                 std::to_string(tables.size()) + " embeddings");
        SplitSet splits = load_splits(cfg, task_id);

        affect::GridResult grid = affect::run_grid(task, splits.train, splits.validation,
                                                   splits.test, tables, families, grc);

        const fs::path task_dir = grids_dir / sanitize(task_id);
        fs::create_directories(task_dir);
        write_text(task_dir / "grid.csv", affect::render_grid_csv(grid));
        write_text(task_dir / "cells.csv", affect::render_grid_cells_csv(grid));

        for (const auto& cell : grid.cells) {
            if (cell.ok) any_cell_ok = true;
            if (!cell.ok) log.line("  cell failed: " + cell.error);
        }

        try {
            affect::Selection sel = affect::select_best(grid);
            // retrain the winning cell with its derived seed; cheaper than
            // holding every candidate artifact through the grid
            const fs::path winner_path = task_dir / "winner.model";
            {
                affect::Family fam = affect::family_from_string(sel.family);
                affect::TrainConfig tc = grc.config_for(fam);
                tc.seed = affect::derive_seed(cfg.seed,
                                              task.id + "|" + sel.family + "|" + sel.embedding);
                const affect::EmbeddingTable& table = emb.get(sel.embedding);
                auto train_ds = affect::encode_split<float>(
                    splits.train, cfg.preprocess, table,
                    affect::uses_sequence_input(fam) ? affect::InputKind::sequence
                                                     : affect::InputKind::flat,
                    cfg.oov_mode);
                affect::ModelArtifact winner =
                    affect::train_model(fam, train_ds, tc, task, sel.embedding, table.dim(),
                                        cfg.preprocess.max_len);
                affect::save_model(winner, winner_path.string());
            }
            // model path relative to the output root so output trees are
            // byte-identical regardless of where they land
            json sel_json = {
                {"task", sel.task_id},
                {"family", sel.family},
                {"embedding", sel.embedding},
                {"val_accuracy", sel.val_accuracy},
                {"test_accuracy", sel.test_accuracy},
                {"model", ("grids" / fs::path(sanitize(task_id)) / "winner.model").string()},
            };
            write_text(task_dir / "selection.json", sel_json.dump(2) + "\n");
            log.line("  winner: " + sel.family + " + " + sel.embedding + " (val " +
                     affect::detail::format_accuracy(sel.val_accuracy) + ", test " +
                     affect::detail::format_accuracy(sel.test_accuracy) + ")");
        } catch (const affect::Error& e) {
            log.line(std::string("  no selection: ") + e.what());
        }
        results.push_back(std::move(grid));
    }

    write_text(grids_dir / "report.md", affect::render_combined_report(results));
    if (!any_cell_ok) affect::throw_data("every grid cell failed");
    std::cout << "grid reports written to " << grids_dir.string() << '\n';
    return kExitOk;
}

affect::ModelArtifact load_profile_model(const affect::RunConfig& cfg, const std::string& task_id,
                                         std::vector<std::string>& missing) {
    auto it = cfg.profile_model_overrides.find(task_id);
    fs::path path;
    if (it != cfg.profile_model_overrides.end()) {
        path = it->second;
    } else {
        const fs::path sel_path =
            cfg.resolved_output_dir() / "grids" / sanitize(task_id) / "selection.json";
        if (!fs::exists(sel_path)) {
            missing.push_back(task_id);
            return {};
        }
        std::ifstream in(sel_path);
        json sel;
        in >> sel;
        path = fs::path(sel.at("model").get<std::string>());
        if (path.is_relative()) path = cfg.resolved_output_dir() / path;
    }
    if (!fs::exists(path)) {
        missing.push_back(task_id);
        return {};
    }
    return affect::load_model(path.string());
}

int cmd_profile(const affect::RunConfig& cfg, bool include_information_threat, bool force) {
    affect::validate_config(cfg, affect::CommandScope::profile);
    const fs::path out_root = cfg.resolved_output_dir();
    const fs::path profile_dir = out_root / "profiles";
    require_writable(profile_dir / "profile.md", force);

    RunLog log;
    log.open(out_root / "logs", "profile");

    std::vector<std::string> missing;
    std::vector<affect::ModelArtifact> intensity_models(4);
    for (std::size_t d = 0; d < affect::kIntensityDimensions.size(); ++d) {
        intensity_models[d] = load_profile_model(
            cfg, "EI-oc:" + std::string(affect::kIntensityDimensions[d]), missing);
    }
    affect::ModelArtifact emotion_model = load_profile_model(cfg, "E-c", missing);
    if (!missing.empty()) {
        std::string list;
        for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
        affect::throw_config("missing models for: " + list +
                             " (run the grid first or set profile.models)");
    }

    std::optional<affect::ModelArtifact> valence_model;
    if (cfg.profile_model_overrides.count("V-oc") ||
        fs::exists(out_root / "grids" / sanitize("V-oc") / "selection.json")) {
        std::vector<std::string> v_missing;
        affect::ModelArtifact m = load_profile_model(cfg, "V-oc", v_missing);
        if (v_missing.empty()) valence_model = std::move(m);
    }

    // load every distinct embedding provenance the models reference
    std::vector<std::string> provenances;
    auto add_provenance = [&](const std::string& name) {
        if (std::find(provenances.begin(), provenances.end(), name) == provenances.end()) {
            provenances.push_back(name);
        }
    };
    for (const auto& m : intensity_models) add_provenance(m.embedding_name);
    add_provenance(emotion_model.embedding_name);
    if (valence_model) add_provenance(valence_model->embedding_name);
    LoadedEmbeddings emb = load_embeddings(cfg, provenances, log);

    affect::CategoryCorpus corpus = affect::parse_category_file(cfg.category_corpus->string());
    if (!include_information_threat) {
        log.line("information threat category (" +
                 std::to_string(corpus.size(affect::SexismCategory::information_threat)) +
                 " tweets) skipped; pass --include-information-threat to include it");
    }

    affect::ProfileModels models;
    for (std::size_t d = 0; d < 4; ++d) models.intensity[d] = &intensity_models[d];
    models.emotion = &emotion_model;
    if (valence_model) models.valence = &*valence_model;

    affect::ProfileReport report =
        affect::profile_corpus(corpus, models, emb.lookup(), cfg.preprocess, cfg.oov_mode,
                               include_information_threat);

    fs::create_directories(profile_dir);
    write_text(profile_dir / "profile.md", affect::render_report_markdown(report));
    write_text(profile_dir / "profile.csv", affect::render_report_csv(report));
    std::cout << "profile reports written to " << profile_dir.string() << '\n';
    return kExitOk;
}

int cmd_topics(const affect::RunConfig& cfg, bool include_information_threat, bool force) {
    affect::validate_config(cfg, affect::CommandScope::topics);
    const fs::path out_root = cfg.resolved_output_dir();
    const fs::path topics_dir = out_root / "topics";
    require_writable(topics_dir / "topics.md", force);

    RunLog log;
    log.open(out_root / "logs", "topics");

    affect::CategoryCorpus corpus = affect::parse_category_file(cfg.category_corpus->string());
    for (std::size_t c = 0; c < affect::kCategoryNames.size(); ++c) {
        if (corpus.by_category[c].empty()) {
            log.line("warning: category '" + std::string(affect::kCategoryNames[c]) +
                     "' is empty");
        }
    }

    std::vector<affect::CategoryTopics> tables =
        affect::category_topics(corpus, cfg.preprocess, cfg.lda, include_information_threat);
    if (tables.empty()) affect::throw_data("no category produced any topics");

    fs::create_directories(topics_dir);
    write_text(topics_dir / "topics.md", affect::render_topics_markdown(tables));
    write_text(topics_dir / "topics.csv", affect::render_topics_csv(tables));
    std::cout << "topic tables written to " << topics_dir.string() << '\n';
    return kExitOk;
}

int cmd_predict(const affect::RunConfig& cfg, const std::string& model_path,
                const std::string& text) {
    affect::ModelArtifact artifact = affect::load_model(model_path);
    auto it = cfg.embeddings.find(artifact.embedding_name);
    if (it == cfg.embeddings.end()) {
        affect::throw_config("model references embedding '" + artifact.embedding_name +
                             "' which is not configured");
    }
    affect::EmbeddingTable table =
        affect::EmbeddingTable::load(it->second.string(), cfg.embedding_dim,
                                     artifact.embedding_name);

    affect::TokenSequence seq = affect::preprocess(text, cfg.preprocess);
    affect::Matrix<float> m =
        affect::encode_sequence<float>(table, seq, cfg.preprocess.pad_token, cfg.oov_mode);
    std::vector<float> flat = affect::flatten(m);

    affect::TaskSpec task = affect::TaskSpec::from_id(artifact.task_id);
    if (!artifact.multi_label) {
        std::size_t klass = artifact.predict_class(flat, m);
        int shown = static_cast<int>(klass) - (task.kind == affect::TaskKind::valence ? 3 : 0);
        std::cout << shown << '\n';
        return kExitOk;
    }
    std::vector<std::uint8_t> bits = artifact.predict_labels(flat, m);
    bool first = true;
    for (std::size_t k = 0; k < bits.size(); ++k) {
        if (!bits[k]) continue;
        std::cout << (first ? "" : " ") << affect::kEmotionNames[k];
        first = false;
    }
    if (first) std::cout << "(none)";
    std::cout << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Affect analysis pipeline: emotion intensity and emotion type classification, "
                 "category profiling and topic extraction"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("-c,--config", config_path, "JSON configuration file")->required();

    std::string task_id, family, embedding, model_path, text;
    std::vector<std::string> grid_tasks;
    bool force = false;
    bool include_information_threat = false;
    std::string output_dir_override;

    auto add_common = [&](CLI::App* sub) {
        sub->fallthrough();
        sub->add_flag("--force", force, "overwrite existing outputs");
        sub->add_option("--output-dir", output_dir_override, "override the configured output dir");
    };

    CLI::App* train = app.add_subcommand("train", "train one (task, family, embedding) model");
    train->add_option("--task", task_id, "task id, e.g. EI-oc:anger, E-c, V-oc")->required();
    train->add_option("--family", family, "classifier family")->required();
    train->add_option("--embedding", embedding, "embedding provenance name")->required();
    add_common(train);

    CLI::App* grid = app.add_subcommand("grid", "run the (embedding x family) selection grid");
    grid->add_option("--task", grid_tasks, "task id (repeatable; default: all configured)");
    add_common(grid);

    CLI::App* profile = app.add_subcommand("profile", "profile the category corpus with selected models");
    profile->add_flag("--include-information-threat", include_information_threat,
                      "profile the information threat category too");
    add_common(profile);

    CLI::App* topics = app.add_subcommand("topics", "extract per-category LDA topics");
    topics->add_flag("--include-information-threat", include_information_threat,
                     "model the information threat category too");
    add_common(topics);

    CLI::App* predict = app.add_subcommand("predict", "classify one raw text with a saved model");
    predict->fallthrough();
    predict->add_option("--model", model_path, "model artifact path")->required();
    predict->add_option("--text", text, "raw tweet text")->required();

    CLI::App* validate = app.add_subcommand("validate-config", "check the config and referenced files");
    validate->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        affect::RunConfig cfg = affect::load_run_config(config_path);
        if (!output_dir_override.empty()) {
            cfg.output_dir = output_dir_override;
            cfg.output_dir_overridden = true;
        }

        if (train->parsed()) return cmd_train(cfg, task_id, family, embedding, force);
        if (grid->parsed()) return cmd_grid(cfg, grid_tasks, force);
        if (profile->parsed()) return cmd_profile(cfg, include_information_threat, force);
        if (topics->parsed()) return cmd_topics(cfg, include_information_threat, force);
        if (predict->parsed()) return cmd_predict(cfg, model_path, text);
        if (validate->parsed()) {
            affect::validate_config(cfg, affect::CommandScope::all);
            std::cout << "config ok\n";
            return kExitOk;
        }
    } catch (const affect::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << '\n';
        return 1;
    }
    return kExitConfig;
}
