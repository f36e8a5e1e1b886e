#pragma once

#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "affect/models/artifact.hpp"
#include "affect/tasks.hpp"

namespace affect {

// Fraction of exact matches.
inline double accuracy(const std::vector<std::size_t>& preds, const std::vector<std::size_t>& golds) {
    if (preds.size() != golds.size()) throw_data("accuracy: length mismatch");
    if (preds.empty()) throw_data("accuracy: empty input");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) hits += preds[i] == golds[i] ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(preds.size());
}

// Mean per-example |P n G| / |P u G|; both-empty counts as 1.
inline double jaccard_multilabel(const std::vector<std::vector<std::uint8_t>>& preds,
                                 const std::vector<std::vector<std::uint8_t>>& golds) {
    if (preds.size() != golds.size()) throw_data("jaccard: length mismatch");
    if (preds.empty()) throw_data("jaccard: empty input");
    double sum = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i].size() != golds[i].size()) throw_data("jaccard: label width mismatch");
        std::size_t inter = 0, uni = 0;
        for (std::size_t c = 0; c < preds[i].size(); ++c) {
            bool p = preds[i][c] != 0, g = golds[i][c] != 0;
            inter += (p && g) ? 1 : 0;
            uni += (p || g) ? 1 : 0;
        }
        sum += uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
    }
    return sum / static_cast<double>(preds.size());
}

// Fraction of examples whose predicted set equals the gold set exactly.
inline double subset_accuracy(const std::vector<std::vector<std::uint8_t>>& preds,
                              const std::vector<std::vector<std::uint8_t>>& golds) {
    if (preds.size() != golds.size()) throw_data("subset accuracy: length mismatch");
    if (preds.empty()) throw_data("subset accuracy: empty input");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        bool equal = preds[i].size() == golds[i].size();
        for (std::size_t c = 0; equal && c < preds[i].size(); ++c) {
            equal = (preds[i][c] != 0) == (golds[i][c] != 0);
        }
        hits += equal ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(preds.size());
}

enum class MultilabelMetric { jaccard, subset };

inline MultilabelMetric multilabel_metric_from_string(const std::string& s) {
    if (s == "jaccard") return MultilabelMetric::jaccard;
    if (s == "subset") return MultilabelMetric::subset;
    throw_config("unknown multilabel metric '" + s + "' (expected jaccard or subset)");
}

struct GridCell {
    bool ok = false;
    double val_accuracy = 0;
    double test_accuracy = 0;
    // multilabel cells carry both metrics; the selection metric lands in
    // val_accuracy/test_accuracy
    std::optional<double> val_alt;
    std::optional<double> test_alt;
    std::string error;
};

struct GridResult {
    std::string task_id;
    std::vector<std::string> families;    // row order as requested
    std::vector<std::string> embeddings;  // column order as requested
    std::vector<GridCell> cells;          // row-major families x embeddings

    GridCell& cell(std::size_t f, std::size_t e) { return cells[f * embeddings.size() + e]; }
    const GridCell& cell(std::size_t f, std::size_t e) const {
        return cells[f * embeddings.size() + e];
    }
};

struct Selection {
    std::string task_id;
    std::string family;
    std::string embedding;
    double val_accuracy = 0;
    double test_accuracy = 0;
};

struct GridRunConfig {
    PreprocessConfig preprocess;
    OovMode oov_mode = OovMode::truncate_concat;
    std::uint64_t global_seed = 0;
    MultilabelMetric multilabel_metric = MultilabelMetric::jaccard;
    // family name -> training config; families without an entry fall back to
    // TrainConfig::default_for
    std::map<std::string, TrainConfig> train_configs;

    TrainConfig config_for(Family f) const {
        auto it = train_configs.find(std::string(to_string(f)));
        return it != train_configs.end() ? it->second : TrainConfig::default_for(f);
    }
};

namespace detail {

inline double score_artifact(const ModelArtifact& a, const LabeledDataset<float>& seq_ds,
                             const LabeledDataset<float>& flat_ds, MultilabelMetric metric,
                             double* alt = nullptr) {
    const LabeledDataset<float>& ds = a.uses_sequence() ? seq_ds : flat_ds;
    static const Matrix<float> kNoSeq;
    static const std::vector<float> kNoFlat;
    if (!a.multi_label) {
        std::vector<std::size_t> preds, golds;
        preds.reserve(ds.size());
        golds.reserve(ds.size());
        for (std::size_t i = 0; i < ds.size(); ++i) {
            preds.push_back(a.predict_class(a.uses_sequence() ? kNoFlat : flat_ds.flat[i],
                                            a.uses_sequence() ? seq_ds.seq[i] : kNoSeq));
            golds.push_back(ds.label_index(i));
        }
        double acc = accuracy(preds, golds);
        if (alt) *alt = acc;
        return acc;
    }
    std::vector<std::vector<std::uint8_t>> preds;
    preds.reserve(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        preds.push_back(a.predict_labels(a.uses_sequence() ? kNoFlat : flat_ds.flat[i],
                                         a.uses_sequence() ? seq_ds.seq[i] : kNoSeq));
    }
    double jac = jaccard_multilabel(preds, ds.labels);
    double sub = subset_accuracy(preds, ds.labels);
    if (metric == MultilabelMetric::jaccard) {
        if (alt) *alt = sub;
        return jac;
    }
    if (alt) *alt = jac;
    return sub;
}

} // namespace detail

// Trains each (family, embedding) cell on the train split, scores validation
// and test. A failing cell records its error and does not abort the others.
// Each cell's seed derives from the global seed and the cell's names.
inline GridResult run_grid(const TaskSpec& task, const CorpusSplit& train, const CorpusSplit& val,
                           const CorpusSplit& test,
                           const std::vector<std::pair<std::string, const EmbeddingTable*>>& embeddings,
                           const std::vector<Family>& families, const GridRunConfig& cfg,
                           std::vector<std::pair<std::string, ModelArtifact>>* trained = nullptr) {
    if (embeddings.empty()) throw_config("grid needs at least one embedding");
    if (families.empty()) throw_config("grid needs at least one family");

    GridResult result;
    result.task_id = task.id;
    for (Family f : families) result.families.emplace_back(to_string(f));
    for (const auto& [name, table] : embeddings) result.embeddings.push_back(name);
    result.cells.resize(families.size() * embeddings.size());

    for (std::size_t e = 0; e < embeddings.size(); ++e) {
        const auto& [emb_name, table] = embeddings[e];
        LabeledDataset<float> train_seq =
            encode_split<float>(train, cfg.preprocess, *table, InputKind::sequence, cfg.oov_mode);
        LabeledDataset<float> val_seq =
            encode_split<float>(val, cfg.preprocess, *table, InputKind::sequence, cfg.oov_mode);
        LabeledDataset<float> test_seq =
            encode_split<float>(test, cfg.preprocess, *table, InputKind::sequence, cfg.oov_mode);
        LabeledDataset<float> train_flat = to_flat(train_seq);
        LabeledDataset<float> val_flat = to_flat(val_seq);
        LabeledDataset<float> test_flat = to_flat(test_seq);

        for (std::size_t f = 0; f < families.size(); ++f) {
            GridCell& cell = result.cell(f, e);
            try {
                TrainConfig tc = cfg.config_for(families[f]);
                tc.seed = derive_seed(cfg.global_seed, task.id + "|" +
                                                           std::string(to_string(families[f])) +
                                                           "|" + emb_name);
                const LabeledDataset<float>& train_ds =
                    uses_sequence_input(families[f]) ? train_seq : train_flat;
                ModelArtifact artifact =
                    train_model(families[f], train_ds, tc, task, emb_name, table->dim(),
                                cfg.preprocess.max_len);
                double val_alt = 0, test_alt = 0;
                cell.val_accuracy = detail::score_artifact(artifact, val_seq, val_flat,
                                                           cfg.multilabel_metric, &val_alt);
                cell.test_accuracy = detail::score_artifact(artifact, test_seq, test_flat,
                                                            cfg.multilabel_metric, &test_alt);
                if (task.multi_label) {
                    cell.val_alt = val_alt;
                    cell.test_alt = test_alt;
                }
                cell.ok = true;
                if (trained) {
                    trained->emplace_back(std::string(to_string(families[f])) + "|" + emb_name,
                                          std::move(artifact));
                }
            } catch (const Error& err) {
                cell.ok = false;
                cell.error = err.what();
            }
        }
    }
    return result;
}

// argmax over validation accuracy; ties break by family order then embedding
// order as they appear in the result.
inline Selection select_best(const GridResult& grid) {
    Selection sel;
    sel.task_id = grid.task_id;
    bool found = false;
    for (std::size_t f = 0; f < grid.families.size(); ++f) {
        for (std::size_t e = 0; e < grid.embeddings.size(); ++e) {
            const GridCell& cell = grid.cell(f, e);
            if (!cell.ok) continue;
            if (!found || cell.val_accuracy > sel.val_accuracy) {
                found = true;
                sel.family = grid.families[f];
                sel.embedding = grid.embeddings[e];
                sel.val_accuracy = cell.val_accuracy;
                sel.test_accuracy = cell.test_accuracy;
            }
        }
    }
    if (!found) throw_data("grid for task '" + grid.task_id + "' has no successful cell");
    return sel;
}

namespace detail {

inline std::string format_accuracy(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << v;
    return os.str();
}

} // namespace detail

// CSV matrix: rows = families, columns = embeddings, cell = "val/test".
inline std::string render_grid_csv(const GridResult& grid) {
    std::ostringstream os;
    os << "family";
    for (const auto& e : grid.embeddings) os << ',' << e;
    os << '\n';
    for (std::size_t f = 0; f < grid.families.size(); ++f) {
        os << grid.families[f];
        for (std::size_t e = 0; e < grid.embeddings.size(); ++e) {
            const GridCell& cell = grid.cell(f, e);
            if (cell.ok) {
                os << ',' << detail::format_accuracy(cell.val_accuracy) << '/'
                   << detail::format_accuracy(cell.test_accuracy);
            } else {
                os << ",ERROR";
            }
        }
        os << '\n';
    }
    return os.str();
}

// Long form with both multilabel metrics and per-cell errors.
inline std::string render_grid_cells_csv(const GridResult& grid) {
    std::ostringstream os;
    os << "family,embedding,val_accuracy,test_accuracy,val_alt,test_alt,status,error\n";
    for (std::size_t f = 0; f < grid.families.size(); ++f) {
        for (std::size_t e = 0; e < grid.embeddings.size(); ++e) {
            const GridCell& cell = grid.cell(f, e);
            os << grid.families[f] << ',' << grid.embeddings[e] << ',';
            if (cell.ok) {
                os << detail::format_accuracy(cell.val_accuracy) << ','
                   << detail::format_accuracy(cell.test_accuracy) << ',';
                os << (cell.val_alt ? detail::format_accuracy(*cell.val_alt) : "") << ','
                   << (cell.test_alt ? detail::format_accuracy(*cell.test_alt) : "") << ",ok,";
            } else {
                std::string msg = cell.error;
                for (char& c : msg) {
                    if (c == ',' || c == '\n') c = ';';
                }
                os << ",,,,error," << msg;
            }
            os << '\n';
        }
    }
    return os.str();
}

// Combined report over several tasks: rows = tasks, columns = families,
// cells = test accuracy per embedding joined by '/'.
inline std::string render_combined_report(const std::vector<GridResult>& grids) {
    std::ostringstream os;
    os << "# Accuracy by task, family and embedding\n\n";
    if (grids.empty()) return os.str();
    const auto& families = grids.front().families;
    const auto& embeddings = grids.front().embeddings;
    os << "Cell format: ";
    for (std::size_t e = 0; e < embeddings.size(); ++e) os << (e ? "/" : "") << embeddings[e];
    os << " (test accuracy)\n\n";
    os << "| task |";
    for (const auto& f : families) os << ' ' << f << " |";
    os << '\n';
    os << "|---|";
    for (std::size_t f = 0; f < families.size(); ++f) os << "---|";
    os << '\n';
    for (const auto& grid : grids) {
        os << "| " << grid.task_id << " |";
        for (std::size_t f = 0; f < grid.families.size(); ++f) {
            os << ' ';
            for (std::size_t e = 0; e < grid.embeddings.size(); ++e) {
                const GridCell& cell = grid.cell(f, e);
                if (e) os << '/';
                if (cell.ok) {
                    std::ostringstream v;
                    v << std::fixed << std::setprecision(2) << cell.test_accuracy;
                    os << v.str();
                } else {
                    os << "err";
                }
            }
            os << " |";
        }
        os << '\n';
    }
    return os.str();
}

} // namespace affect
