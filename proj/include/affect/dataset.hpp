#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "affect/common.hpp"
#include "affect/embedding.hpp"
#include "affect/linalg.hpp"

namespace affect {

// Fixed emotion order shared by the E-c file format, the label encoding and
// every report.
inline constexpr std::array<std::string_view, 11> kEmotionNames = {
    "anger", "anticipation", "disgust", "fear",     "joy",      "love",
    "optimism", "pessimism",    "sadness", "surprise", "trust",
};

inline constexpr std::array<std::string_view, 4> kIntensityDimensions = {"anger", "fear", "joy",
                                                                         "sadness"};

enum class TaskKind { intensity, emotion, valence };

struct TaskSpec {
    std::string id;        // "EI-oc:anger", "E-c", "V-oc"
    TaskKind kind = TaskKind::intensity;
    std::size_t n_classes = 4;
    bool multi_label = false;
    std::string dimension; // intensity dimension or "valence"

    static TaskSpec intensity(const std::string& dim) {
        return {"EI-oc:" + dim, TaskKind::intensity, 4, false, dim};
    }
    static TaskSpec emotion() { return {"E-c", TaskKind::emotion, 11, true, ""}; }
    static TaskSpec valence() { return {"V-oc", TaskKind::valence, 7, false, "valence"}; }

    static TaskSpec from_id(const std::string& id) {
        if (id == "E-c") return emotion();
        if (id == "V-oc") return valence();
        if (id.rfind("EI-oc:", 0) == 0) {
            std::string dim = id.substr(6);
            for (auto d : kIntensityDimensions) {
                if (dim == d) return intensity(dim);
            }
            throw_config("unknown intensity dimension '" + dim + "'");
        }
        throw_config("unknown task id '" + id + "'");
    }
};

enum class InputKind { flat, sequence };

// Encoded examples with task-typed labels. Labels are stored uniformly as
// K-wide hot vectors: exactly one active bit for multiclass, any subset for
// multi-label.
template <typename T>
struct LabeledDataset {
    InputKind kind = InputKind::flat;
    std::size_t n_classes = 0;
    bool multi_label = false;
    std::vector<std::vector<T>> flat;                // kind == flat
    std::vector<Matrix<T>> seq;                      // kind == sequence
    std::vector<std::vector<std::uint8_t>> labels;   // size() x n_classes

    std::size_t size() const { return labels.size(); }

    std::size_t input_dim() const {
        if (kind == InputKind::flat) return flat.empty() ? 0 : flat.front().size();
        return seq.empty() ? 0 : seq.front().rows() * seq.front().cols();
    }

    std::size_t label_index(std::size_t i) const {
        const auto& row = labels[i];
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (row[c]) return c;
        }
        throw_data("example " + std::to_string(i) + " has no active label bit");
    }

    void add_flat(std::vector<T> x, std::vector<std::uint8_t> label) {
        flat.push_back(std::move(x));
        labels.push_back(std::move(label));
    }

    void add_sequence(Matrix<T> x, std::vector<std::uint8_t> label) {
        seq.push_back(std::move(x));
        labels.push_back(std::move(label));
    }

    void validate() const {
        std::size_t n = kind == InputKind::flat ? flat.size() : seq.size();
        if (n != labels.size()) throw_data("dataset inputs and labels differ in length");
        if (n == 0) throw_data("dataset is empty");
        if (n_classes < 2) throw_data("dataset needs at least 2 classes");
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i].size() != n_classes) throw_data("label width mismatch");
            if (!multi_label) {
                std::size_t active = 0;
                for (auto b : labels[i]) active += b ? 1 : 0;
                if (active != 1) {
                    throw_data("one-hot label with " + std::to_string(active) + " active bits");
                }
            }
        }
    }
};

inline std::vector<std::uint8_t> one_hot(std::size_t index, std::size_t n_classes) {
    std::vector<std::uint8_t> v(n_classes, 0);
    v.at(index) = 1;
    return v;
}

// Flat view of a sequence dataset: row-major flatten per example.
template <typename T>
LabeledDataset<T> to_flat(const LabeledDataset<T>& ds) {
    if (ds.kind == InputKind::flat) return ds;
    LabeledDataset<T> out;
    out.kind = InputKind::flat;
    out.n_classes = ds.n_classes;
    out.multi_label = ds.multi_label;
    out.labels = ds.labels;
    out.flat.reserve(ds.seq.size());
    for (const auto& m : ds.seq) out.flat.push_back(flatten(m));
    return out;
}

} // namespace affect
