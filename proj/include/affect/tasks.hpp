#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "affect/common.hpp"
#include "affect/dataset.hpp"
#include "affect/embedding.hpp"
#include "affect/preprocess.hpp"

namespace affect {

// SemEval-format ingestion. All corpus files are UTF-8 TSV with a header row;
// fields never contain tabs. Tweets are stored verbatim; preprocessing happens
// downstream.

enum class SplitRole { train, validation, test };

struct LabeledRecord {
    std::string id;
    std::string text;
    int klass = -1;                       // intensity / valence class index
    std::vector<std::uint8_t> bits;       // multi-label bits (E-c)
};

struct CorpusSplit {
    SplitRole role = SplitRole::train;
    TaskSpec task;
    std::vector<LabeledRecord> records;

    std::size_t size() const { return records.size(); }
};

enum class SexismCategory : std::size_t {
    indirect_harassment = 0,
    information_threat = 1,
    sexual_harassment = 2,
    physical_harassment = 3,
};

inline constexpr std::array<std::string_view, 4> kCategoryNames = {
    "indirect harassment",
    "information threat",
    "sexual harassment",
    "physical harassment",
};

struct CategoryRecord {
    std::string id;
    std::string text;
};

struct CategoryCorpus {
    std::array<std::vector<CategoryRecord>, 4> by_category;

    const std::vector<CategoryRecord>& records(SexismCategory c) const {
        return by_category[static_cast<std::size_t>(c)];
    }
    std::size_t size(SexismCategory c) const { return records(c).size(); }
    std::size_t total() const {
        std::size_t n = 0;
        for (const auto& v : by_category) n += v.size();
        return n;
    }
};

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        std::size_t tab = line.find('\t', pos);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, tab - pos));
        pos = tab + 1;
    }
    return fields;
}

inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_data("cannot open corpus file '" + path + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

inline std::string lowercased(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

} // namespace detail

// EI-oc / V-oc files: columns (ID, Tweet, Affect Dimension, Intensity Class).
// The class is the leading integer of the fourth column, before any ':'.
// V-oc reuses this parser with dimension "valence" and the class range -3..3.
inline CorpusSplit parse_ei_file(const std::string& path, const std::string& dimension,
                                 SplitRole role = SplitRole::train) {
    TaskSpec task = (dimension == "valence") ? TaskSpec::valence() : TaskSpec::intensity(dimension);
    const int lo = (task.kind == TaskKind::valence) ? -3 : 0;
    const int hi = (task.kind == TaskKind::valence) ? 3 : 3;

    CorpusSplit split;
    split.role = role;
    split.task = task;

    auto lines = detail::read_lines(path);
    if (lines.empty()) throw_data("corpus file '" + path + "' is empty");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto fields = detail::split_tabs(lines[i]);
        if (fields.size() != 4) {
            throw_data("'" + path + "' line " + std::to_string(i + 1) + ": expected 4 columns, got " +
                       std::to_string(fields.size()));
        }
        if (detail::lowercased(fields[2]) != dimension) {
            throw_data("'" + path + "' line " + std::to_string(i + 1) + ": affect dimension '" +
                       fields[2] + "' does not match requested '" + dimension + "'");
        }
        const std::string& cell = fields[3];
        int klass = 0;
        auto colon = cell.find(':');
        std::string head = cell.substr(0, colon);
        auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), klass);
        if (ec != std::errc() || ptr != head.data() + head.size() || head.empty()) {
            throw_data("'" + path + "' line " + std::to_string(i + 1) +
                       ": malformed intensity class '" + cell + "'");
        }
        if (klass < lo || klass > hi) {
            throw_data("'" + path + "' line " + std::to_string(i + 1) + ": unknown class " +
                       std::to_string(klass) + " (expected " + std::to_string(lo) + ".." +
                       std::to_string(hi) + ")");
        }
        LabeledRecord rec;
        rec.id = fields[0];
        rec.text = fields[1];
        rec.klass = klass;
        split.records.push_back(std::move(rec));
    }
    return split;
}

// E-c files: columns (ID, Tweet, then the 11 emotions in fixed order), cells 0/1.
inline CorpusSplit parse_ec_file(const std::string& path, SplitRole role = SplitRole::train) {
    CorpusSplit split;
    split.role = role;
    split.task = TaskSpec::emotion();

    auto lines = detail::read_lines(path);
    if (lines.empty()) throw_data("corpus file '" + path + "' is empty");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto fields = detail::split_tabs(lines[i]);
        if (fields.size() != 2 + kEmotionNames.size()) {
            throw_data("'" + path + "' line " + std::to_string(i + 1) + ": expected " +
                       std::to_string(2 + kEmotionNames.size()) + " columns, got " +
                       std::to_string(fields.size()));
        }
        LabeledRecord rec;
        rec.id = fields[0];
        rec.text = fields[1];
        rec.bits.resize(kEmotionNames.size());
        for (std::size_t k = 0; k < kEmotionNames.size(); ++k) {
            const std::string& cell = fields[2 + k];
            if (cell == "0") {
                rec.bits[k] = 0;
            } else if (cell == "1") {
                rec.bits[k] = 1;
            } else {
                throw_data("'" + path + "' line " + std::to_string(i + 1) + ": non-binary cell '" +
                           cell + "' in column '" + std::string(kEmotionNames[k]) + "'");
            }
        }
        split.records.push_back(std::move(rec));
    }
    return split;
}

// Category corpus: columns (ID, Tweet, Category); names matched case-insensitively.
inline CategoryCorpus parse_category_file(const std::string& path) {
    CategoryCorpus corpus;
    auto lines = detail::read_lines(path);
    if (lines.empty()) throw_data("corpus file '" + path + "' is empty");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto fields = detail::split_tabs(lines[i]);
        if (fields.size() != 3) {
            throw_data("'" + path + "' line " + std::to_string(i + 1) + ": expected 3 columns, got " +
                       std::to_string(fields.size()));
        }
        std::string name = detail::lowercased(fields[2]);
        std::size_t idx = kCategoryNames.size();
        for (std::size_t c = 0; c < kCategoryNames.size(); ++c) {
            if (name == kCategoryNames[c]) {
                idx = c;
                break;
            }
        }
        if (idx == kCategoryNames.size()) {
            throw_data("'" + path + "' line " + std::to_string(i + 1) + ": unknown category '" +
                       fields[2] + "'");
        }
        corpus.by_category[idx].push_back({fields[0], fields[1]});
    }
    return corpus;
}

// Per-class counts in ascending class order; sums to the record count.
inline std::vector<std::size_t> split_stats(const CorpusSplit& split) {
    if (split.task.multi_label) {
        std::vector<std::size_t> counts(kEmotionNames.size(), 0);
        for (const auto& rec : split.records) {
            for (std::size_t k = 0; k < rec.bits.size(); ++k) counts[k] += rec.bits[k];
        }
        return counts;
    }
    const int offset = (split.task.kind == TaskKind::valence) ? 3 : 0;
    std::vector<std::size_t> counts(split.task.n_classes, 0);
    for (const auto& rec : split.records) {
        counts.at(static_cast<std::size_t>(rec.klass + offset)) += 1;
    }
    return counts;
}

// --- serializers (round-trip partners of the parsers above) ---

inline void write_ei_file(const std::string& path, const CorpusSplit& split) {
    std::ofstream out(path);
    if (!out) throw_data("cannot write '" + path + "'");
    out << "ID\tTweet\tAffect Dimension\tIntensity Class\n";
    for (const auto& rec : split.records) {
        out << rec.id << '\t' << rec.text << '\t' << split.task.dimension << '\t' << rec.klass
            << '\n';
    }
}

inline void write_ec_file(const std::string& path, const CorpusSplit& split) {
    std::ofstream out(path);
    if (!out) throw_data("cannot write '" + path + "'");
    out << "ID\tTweet";
    for (auto name : kEmotionNames) out << '\t' << name;
    out << '\n';
    for (const auto& rec : split.records) {
        out << rec.id << '\t' << rec.text;
        for (auto b : rec.bits) out << '\t' << int(b);
        out << '\n';
    }
}

inline void write_category_file(const std::string& path, const CategoryCorpus& corpus) {
    std::ofstream out(path);
    if (!out) throw_data("cannot write '" + path + "'");
    out << "ID\tTweet\tCategory\n";
    for (std::size_t c = 0; c < corpus.by_category.size(); ++c) {
        for (const auto& rec : corpus.by_category[c]) {
            out << rec.id << '\t' << rec.text << '\t' << kCategoryNames[c] << '\n';
        }
    }
}

// --- encoding: preprocess + embed a split into a LabeledDataset ---

template <typename T>
LabeledDataset<T> encode_split(const CorpusSplit& split, const PreprocessConfig& prep,
                               const EmbeddingTable& table, InputKind kind,
                               OovMode oov = OovMode::truncate_concat) {
    LabeledDataset<T> ds;
    ds.kind = kind;
    ds.n_classes = split.task.n_classes;
    ds.multi_label = split.task.multi_label;
    const int offset = (split.task.kind == TaskKind::valence) ? 3 : 0;
    for (const auto& rec : split.records) {
        TokenSequence seq = preprocess(rec.text, prep);
        Matrix<T> m = encode_sequence<T>(table, seq, prep.pad_token, oov);
        std::vector<std::uint8_t> label =
            split.task.multi_label ? rec.bits
                                   : one_hot(static_cast<std::size_t>(rec.klass + offset),
                                             split.task.n_classes);
        if (kind == InputKind::sequence) {
            ds.add_sequence(std::move(m), std::move(label));
        } else {
            ds.add_flat(flatten(m), std::move(label));
        }
    }
    ds.validate();
    return ds;
}

} // namespace affect
