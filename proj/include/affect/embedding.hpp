#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "affect/common.hpp"
#include "affect/linalg.hpp"
#include "affect/preprocess.hpp"

namespace affect {

enum class OovMode { truncate_concat, mean_chars };

inline OovMode oov_mode_from_string(const std::string& s) {
    if (s == "truncate_concat") return OovMode::truncate_concat;
    if (s == "mean_chars") return OovMode::mean_chars;
    throw_config("unknown oov_mode '" + s + "' (expected truncate_concat or mean_chars)");
}

// Immutable word -> vector store loaded from the plain text format
// "word v1 v2 ... v_dim". Duplicate words keep the first occurrence.
class EmbeddingTable {
public:
    EmbeddingTable() = default;
    EmbeddingTable(std::size_t dim, std::string name) : dim_(dim), name_(std::move(name)) {}

    static EmbeddingTable load(const std::string& path, std::size_t expected_dim,
                               const std::string& name = "custom") {
        std::ifstream in(path);
        if (!in) throw_data("cannot open embedding file '" + path + "'");
        EmbeddingTable table(expected_dim, name);
        std::string line;
        std::size_t lineno = 0;
        bool saw_entry = false;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            auto sp = line.find(' ');
            std::string word = line.substr(0, sp == std::string::npos ? line.size() : sp);
            std::vector<float> vec;
            vec.reserve(expected_dim);
            bool parse_failed = false;
            std::size_t pos = (sp == std::string::npos) ? line.size() : sp + 1;
            while (pos < line.size()) {
                while (pos < line.size() && line[pos] == ' ') ++pos;
                if (pos >= line.size()) break;
                std::size_t end = line.find(' ', pos);
                if (end == std::string::npos) end = line.size();
                float v = 0.f;
                auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + end, v);
                if (ec != std::errc() || ptr != line.data() + end) {
                    parse_failed = true;
                    break;
                }
                vec.push_back(v);
                pos = end;
            }
            if (parse_failed || vec.empty()) {
                // word2vec-style count/dim header: skip with a warning
                if (lineno == 1 && !saw_entry) {
                    std::fprintf(stderr, "warning: skipping header line in '%s'\n", path.c_str());
                    continue;
                }
                throw_data("embedding file '" + path + "' line " + std::to_string(lineno) +
                           ": unparseable float");
            }
            if (vec.size() != expected_dim) {
                throw_data("embedding file '" + path + "' line " + std::to_string(lineno) +
                           ": expected " + std::to_string(expected_dim) + " components, got " +
                           std::to_string(vec.size()));
            }
            if (!all_finite(std::span<const float>(vec))) {
                throw_data("embedding file '" + path + "' line " + std::to_string(lineno) +
                           ": non-finite component");
            }
            saw_entry = true;
            table.vocab_.emplace(std::move(word), std::move(vec)); // first wins
        }
        if (!saw_entry) throw_data("embedding file '" + path + "' contains no entries");
        return table;
    }

    // Text round-trip (sorted by word for stable output).
    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw_data("cannot write embedding file '" + path + "'");
        std::map<std::string, const std::vector<float>*> sorted;
        for (const auto& [w, v] : vocab_) sorted.emplace(w, &v);
        for (const auto& [w, v] : sorted) {
            out << w;
            char buf[64];
            for (float x : *v) {
                auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
                out << ' ';
                out.write(buf, ptr - buf);
            }
            out << '\n';
        }
    }

    void insert(const std::string& word, std::vector<float> vec) {
        if (vec.size() != dim_) throw_data("vector for '" + word + "' has wrong dimension");
        vocab_.emplace(word, std::move(vec));
    }

    const std::vector<float>* find(const std::string& word) const {
        auto it = vocab_.find(word);
        return it == vocab_.end() ? nullptr : &it->second;
    }

    bool contains(const std::string& word) const { return vocab_.count(word) != 0; }
    std::size_t dim() const { return dim_; }
    std::size_t size() const { return vocab_.size(); }
    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    // Out-of-vocabulary composition from single-character entries. The
    // character vectors are concatenated in order (a missing character
    // contributes a zero block) and the first dim components are kept; with
    // mean_chars the found character vectors are averaged over the character
    // count instead.
    std::vector<float> compose_oov(const std::string& word,
                                   OovMode mode = OovMode::truncate_concat) const {
        std::vector<char32_t> chars = detail::decode_utf8(word);
        std::vector<float> out(dim_, 0.f);
        if (chars.empty()) return out;
        if (mode == OovMode::truncate_concat) {
            std::size_t filled = 0;
            for (char32_t cp : chars) {
                if (filled >= dim_) break;
                std::string key;
                detail::encode_utf8(cp, key);
                const std::vector<float>* v = find(key);
                std::size_t take = std::min(dim_ - filled, dim_);
                if (v) {
                    for (std::size_t i = 0; i < take; ++i) out[filled + i] = (*v)[i];
                }
                filled += take;
            }
        } else {
            for (char32_t cp : chars) {
                std::string key;
                detail::encode_utf8(cp, key);
                if (const std::vector<float>* v = find(key)) {
                    for (std::size_t i = 0; i < dim_; ++i) out[i] += (*v)[i];
                }
            }
            for (float& x : out) x /= static_cast<float>(chars.size());
        }
        return out;
    }

private:
    std::size_t dim_ = 0;
    std::string name_ = "custom";
    std::unordered_map<std::string, std::vector<float>> vocab_;
};

// 40 x dim matrix for one tweet: stored vector for in-vocab tokens, composed
// vector for OOV tokens, zero rows for PAD slots.
template <typename T>
Matrix<T> encode_sequence(const EmbeddingTable& table, const TokenSequence& seq,
                          const std::string& pad_token = "<pad>",
                          OovMode mode = OovMode::truncate_concat) {
    Matrix<T> m(seq.tokens.size(), table.dim(), T(0));
    for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
        const std::string& tok = seq.tokens[i];
        if (tok == pad_token) continue;
        auto row = m.row(i);
        if (const std::vector<float>* v = table.find(tok)) {
            for (std::size_t j = 0; j < v->size(); ++j) row[j] = static_cast<T>((*v)[j]);
        } else {
            std::vector<float> composed = table.compose_oov(tok, mode);
            for (std::size_t j = 0; j < composed.size(); ++j) row[j] = static_cast<T>(composed[j]);
        }
    }
    return m;
}

// Row-major concatenation: component (i*dim + j) == m(i, j).
template <typename T>
std::vector<T> flatten(const Matrix<T>& m) {
    return std::vector<T>(m.data().begin(), m.data().end());
}

} // namespace affect
