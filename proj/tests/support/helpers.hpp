#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "affect/dataset.hpp"
#include "affect/embedding.hpp"
#include "affect/models/knn.hpp"
#include "affect/rng.hpp"

namespace testsupport {

inline std::filesystem::path fixture_dir() { return AFFECT_FIXTURE_DIR; }

// unique scratch directory removed on destruction
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        dir_ = std::filesystem::temp_directory_path() /
               ("affect_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(dir_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(dir_, ec);
    }
    const std::filesystem::path& path() const { return dir_; }

private:
    std::filesystem::path dir_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline affect::EmbeddingTable
make_table(std::size_t dim, const std::vector<std::pair<std::string, std::vector<float>>>& entries,
           const std::string& name = "custom") {
    affect::EmbeddingTable table(dim, name);
    for (const auto& [word, vec] : entries) table.insert(word, vec);
    return table;
}

inline std::vector<float> random_vector(std::size_t dim, affect::Rng& rng, double lo = -1,
                                        double hi = 1) {
    std::vector<float> v(dim);
    for (auto& x : v) x = static_cast<float>(rng.uniform(lo, hi));
    return v;
}

template <typename T>
std::vector<T> random_vector_t(std::size_t dim, affect::Rng& rng, double lo = -1, double hi = 1) {
    std::vector<T> v(dim);
    for (auto& x : v) x = static_cast<T>(rng.uniform(lo, hi));
    return v;
}

template <typename T>
affect::Matrix<T> random_matrix(std::size_t rows, std::size_t cols, affect::Rng& rng,
                                double lo = -1, double hi = 1) {
    affect::Matrix<T> m(rows, cols);
    for (auto& x : m.data()) x = static_cast<T>(rng.uniform(lo, hi));
    return m;
}

// Independent distance-sort oracle for KNN: full sort over (distance, index)
// pairs, majority vote, vote ties resolved by the nearest neighbor's class.
template <typename T>
std::size_t knn_oracle(const std::vector<std::vector<T>>& inputs,
                       const std::vector<std::vector<std::uint8_t>>& labels, std::size_t n_classes,
                       std::size_t k, std::span<const T> query) {
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        double d = 0;
        for (std::size_t j = 0; j < query.size(); ++j) {
            double diff = double(query[j]) - double(inputs[i][j]);
            d += diff * diff;
        }
        dist.emplace_back(d, i);
    }
    std::sort(dist.begin(), dist.end());
    std::vector<std::size_t> votes(n_classes, 0);
    for (std::size_t r = 0; r < k; ++r) {
        const auto& label = labels[dist[r].second];
        for (std::size_t c = 0; c < n_classes; ++c) votes[c] += label[c] ? 1 : 0;
    }
    std::size_t max_votes = 0;
    for (std::size_t c = 0; c < n_classes; ++c) max_votes = std::max(max_votes, votes[c]);
    std::size_t tied = 0;
    std::size_t best = 0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        if (votes[c] == max_votes) {
            ++tied;
            if (tied == 1) best = c;
        }
    }
    if (tied > 1) {
        const auto& label = labels[dist[0].second];
        for (std::size_t c = 0; c < n_classes; ++c) {
            if (label[c]) return c;
        }
    }
    return best;
}

// 4-class keyword corpus over the 30-word fixture vocabulary. Each tweet is
// "noise* keyword noise*" with the keyword at a random position (or position
// 0 when fixed_position is set, which makes the flat encoding linearly
// separable).
struct KeywordCorpus {
    std::vector<std::string> texts;
    std::vector<std::size_t> classes;
};

inline const std::vector<std::vector<std::string>>& class_keywords() {
    static const std::vector<std::vector<std::string>> kw = {
        {"calm", "quiet", "chill"},
        {"bother", "annoy", "irk"},
        {"mad", "upset", "sour"},
        {"fury", "rage", "wrath"},
    };
    return kw;
}

inline const std::vector<std::string>& noise_words() {
    static const std::vector<std::string> noise = {
        "the", "a", "in", "on", "at", "it", "this", "not", "day",
        "night", "tweet", "word", "thing", "now", "here", "there", "out", "down",
    };
    return noise;
}

inline KeywordCorpus make_keyword_corpus(std::size_t n, std::uint64_t seed, bool fixed_position) {
    affect::Rng rng(seed);
    KeywordCorpus corpus;
    const auto& kw = class_keywords();
    const auto& noise = noise_words();
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t cls = i % kw.size();
        const auto& words = kw[cls];
        std::string keyword = words[rng.next_below(words.size())];
        std::size_t len = 3 + rng.next_below(4); // 3..6 tokens
        std::size_t key_pos = fixed_position ? 0 : rng.next_below(len);
        std::string text;
        for (std::size_t p = 0; p < len; ++p) {
            if (p) text += ' ';
            text += (p == key_pos) ? keyword : noise[rng.next_below(noise.size())];
        }
        corpus.texts.push_back(text);
        corpus.classes.push_back(cls);
    }
    return corpus;
}

} // namespace testsupport
