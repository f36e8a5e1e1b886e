#pragma once

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "affect/common.hpp"
#include "affect/linalg.hpp"
#include "affect/preprocess.hpp"
#include "affect/rng.hpp"
#include "affect/tasks.hpp"

namespace affect {

struct LDAConfig {
    std::size_t topics = 10;
    double alpha = -1;       // <= 0 means 50 / topics
    double beta = 0.01;
    std::size_t iterations = 1000;
    std::uint64_t seed = 0;
    std::size_t top_k = 4;
    std::set<std::string> stopwords; // applied only for topic modeling

    double resolved_alpha() const { return alpha > 0 ? alpha : 50.0 / static_cast<double>(topics); }

    void validate() const {
        if (topics < 1) throw_config("LDA needs at least one topic");
        if (beta <= 0) throw_config("beta must be positive");
        if (alpha != -1 && alpha <= 0) throw_config("alpha must be positive");
        if (iterations < 1) throw_config("iterations must be positive");
        if (top_k < 1) throw_config("top_k must be positive");
    }
};

// Collapsed Gibbs state: integer count matrices plus the raw per-token topic
// assignments they were accumulated from.
struct TopicModel {
    std::size_t n_topics = 0;
    std::vector<std::string> vocab;                 // word id -> word
    std::vector<std::vector<int>> docs;             // word ids after filtering
    std::vector<std::vector<int>> assignments;      // same shape as docs
    Matrix<int> topic_word;                         // T x V
    std::vector<int> topic_total;                   // tokens per topic
    Matrix<int> doc_topic;                          // D x T
    double alpha = 0;
    double beta = 0;

    std::size_t vocab_size() const { return vocab.size(); }
    std::size_t n_docs() const { return docs.size(); }

    // smoothed topic-word distribution; rows sum to 1
    std::vector<double> phi(std::size_t topic) const {
        const double v = static_cast<double>(vocab.size());
        std::vector<double> row(vocab.size());
        const double denom = static_cast<double>(topic_total[topic]) + v * beta;
        for (std::size_t w = 0; w < vocab.size(); ++w) {
            row[w] = (static_cast<double>(topic_word(topic, w)) + beta) / denom;
        }
        return row;
    }

    // smoothed document-topic distribution; rows sum to 1
    std::vector<double> theta(std::size_t doc) const {
        std::vector<double> row(n_topics);
        double total = 0;
        for (std::size_t t = 0; t < n_topics; ++t) total += doc_topic(doc, t);
        const double denom = total + static_cast<double>(n_topics) * alpha;
        for (std::size_t t = 0; t < n_topics; ++t) {
            row[t] = (static_cast<double>(doc_topic(doc, t)) + alpha) / denom;
        }
        return row;
    }

    // rebuild every count matrix from the raw assignments; used by the audit
    void recount(Matrix<int>& tw, std::vector<int>& tt, Matrix<int>& dt) const {
        tw = Matrix<int>(n_topics, vocab.size(), 0);
        tt.assign(n_topics, 0);
        dt = Matrix<int>(docs.size(), n_topics, 0);
        for (std::size_t d = 0; d < docs.size(); ++d) {
            for (std::size_t n = 0; n < docs[d].size(); ++n) {
                int w = docs[d][n];
                int z = assignments[d][n];
                tw(static_cast<std::size_t>(z), static_cast<std::size_t>(w)) += 1;
                tt[static_cast<std::size_t>(z)] += 1;
                dt(d, static_cast<std::size_t>(z)) += 1;
            }
        }
    }

    bool counts_consistent() const {
        Matrix<int> tw;
        std::vector<int> tt;
        Matrix<int> dt;
        recount(tw, tt, dt);
        return tw == topic_word && tt == topic_total && dt == doc_topic;
    }
};

// Collapsed Gibbs sampler. Assignments are initialized uniformly at random
// from the seed; every sweep resamples each token's topic from
//   p(z = t) ~ (doc_topic[d][t] + alpha) * (topic_word[t][w] + beta)
//              / (topic_total[t] + V * beta)
// with the token's own assignment removed from the counts first.
// sweep_hook, when set, runs after every sweep (1-based index).
inline TopicModel fit_lda(const std::vector<std::vector<std::string>>& raw_docs,
                          const LDAConfig& cfg,
                          const std::function<void(const TopicModel&, std::size_t)>& sweep_hook = {}) {
    cfg.validate();
    TopicModel model;
    model.n_topics = cfg.topics;
    model.alpha = cfg.resolved_alpha();
    model.beta = cfg.beta;

    std::unordered_map<std::string, int> word_ids;
    for (const auto& doc : raw_docs) {
        std::vector<int> ids;
        for (const auto& word : doc) {
            if (cfg.stopwords.count(word)) continue;
            auto [it, inserted] = word_ids.emplace(word, static_cast<int>(model.vocab.size()));
            if (inserted) model.vocab.push_back(word);
            ids.push_back(it->second);
        }
        model.docs.push_back(std::move(ids));
    }
    std::size_t total_tokens = 0;
    for (const auto& d : model.docs) total_tokens += d.size();
    if (total_tokens == 0) throw_data("LDA corpus is empty after stopword filtering");
    if (cfg.top_k > model.vocab.size()) {
        throw_config("top_k exceeds vocabulary size " + std::to_string(model.vocab.size()));
    }

    const std::size_t T = cfg.topics;
    const std::size_t V = model.vocab.size();
    const std::size_t D = model.docs.size();
    model.topic_word = Matrix<int>(T, V, 0);
    model.topic_total.assign(T, 0);
    model.doc_topic = Matrix<int>(D, T, 0);
    model.assignments.resize(D);

    Rng rng(cfg.seed);
    for (std::size_t d = 0; d < D; ++d) {
        model.assignments[d].resize(model.docs[d].size());
        for (std::size_t n = 0; n < model.docs[d].size(); ++n) {
            int z = static_cast<int>(rng.next_below(T));
            model.assignments[d][n] = z;
            model.topic_word(static_cast<std::size_t>(z),
                             static_cast<std::size_t>(model.docs[d][n])) += 1;
            model.topic_total[static_cast<std::size_t>(z)] += 1;
            model.doc_topic(d, static_cast<std::size_t>(z)) += 1;
        }
    }

    const double vbeta = static_cast<double>(V) * cfg.beta;
    std::vector<double> cdf(T);
    for (std::size_t sweep = 1; sweep <= cfg.iterations; ++sweep) {
        for (std::size_t d = 0; d < D; ++d) {
            for (std::size_t n = 0; n < model.docs[d].size(); ++n) {
                const std::size_t w = static_cast<std::size_t>(model.docs[d][n]);
                const std::size_t old_z = static_cast<std::size_t>(model.assignments[d][n]);
                model.topic_word(old_z, w) -= 1;
                model.topic_total[old_z] -= 1;
                model.doc_topic(d, old_z) -= 1;

                double cum = 0;
                for (std::size_t t = 0; t < T; ++t) {
                    double p = (static_cast<double>(model.doc_topic(d, t)) + model.alpha) *
                               (static_cast<double>(model.topic_word(t, w)) + cfg.beta) /
                               (static_cast<double>(model.topic_total[t]) + vbeta);
                    cum += p;
                    cdf[t] = cum;
                }
                const double u = rng.next_double() * cum;
                std::size_t new_z = 0;
                while (new_z + 1 < T && cdf[new_z] < u) ++new_z;

                model.assignments[d][n] = static_cast<int>(new_z);
                model.topic_word(new_z, w) += 1;
                model.topic_total[new_z] += 1;
                model.doc_topic(d, new_z) += 1;
            }
        }
        if (sweep_hook) sweep_hook(model, sweep);
    }
    return model;
}

// k highest-phi words of a topic; ties break lexicographically.
inline std::vector<std::string> top_words(const TopicModel& model, std::size_t topic,
                                          std::size_t k) {
    if (topic >= model.n_topics) {
        throw_data("topic index " + std::to_string(topic) + " out of range 0.." +
                   std::to_string(model.n_topics - 1));
    }
    k = std::min(k, model.vocab.size());
    std::vector<double> phi = model.phi(topic);
    std::vector<std::size_t> order(model.vocab.size());
    std::iota(order.begin(), order.end(), std::size_t(0));
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (phi[a] != phi[b]) return phi[a] > phi[b];
        return model.vocab[a] < model.vocab[b];
    });
    std::vector<std::string> words(k);
    for (std::size_t i = 0; i < k; ++i) words[i] = model.vocab[order[i]];
    return words;
}

struct TopicWord {
    std::string word;
    double phi = 0;
};

struct CategoryTopics {
    std::string category;
    std::vector<std::vector<TopicWord>> topics; // T tuples of top_k words
};

// One independent LDA per category over its preprocessed tweets (non-PAD
// tokens). The per-category seed derives from cfg.seed and the category name.
inline std::vector<CategoryTopics> category_topics(const CategoryCorpus& corpus,
                                                   const PreprocessConfig& prep,
                                                   const LDAConfig& cfg,
                                                   bool include_information_threat = false) {
    std::vector<CategoryTopics> out;
    for (std::size_t c = 0; c < kCategoryNames.size(); ++c) {
        if (c == static_cast<std::size_t>(SexismCategory::information_threat) &&
            !include_information_threat) {
            continue;
        }
        const auto& records = corpus.by_category[c];
        if (records.empty()) continue;
        std::vector<std::vector<std::string>> docs;
        docs.reserve(records.size());
        for (const auto& rec : records) {
            TokenSequence seq = preprocess(rec.text, prep);
            docs.emplace_back(seq.tokens.begin(),
                              seq.tokens.begin() + static_cast<std::ptrdiff_t>(seq.true_length));
        }
        LDAConfig cat_cfg = cfg;
        cat_cfg.seed = derive_seed(cfg.seed, std::string("lda|") + std::string(kCategoryNames[c]));
        TopicModel model = fit_lda(docs, cat_cfg);
        CategoryTopics ct;
        ct.category = std::string(kCategoryNames[c]);
        for (std::size_t t = 0; t < model.n_topics; ++t) {
            std::vector<double> phi = model.phi(t);
            std::unordered_map<std::string, double> phi_by_word;
            for (std::size_t w = 0; w < model.vocab.size(); ++w) phi_by_word[model.vocab[w]] = phi[w];
            std::vector<TopicWord> tuple;
            for (const std::string& word : top_words(model, t, cat_cfg.top_k)) {
                tuple.push_back({word, phi_by_word[word]});
            }
            ct.topics.push_back(std::move(tuple));
        }
        out.push_back(std::move(ct));
    }
    return out;
}

// One line per category: "name: (w1, w2, ...), (...)".
inline std::string render_topics_markdown(const std::vector<CategoryTopics>& tables) {
    std::ostringstream os;
    os << "# Representative topics in each category\n\n";
    for (const auto& ct : tables) {
        os << ct.category << ": ";
        for (std::size_t t = 0; t < ct.topics.size(); ++t) {
            os << (t ? ", (" : "(");
            for (std::size_t i = 0; i < ct.topics[t].size(); ++i) {
                os << (i ? ", " : "") << ct.topics[t][i].word;
            }
            os << ')';
        }
        os << "\n\n";
    }
    return os.str();
}

inline std::string render_topics_csv(const std::vector<CategoryTopics>& tables) {
    std::ostringstream os;
    os << "category,topic,rank,word,phi\n";
    char buf[64];
    for (const auto& ct : tables) {
        for (std::size_t t = 0; t < ct.topics.size(); ++t) {
            for (std::size_t r = 0; r < ct.topics[t].size(); ++r) {
                os << ct.category << ',' << t << ',' << r << ',' << ct.topics[t][r].word << ',';
                auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), ct.topics[t][r].phi);
                os.write(buf, ptr - buf);
                os << '\n';
            }
        }
    }
    return os.str();
}

} // namespace affect
