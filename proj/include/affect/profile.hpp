#pragma once

#include <array>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "affect/eval.hpp"
#include "affect/models/artifact.hpp"
#include "affect/tasks.hpp"

namespace affect {

// Per-category intensity / emotion / valence distributions produced by
// applying selected trained models to a category-labeled corpus.

struct CategoryProfile {
    std::string category;
    std::size_t size = 0;
    // four 4-long intensity count vectors in kIntensityDimensions order
    std::array<std::vector<std::size_t>, 4> intensity;
    std::vector<std::size_t> emotion;            // 11 counts
    std::size_t emotion_unlabeled = 0;           // tweets with empty prediction sets
    std::optional<std::vector<std::size_t>> valence; // 7 counts when a model was supplied
};

struct ProfileReport {
    std::vector<CategoryProfile> categories;
};

struct ProfileModels {
    // in kIntensityDimensions order: anger, fear, joy, sadness
    std::array<const ModelArtifact*, 4> intensity{};
    const ModelArtifact* emotion = nullptr;
    const ModelArtifact* valence = nullptr;      // optional
};

namespace detail {

// encode one tweet for one artifact (the tables are keyed by the artifact's
// embedding provenance)
struct EncodedTweet {
    Matrix<float> seq;
    std::vector<float> flat;
};

inline EncodedTweet encode_for(const std::string& text, const PreprocessConfig& prep,
                               const EmbeddingTable& table, OovMode oov) {
    EncodedTweet enc;
    TokenSequence tokens = preprocess(text, prep);
    enc.seq = encode_sequence<float>(table, tokens, prep.pad_token, oov);
    enc.flat = flatten(enc.seq);
    return enc;
}

inline void check_model(const ModelArtifact& a, TaskKind expected_kind) {
    TaskSpec spec = TaskSpec::from_id(a.task_id);
    if (spec.kind != expected_kind) {
        throw_config("model trained for task '" + a.task_id + "' does not fit the requested slot");
    }
}

} // namespace detail

// The embedding lookup maps provenance names to loaded tables; every model's
// provenance must resolve.
using EmbeddingLookup = std::map<std::string, const EmbeddingTable*>;

inline const EmbeddingTable& resolve_embedding(const EmbeddingLookup& lookup,
                                               const std::string& name) {
    auto it = lookup.find(name);
    if (it == lookup.end()) {
        throw_config("no embedding table loaded for provenance '" + name + "'");
    }
    return *it->second;
}

// Classify every tweet of every included category with each of the four
// intensity models; counts tally predicted classes per dimension.
inline ProfileReport profile_corpus(const CategoryCorpus& corpus, const ProfileModels& models,
                                    const EmbeddingLookup& embeddings,
                                    const PreprocessConfig& prep,
                                    OovMode oov = OovMode::truncate_concat,
                                    bool include_information_threat = false) {
    for (std::size_t d = 0; d < models.intensity.size(); ++d) {
        if (!models.intensity[d]) {
            throw_config("missing intensity model for dimension '" +
                         std::string(kIntensityDimensions[d]) + "'");
        }
        detail::check_model(*models.intensity[d], TaskKind::intensity);
    }
    if (!models.emotion) throw_config("missing emotion model for task 'E-c'");
    detail::check_model(*models.emotion, TaskKind::emotion);
    if (models.valence) detail::check_model(*models.valence, TaskKind::valence);

    ProfileReport report;
    for (std::size_t c = 0; c < kCategoryNames.size(); ++c) {
        if (c == static_cast<std::size_t>(SexismCategory::information_threat) &&
            !include_information_threat) {
            continue;
        }
        const auto& records = corpus.by_category[c];
        CategoryProfile profile;
        profile.category = std::string(kCategoryNames[c]);
        profile.size = records.size();
        for (auto& v : profile.intensity) v.assign(4, 0);
        profile.emotion.assign(kEmotionNames.size(), 0);
        if (models.valence) profile.valence = std::vector<std::size_t>(7, 0);

        for (const auto& rec : records) {
            for (std::size_t d = 0; d < models.intensity.size(); ++d) {
                const ModelArtifact& m = *models.intensity[d];
                detail::EncodedTweet enc = detail::encode_for(
                    rec.text, prep, resolve_embedding(embeddings, m.embedding_name), oov);
                std::size_t klass = m.predict_class(enc.flat, enc.seq);
                profile.intensity[d].at(klass) += 1;
            }
            {
                const ModelArtifact& m = *models.emotion;
                detail::EncodedTweet enc = detail::encode_for(
                    rec.text, prep, resolve_embedding(embeddings, m.embedding_name), oov);
                std::vector<std::uint8_t> bits = m.predict_labels(enc.flat, enc.seq);
                bool any = false;
                for (std::size_t k = 0; k < bits.size(); ++k) {
                    if (bits[k]) {
                        profile.emotion[k] += 1;
                        any = true;
                    }
                }
                if (!any) profile.emotion_unlabeled += 1;
            }
            if (models.valence) {
                const ModelArtifact& m = *models.valence;
                detail::EncodedTweet enc = detail::encode_for(
                    rec.text, prep, resolve_embedding(embeddings, m.embedding_name), oov);
                profile.valence->at(m.predict_class(enc.flat, enc.seq)) += 1;
            }
        }
        report.categories.push_back(std::move(profile));
    }
    return report;
}

namespace detail {

inline std::string join_counts(const std::vector<std::size_t>& counts) {
    std::ostringstream os;
    for (std::size_t i = 0; i < counts.size(); ++i) os << (i ? "/" : "") << counts[i];
    return os.str();
}

inline std::string title_case_category(const std::string& name) {
    std::string out = name;
    bool start = true;
    for (char& c : out) {
        if (start && c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
        start = (c == ' ');
    }
    return out;
}

} // namespace detail

// Markdown mirrors the published row layout: one block per category with the
// four intensity rows, then the 11-slot emotion row.
inline std::string render_report_markdown(const ProfileReport& report) {
    std::ostringstream os;
    os << "# Emotion profile by category\n\n";
    os << "| Category | Measure | Counts |\n|---|---|---|\n";
    for (const auto& cat : report.categories) {
        std::string title = detail::title_case_category(cat.category) + " (" +
                            std::to_string(cat.size) + ")";
        for (std::size_t d = 0; d < cat.intensity.size(); ++d) {
            os << "| " << (d == 0 ? title : "") << " | Emotion intensity of "
               << kIntensityDimensions[d] << "(0/1/2/3) | (" << detail::join_counts(cat.intensity[d])
               << ") |\n";
        }
        if (cat.valence) {
            os << "|  | Valence(-3..3) | (" << detail::join_counts(*cat.valence) << ") |\n";
        }
    }
    os << "\n## Emotion types\n\n";
    os << "| Category | Emotion(";
    for (std::size_t k = 0; k < kEmotionNames.size(); ++k) os << (k ? "/" : "") << kEmotionNames[k];
    os << ") | Unlabeled |\n|---|---|---|\n";
    for (const auto& cat : report.categories) {
        os << "| " << detail::title_case_category(cat.category) << "(" << cat.size << ") | ("
           << detail::join_counts(cat.emotion) << ") | " << cat.emotion_unlabeled << " |\n";
    }
    return os.str();
}

// CSV: one row per (category, measure, class).
inline std::string render_report_csv(const ProfileReport& report) {
    std::ostringstream os;
    os << "category,measure,class,count\n";
    for (const auto& cat : report.categories) {
        for (std::size_t d = 0; d < cat.intensity.size(); ++d) {
            for (std::size_t klass = 0; klass < cat.intensity[d].size(); ++klass) {
                os << cat.category << ",intensity:" << kIntensityDimensions[d] << ',' << klass
                   << ',' << cat.intensity[d][klass] << '\n';
            }
        }
        for (std::size_t k = 0; k < cat.emotion.size(); ++k) {
            os << cat.category << ",emotion," << kEmotionNames[k] << ',' << cat.emotion[k] << '\n';
        }
        os << cat.category << ",emotion,unlabeled," << cat.emotion_unlabeled << '\n';
        if (cat.valence) {
            for (std::size_t v = 0; v < cat.valence->size(); ++v) {
                os << cat.category << ",valence," << (static_cast<int>(v) - 3) << ','
                   << (*cat.valence)[v] << '\n';
            }
        }
        os << cat.category << ",size,," << cat.size << '\n';
    }
    return os.str();
}

} // namespace affect
