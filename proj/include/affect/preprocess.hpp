#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "affect/common.hpp"
#include "affect/lemma_data.hpp"

namespace affect {

// Tweet cleaning, lemmatization and fixed-length padding. Every function in
// this header is a pure function of its arguments.

struct PreprocessConfig {
    std::size_t max_len = 40;
    std::string pad_token = "<pad>"; // contains punctuation, cannot collide with a real token

    // Ordered (suffix, replacement) pairs; the first match whose result keeps
    // at least min_stem_len characters wins. Identity pairs act as stop rules.
    std::vector<std::pair<std::string, std::string>> suffix_rules = {
        {"sses", "ss"}, {"ches", "ch"}, {"shes", "sh"}, {"xes", "x"},
        {"ies", "y"},   {"ied", "y"},   {"ss", "ss"},   {"s", ""},
        {"ing", ""},    {"ed", ""},
    };
    std::size_t min_stem_len = 3;

    // Exception lookup precedes the suffix rules.
    std::unordered_map<std::string, std::string> lemma_exceptions = default_lemma_exceptions();

    // Inclusive codepoint intervals treated as emoji: Emoticons, Misc Symbols
    // & Pictographs, Transport & Map, Supplemental Symbols & Pictographs.
    std::vector<std::pair<char32_t, char32_t>> emoji_ranges = {
        {0x1F600, 0x1F64F}, {0x1F300, 0x1F5FF}, {0x1F680, 0x1F6FF}, {0x1F900, 0x1F9FF},
    };

    static std::unordered_map<std::string, std::string> default_lemma_exceptions() {
        std::unordered_map<std::string, std::string> m;
        m.reserve(std::size(detail::kLemmaExceptions));
        for (const auto& [word, lemma] : detail::kLemmaExceptions) {
            m.emplace(std::string(word), std::string(lemma));
        }
        return m;
    }

    // Two-column TSV: token TAB lemma, UTF-8, '#'-prefixed comment lines ignored.
    void load_lemma_exceptions(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw_config("cannot open lemma exception table '" + path + "'");
        lemma_exceptions.clear();
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line.front() == '#') continue;
            auto tab = line.find('\t');
            if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
                throw_config("lemma table '" + path + "' line " + std::to_string(lineno) +
                             ": expected 'token<TAB>lemma'");
            }
            lemma_exceptions.emplace(line.substr(0, tab), line.substr(tab + 1));
        }
    }
};

struct TokenSequence {
    std::vector<std::string> tokens; // exactly max_len entries, PAD suffix
    std::size_t true_length = 0;

    bool operator==(const TokenSequence&) const = default;
};

namespace detail {

// Minimal UTF-8 decode; malformed bytes are dropped.
inline std::vector<char32_t> decode_utf8(std::string_view s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char b = static_cast<unsigned char>(s[i]);
        char32_t cp = 0;
        std::size_t len = 0;
        if (b < 0x80) {
            cp = b;
            len = 1;
        } else if ((b >> 5) == 0x6) {
            cp = b & 0x1F;
            len = 2;
        } else if ((b >> 4) == 0xE) {
            cp = b & 0x0F;
            len = 3;
        } else if ((b >> 3) == 0x1E) {
            cp = b & 0x07;
            len = 4;
        } else {
            ++i;
            continue;
        }
        if (i + len > s.size()) break;
        bool ok = true;
        for (std::size_t k = 1; k < len; ++k) {
            unsigned char c = static_cast<unsigned char>(s[i + k]);
            if ((c >> 6) != 0x2) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (c & 0x3F);
        }
        i += ok ? len : 1;
        if (ok) out.push_back(cp);
    }
    return out;
}

inline void encode_utf8(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline bool is_space_cp(char32_t cp) { return cp == U' ' || cp < 0x20 || cp == 0x7F || cp == 0xA0; }

inline bool is_ascii_punct(char32_t cp) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
}

// General punctuation commonly pasted from phone keyboards.
inline bool is_unicode_punct(char32_t cp) {
    return (cp >= 0x2010 && cp <= 0x2027) || cp == 0x2026 || cp == 0x00AB || cp == 0x00BB ||
           cp == 0x00A1 || cp == 0x00BF;
}

inline bool is_apostrophe(char32_t cp) { return cp == U'\'' || cp == 0x2019 || cp == 0x02BC; }

inline bool in_ranges(char32_t cp, const std::vector<std::pair<char32_t, char32_t>>& ranges) {
    for (const auto& [lo, hi] : ranges) {
        if (cp >= lo && cp <= hi) return true;
    }
    return false;
}

// URL segments: scheme:// anywhere, or a t.co/ / www. prefix.
inline bool is_url_segment(const std::vector<char32_t>& seg) {
    std::string ascii;
    for (char32_t cp : seg) ascii.push_back(cp < 0x80 ? static_cast<char>(cp) : '?');
    if (ascii.find("://") != std::string::npos) return true;
    if (ascii.rfind("t.co/", 0) == 0 || ascii.rfind("www.", 0) == 0) return true;
    return false;
}

// Mentions: first non-punctuation character is '@' (covers ".@user").
inline bool is_mention_segment(const std::vector<char32_t>& seg) {
    for (char32_t cp : seg) {
        if (cp == U'@') return true;
        if (!is_ascii_punct(cp) && !is_unicode_punct(cp)) return false;
    }
    return false;
}

} // namespace detail

// Lowercases, strips URLs, @-mentions, emoji and punctuation ('#' falls under
// punctuation, so hashtag bodies survive). Apostrophes are deleted in place
// ("can't" -> "cant"); other punctuation becomes a token boundary. Whitespace
// is collapsed to single spaces.
inline std::string clean(const std::string& raw, const PreprocessConfig& cfg = {}) {
    std::vector<char32_t> cps = detail::decode_utf8(raw);
    for (char32_t& cp : cps) {
        if (cp >= U'A' && cp <= U'Z') cp += 32;
    }

    // split into whitespace-delimited segments, drop URL/mention segments
    std::vector<std::vector<char32_t>> segments;
    std::vector<char32_t> current;
    auto flush = [&] {
        if (!current.empty()) {
            if (!detail::is_url_segment(current) && !detail::is_mention_segment(current)) {
                segments.push_back(current);
            }
            current.clear();
        }
    };
    for (char32_t cp : cps) {
        if (detail::is_space_cp(cp)) {
            flush();
        } else {
            current.push_back(cp);
        }
    }
    flush();

    std::string out;
    bool pending_space = false;
    auto emit_boundary = [&] {
        if (!out.empty()) pending_space = true;
    };
    for (const auto& seg : segments) {
        emit_boundary();
        for (char32_t cp : seg) {
            if (detail::is_apostrophe(cp)) continue;
            if (detail::in_ranges(cp, cfg.emoji_ranges) || detail::is_ascii_punct(cp) ||
                detail::is_unicode_punct(cp) || cp == 0xFE0F) {
                emit_boundary();
                continue;
            }
            if (pending_space) {
                out.push_back(' ');
                pending_space = false;
            }
            detail::encode_utf8(cp, out);
        }
    }
    return out;
}

inline std::vector<std::string> tokenize(const std::string& cleaned) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < cleaned.size()) {
        while (i < cleaned.size() && cleaned[i] == ' ') ++i;
        std::size_t start = i;
        while (i < cleaned.size() && cleaned[i] != ' ') ++i;
        if (i > start) tokens.push_back(cleaned.substr(start, i - start));
    }
    return tokens;
}

inline std::string lemmatize(const std::string& token, const PreprocessConfig& cfg = {}) {
    if (auto it = cfg.lemma_exceptions.find(token); it != cfg.lemma_exceptions.end()) {
        return it->second;
    }
    for (const auto& [suffix, replacement] : cfg.suffix_rules) {
        if (token.size() < suffix.size()) continue;
        if (token.compare(token.size() - suffix.size(), suffix.size(), suffix) != 0) continue;
        std::size_t result_len = token.size() - suffix.size() + replacement.size();
        if (result_len < cfg.min_stem_len) continue;
        return token.substr(0, token.size() - suffix.size()) + replacement;
    }
    return token;
}

inline TokenSequence pad_truncate(std::vector<std::string> tokens, const PreprocessConfig& cfg = {}) {
    TokenSequence seq;
    if (tokens.size() > cfg.max_len) tokens.resize(cfg.max_len);
    seq.true_length = tokens.size();
    tokens.resize(cfg.max_len, cfg.pad_token);
    seq.tokens = std::move(tokens);
    return seq;
}

inline TokenSequence preprocess(const std::string& raw, const PreprocessConfig& cfg = {}) {
    std::vector<std::string> tokens = tokenize(clean(raw, cfg));
    for (std::string& t : tokens) t = lemmatize(t, cfg);
    return pad_truncate(std::move(tokens), cfg);
}

} // namespace affect
