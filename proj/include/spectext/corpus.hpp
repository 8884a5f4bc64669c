#pragma once
// Raw text ingestion: tokenization into word-occurrences, vocabulary
// construction and the occurrence-index view of a corpus.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "spectext/error.hpp"

namespace spectext {

using WordId = std::uint32_t;

enum class TokenMode { alphabetic_only, extended_tokens };
enum class PruningPolicy { map_to_unk, break_chain };

struct TokenizationConfig {
    TokenMode mode = TokenMode::alphabetic_only;
    bool case_fold = true;
    std::size_t min_count = 1;
    PruningPolicy pruning = PruningPolicy::map_to_unk;

    void validate() const {
        if (min_count < 1) throw std::invalid_argument("min_count must be >= 1");
    }
};

/// Reserved type string for pruned words under PruningPolicy::map_to_unk.
/// Cannot collide with a token: '<' is neither a letter, a digit nor punctuation.
inline constexpr std::string_view kUnknownWord = "<unk>";

/// One word-occurrence located in its source text. `offset`/`length` are byte
/// positions of the surface form; `text` is the (possibly case-folded) type string.
struct Token {
    std::size_t offset = 0;
    std::size_t length = 0;
    std::string text;
};

struct Vocabulary {
    std::vector<std::string> types;
    std::vector<std::uint64_t> counts;
    std::optional<WordId> unk;

    std::size_t size() const { return types.size(); }

    std::uint64_t total() const {
        std::uint64_t n = 0;
        for (auto c : counts) n += c;
        return n;
    }

    std::optional<WordId> find(std::string_view word) const {
        if (index_.size() == types.size()) {
            auto it = index_.find(std::string(word));
            if (it == index_.end()) return std::nullopt;
            return it->second;
        }
        for (std::size_t i = 0; i < types.size(); ++i)
            if (types[i] == word) return static_cast<WordId>(i);
        return std::nullopt;
    }

    /// Rebuilds the lookup table after `types` has been edited directly.
    void reindex() {
        index_.clear();
        for (std::size_t i = 0; i < types.size(); ++i) index_.emplace(types[i], static_cast<WordId>(i));
    }

private:
    std::unordered_map<std::string, WordId> index_;
};

/// Corpus as chains of word ids. A chain is a maximal run of adjacent
/// occurrences: one per input text, or several when break_chain pruning cut a
/// text. Nothing is ever adjacent across chains.
struct TokenizedCorpus {
    std::vector<std::vector<WordId>> sequences;
    std::vector<std::size_t> origin;  // index of the input text each chain came from
    std::size_t text_count = 0;
    Vocabulary vocabulary;

    std::size_t total_tokens() const {
        std::size_t n = 0;
        for (const auto& s : sequences) n += s.size();
        return n;
    }

    std::size_t longest() const {
        std::size_t n = 0;
        for (const auto& s : sequences) n = std::max(n, s.size());
        return n;
    }

    /// Throws std::logic_error if an id is out of range or the counts disagree with the chains.
    void validate() const {
        const auto nt = vocabulary.size();
        if (vocabulary.counts.size() != nt) throw std::logic_error("vocabulary counts size mismatch");
        if (origin.size() != sequences.size()) throw std::logic_error("origin size mismatch");
        std::vector<std::uint64_t> recount(nt, 0);
        for (const auto& seq : sequences) {
            for (auto id : seq) {
                if (id >= nt) throw std::logic_error("word id out of vocabulary range");
                ++recount[id];
            }
        }
        if (recount != vocabulary.counts) throw std::logic_error("vocabulary counts do not match occurrences");
        std::unordered_map<std::string_view, int> seen;
        for (std::size_t i = 0; i < nt; ++i) {
            if (!seen.emplace(vocabulary.types[i], 0).second) throw std::logic_error("duplicate type string");
            if (recount[i] == 0) throw std::logic_error("vocabulary entry with zero count");
        }
    }
};

namespace detail {

inline void append_utf8(std::string& out, UChar32 c) {
    char buf[U8_MAX_LENGTH];
    int32_t n = 0;
    U8_APPEND_UNSAFE(buf, n, c);
    out.append(buf, static_cast<std::size_t>(n));
}

enum class CharClass { separator, letter, digit, punct };

inline CharClass classify(UChar32 c, TokenMode mode) {
    if (c < 0) return CharClass::separator;  // invalid UTF-8
    if (u_isalpha(c)) return CharClass::letter;
    if (mode == TokenMode::extended_tokens) {
        if (u_isdigit(c)) return CharClass::digit;
        if (u_ispunct(c)) return CharClass::punct;
    }
    return CharClass::separator;
}

}  // namespace detail

/// Splits raw UTF-8 text into located tokens. Letters are Unicode general
/// category L; extended mode adds decimal digit runs (Nd) and single
/// punctuation characters (P*). Everything else separates tokens.
inline std::vector<Token> tokenize_spans(std::string_view raw, const TokenizationConfig& config) {
    std::vector<Token> tokens;
    const auto* s = reinterpret_cast<const uint8_t*>(raw.data());
    const auto length = static_cast<int32_t>(raw.size());

    int32_t i = 0;
    std::optional<Token> current;
    auto current_class = detail::CharClass::separator;

    auto flush = [&](std::size_t end) {
        if (!current) return;
        current->length = end - current->offset;
        tokens.push_back(std::move(*current));
        current.reset();
    };

    while (i < length) {
        const int32_t start = i;
        UChar32 c;
        U8_NEXT(s, i, length, c);
        const auto cls = detail::classify(c, config.mode);
        const auto pos = static_cast<std::size_t>(start);

        if (cls == detail::CharClass::separator) {
            flush(pos);
            current_class = cls;
            continue;
        }
        const bool extends = current && cls == current_class && cls != detail::CharClass::punct;
        if (!extends) {
            flush(pos);
            current = Token{pos, 0, {}};
            current_class = cls;
        }
        detail::append_utf8(current->text, config.case_fold ? u_tolower(c) : c);
    }
    flush(raw.size());
    return tokens;
}

inline std::vector<std::string> tokenize(std::string_view raw, const TokenizationConfig& config) {
    std::vector<std::string> out;
    for (auto& t : tokenize_spans(raw, config)) out.push_back(std::move(t.text));
    return out;
}

/// Builds the vocabulary (ids in order of first occurrence) and the chains.
/// Throws EmptyCorpus if no token survives pruning.
inline TokenizedCorpus build_corpus(std::span<const std::string> texts, const TokenizationConfig& config) {
    config.validate();

    std::vector<std::vector<WordId>> raw_ids;
    raw_ids.reserve(texts.size());
    std::vector<std::string> types;
    std::vector<std::uint64_t> counts;
    std::unordered_map<std::string, WordId> index;

    for (const auto& text : texts) {
        auto& ids = raw_ids.emplace_back();
        for (auto& tok : tokenize(text, config)) {
            auto [it, inserted] = index.emplace(tok, static_cast<WordId>(types.size()));
            if (inserted) {
                types.push_back(std::move(tok));
                counts.push_back(0);
            }
            ++counts[it->second];
            ids.push_back(it->second);
        }
    }

    TokenizedCorpus corpus;
    corpus.text_count = texts.size();

    // remap[i] is the new id of raw type i, or nullopt if pruned
    std::vector<std::optional<WordId>> remap(types.size());
    bool any_pruned = false;
    for (std::size_t i = 0; i < types.size(); ++i) {
        if (counts[i] >= config.min_count) {
            remap[i] = static_cast<WordId>(corpus.vocabulary.types.size());
            corpus.vocabulary.types.push_back(types[i]);
            corpus.vocabulary.counts.push_back(0);
        } else {
            any_pruned = true;
        }
    }
    const bool use_unk = any_pruned && config.pruning == PruningPolicy::map_to_unk;
    if (use_unk) {
        corpus.vocabulary.unk = static_cast<WordId>(corpus.vocabulary.types.size());
        corpus.vocabulary.types.emplace_back(kUnknownWord);
        corpus.vocabulary.counts.push_back(0);
    }

    for (std::size_t t = 0; t < raw_ids.size(); ++t) {
        std::vector<WordId> chain;
        auto close_chain = [&] {
            if (!chain.empty()) {
                corpus.sequences.push_back(std::move(chain));
                corpus.origin.push_back(t);
                chain.clear();
            }
        };
        for (auto raw : raw_ids[t]) {
            std::optional<WordId> id = remap[raw];
            if (!id && use_unk) id = corpus.vocabulary.unk;
            if (!id) {
                close_chain();
                continue;
            }
            ++corpus.vocabulary.counts[*id];
            chain.push_back(*id);
        }
        close_chain();
    }

    if (corpus.total_tokens() == 0) throw EmptyCorpus();
    corpus.vocabulary.reindex();
    return corpus;
}

/// The `n` most frequent word ids, ties broken by type string; n is clamped to nt.
inline std::vector<WordId> top_frequent_ids(const Vocabulary& vocabulary, std::size_t n) {
    std::vector<WordId> ids(vocabulary.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<WordId>(i);
    std::sort(ids.begin(), ids.end(), [&](WordId a, WordId b) {
        if (vocabulary.counts[a] != vocabulary.counts[b]) return vocabulary.counts[a] > vocabulary.counts[b];
        return vocabulary.types[a] < vocabulary.types[b];
    });
    ids.resize(std::min(n, ids.size()));
    return ids;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read text file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct ManifestEntry {
    std::filesystem::path path;
    int line = 0;
};

/// One path per line; blank lines and lines starting with '#' are ignored.
/// Relative paths resolve against the manifest's directory.
inline std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest) {
    std::ifstream in(manifest);
    if (!in) throw Error("cannot read manifest: " + manifest.string());
    std::vector<ManifestEntry> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        std::filesystem::path p(line.substr(first));
        if (p.is_relative()) p = manifest.parent_path() / p;
        entries.push_back({p.lexically_normal(), line_no});
    }
    return entries;
}

/// Reads every manifest entry; errors carry "manifest:line" context.
inline std::vector<std::string> load_texts(const std::filesystem::path& manifest) {
    std::vector<std::string> texts;
    for (const auto& entry : read_manifest(manifest)) {
        try {
            texts.push_back(read_text_file(entry.path));
        } catch (const Error& e) {
            throw Error(manifest.string() + ":" + std::to_string(entry.line) + ": " + e.what());
        }
    }
    return texts;
}

}  // namespace spectext
