#pragma once
// Shared generators and independent oracles for the test suites.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "spectext/spectext.hpp"

namespace spectext::testing {

inline TokenizedCorpus corpus_of(std::vector<std::string> texts, TokenizationConfig config = {}) {
    return build_corpus(texts, config);
}

/// Letters-only word name for index n, so alphabetic tokenization keeps it whole.
inline std::string word_name(std::size_t n, char prefix = 'w') {
    std::string s(1, prefix);
    do {
        s += static_cast<char>('a' + n % 26);
        n /= 26;
    } while (n);
    return s;
}

/// Random corpus over words word_name(0..vocab-1): 1..max_texts texts whose total
/// length is at most max_len tokens.
inline std::vector<std::string> random_texts(std::mt19937_64& rng, std::size_t max_vocab = 20,
                                             std::size_t max_len = 200, std::size_t max_texts = 3) {
    std::uniform_int_distribution<std::size_t> vocab_dist(1, max_vocab);
    std::uniform_int_distribution<std::size_t> texts_dist(1, max_texts);
    const auto vocab = vocab_dist(rng);
    const auto n_texts = texts_dist(rng);
    std::uniform_int_distribution<std::size_t> len_dist(1, std::max<std::size_t>(1, max_len / n_texts));
    std::uniform_int_distribution<std::size_t> word_dist(0, vocab - 1);
    std::vector<std::string> texts;
    for (std::size_t t = 0; t < n_texts; ++t) {
        std::string text;
        const auto len = len_dist(rng);
        for (std::size_t p = 0; p < len; ++p) {
            if (p) text += ' ';
            text += word_name(word_dist(rng));
        }
        texts.push_back(text);
    }
    return texts;
}

inline TokenizedCorpus random_corpus(std::mt19937_64& rng, std::size_t max_vocab = 20, std::size_t max_len = 200,
                                     std::size_t max_texts = 3) {
    return build_corpus(random_texts(rng, max_vocab, max_len, max_texts), TokenizationConfig{});
}

/// Context count by enumerating every ordered pair of positions in a chain
/// and keeping those at signed offset k (mod length under wrap).
inline std::uint64_t brute_context_count(const TokenizedCorpus& corpus, int k, BoundaryPolicy policy, WordId i,
                                         WordId j) {
    std::uint64_t n = 0;
    for (const auto& seq : corpus.sequences) {
        const auto len = static_cast<long long>(seq.size());
        for (long long p = 0; p < len; ++p) {
            for (long long q = 0; q < len; ++q) {
                bool at_offset = false;
                if (policy == BoundaryPolicy::truncate) {
                    at_offset = q - p == k;
                } else {
                    at_offset = (((q - p - k) % len) + len) % len == 0;
                }
                if (at_offset && seq[p] == i && seq[q] == j) ++n;
            }
        }
    }
    return n;
}

/// Row-stochastic random rows over n states, entries bounded away from zero.
inline std::vector<std::vector<double>> random_rows(std::mt19937_64& rng, std::size_t n, double floor = 0.2) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<double>> rows(n, std::vector<double>(n));
    for (auto& row : rows) {
        double total = 0.0;
        for (auto& x : row) total += (x = u(rng) + floor);
        for (auto& x : row) x /= total;
        // make the row sum exactly representable as 1 up to rounding of the last entry
        double head = 0.0;
        for (std::size_t j = 0; j + 1 < n; ++j) head += row[j];
        row.back() = 1.0 - head;
    }
    return rows;
}

/// Two chains with `size` private words each (prefixes 'p'/'q') plus the
/// `shared` words present in both.
inline MixSpec bilingual_mix(std::size_t size, const std::vector<std::string>& shared, double cross,
                             std::size_t length, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    MixSpec mix;
    for (int c = 0; c < 2; ++c) {
        ChainSpec chain;
        for (std::size_t s = 0; s < size; ++s) chain.states.push_back(word_name(s, c == 0 ? 'p' : 'q'));
        for (const auto& w : shared) chain.states.push_back(w);
        chain.transitions = random_rows(rng, chain.states.size());
        chain.labels.assign(chain.states.size(), c);
        mix.chains.push_back(std::move(chain));
    }
    mix.cross_probability = cross;
    mix.length = length;
    mix.seed = seed;
    return mix;
}

inline std::string decode_entities(const std::string& s) {
    std::string d;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '&') {
            d += s[i];
            continue;
        }
        const auto semi = s.find(';', i);
        const auto ent = s.substr(i, semi - i + 1);
        if (ent == "&amp;") d += '&';
        else if (ent == "&lt;") d += '<';
        else if (ent == "&gt;") d += '>';
        else if (ent == "&quot;") d += '"';
        else if (ent == "&#39;") d += '\'';
        i = semi;
    }
    return d;
}

/// Content of every <span class="w" ...>...</span>, entities decoded.
inline std::vector<std::string> extract_token_spans(const std::string& html) {
    std::vector<std::string> out;
    const std::string open = "<span class=\"w\"";
    std::size_t pos = 0;
    while ((pos = html.find(open, pos)) != std::string::npos) {
        const auto start = html.find('>', pos) + 1;
        const auto end = html.find("</span>", start);
        out.push_back(decode_entities(html.substr(start, end - start)));
        pos = end;
    }
    return out;
}

/// Body of each text block with every tag removed and entities decoded.
inline std::vector<std::string> stripped_texts(const std::string& html) {
    std::vector<std::string> out;
    const std::string open = "<div class=\"text\"";
    std::size_t pos = 0;
    while ((pos = html.find(open, pos)) != std::string::npos) {
        const auto start = html.find('>', pos) + 1;
        const auto end = html.find("</div>", start);
        std::string plain;
        for (std::size_t i = start; i < end; ++i) {
            if (html[i] == '<')
                i = html.find('>', i);
            else
                plain += html[i];
        }
        out.push_back(decode_entities(plain));
        pos = end;
    }
    return out;
}

}  // namespace spectext::testing
