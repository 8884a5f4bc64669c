#pragma once
// Synthetic corpora from explicit coupled Markov chains, and scoring of how
// well a spectral axis separates the chains' vocabularies.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "spectext/corpus.hpp"
#include "spectext/error.hpp"
#include "spectext/format.hpp"
#include "spectext/spectral.hpp"

namespace spectext {

/// Identifier of the random source, recorded in generated-corpus metadata.
inline constexpr std::string_view kRandomSourceId = "mt19937_64/u53-rejection";

/// Portable random source: std::mt19937_64 has a fully specified output
/// sequence, and the conversions below avoid the implementation-defined
/// standard distributions.
class WalkRandom {
public:
    explicit WalkRandom(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [0, n).
    std::size_t index(std::size_t n) {
        if (n == 0) throw std::invalid_argument("index range is empty");
        const std::uint64_t range = n;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return static_cast<std::size_t>(x % range);
    }

private:
    std::mt19937_64 engine_;
};

struct ChainSpec {
    std::vector<std::string> states;
    std::vector<std::vector<double>> transitions;
    std::vector<int> labels;  // ground-truth class per state

    void validate() const {
        if (states.empty()) throw std::invalid_argument("chain has no states");
        if (transitions.size() != states.size()) throw std::invalid_argument("chain needs one transition row per state");
        if (labels.size() != states.size()) throw std::invalid_argument("chain needs one label per state");
        for (const auto& row : transitions) {
            if (row.size() != states.size()) throw std::invalid_argument("transition row has wrong length");
            double total = 0.0;
            for (double p : row) {
                if (!(p >= 0.0)) throw std::invalid_argument("transition probabilities must be nonnegative");
                total += p;
            }
            if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("transition row does not sum to 1");
        }
    }
};

struct MixSpec {
    std::vector<ChainSpec> chains;
    double cross_probability = 0.02;
    std::uint64_t seed = 1;
    std::size_t length = 10000;

    void validate() const {
        if (chains.empty()) throw std::invalid_argument("mix has no chains");
        for (const auto& c : chains) c.validate();
        if (!(cross_probability > 0.0 && cross_probability < 1.0))
            throw std::invalid_argument("cross_probability must lie in (0,1)");
        if (length == 0) throw std::invalid_argument("length must be positive");
    }

    std::size_t state_count() const {
        std::size_t n = 0;
        for (const auto& c : chains) n += c.states.size();
        return n;
    }
};

struct ChainState {
    std::size_t chain = 0;
    std::size_t state = 0;
    friend bool operator==(const ChainState&, const ChainState&) = default;
};

/// Random walk over the coupled chain. The start is a uniform chain and a
/// uniform state in it. At each step, with probability cross_probability the
/// walk jumps to a uniform state of a uniformly chosen other chain; otherwise
/// it follows the current chain's transition row.
inline std::vector<ChainState> walk(const MixSpec& mix) {
    mix.validate();
    WalkRandom rng(mix.seed);
    std::vector<ChainState> out;
    out.reserve(mix.length);

    ChainState at;
    at.chain = rng.index(mix.chains.size());
    at.state = rng.index(mix.chains[at.chain].states.size());
    out.push_back(at);

    while (out.size() < mix.length) {
        const double u = rng.uniform();
        if (mix.chains.size() > 1 && u < mix.cross_probability) {
            std::size_t target = rng.index(mix.chains.size() - 1);
            if (target >= at.chain) ++target;
            at.chain = target;
            at.state = rng.index(mix.chains[at.chain].states.size());
        } else {
            const auto& row = mix.chains[at.chain].transitions[at.state];
            double r = rng.uniform();
            std::size_t next = row.size() - 1;
            for (std::size_t j = 0; j < row.size(); ++j) {
                if (r < row[j]) {
                    next = j;
                    break;
                }
                r -= row[j];
            }
            // rounding may exhaust r; skip trailing zero-probability states
            while (row[next] == 0.0 && next > 0) --next;
            at.state = next;
        }
        out.push_back(at);
    }
    return out;
}

/// Space-separated token stream of the walk.
inline std::string generate(const MixSpec& mix) {
    std::string text;
    for (const auto& s : walk(mix)) {
        if (!text.empty()) text += ' ';
        text += mix.chains[s.chain].states[s.state];
    }
    return text;
}

/// The coupled transition matrix the walk follows, over states flattened in
/// chain order.
inline Eigen::MatrixXd effective_transitions(const MixSpec& mix) {
    mix.validate();
    const auto n = static_cast<Eigen::Index>(mix.state_count());
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    std::vector<Eigen::Index> base;
    Eigen::Index offset = 0;
    for (const auto& c : mix.chains) {
        base.push_back(offset);
        offset += static_cast<Eigen::Index>(c.states.size());
    }
    const bool coupled = mix.chains.size() > 1;
    const double stay = coupled ? 1.0 - mix.cross_probability : 1.0;
    for (std::size_t c = 0; c < mix.chains.size(); ++c) {
        const auto& chain = mix.chains[c];
        for (std::size_t s = 0; s < chain.states.size(); ++s) {
            const auto row = base[c] + static_cast<Eigen::Index>(s);
            for (std::size_t t = 0; t < chain.states.size(); ++t)
                p(row, base[c] + static_cast<Eigen::Index>(t)) += stay * chain.transitions[s][t];
            if (!coupled) continue;
            const double per_chain = mix.cross_probability / static_cast<double>(mix.chains.size() - 1);
            for (std::size_t o = 0; o < mix.chains.size(); ++o) {
                if (o == c) continue;
                const double per_state = per_chain / static_cast<double>(mix.chains[o].states.size());
                for (std::size_t t = 0; t < mix.chains[o].states.size(); ++t)
                    p(row, base[o] + static_cast<Eigen::Index>(t)) += per_state;
            }
        }
    }
    return p;
}

/// Label of each emitted word; a word emitted by states carrying different
/// labels is shared and gets -1.
inline std::map<std::string, int> truth_labels(const MixSpec& mix) {
    std::map<std::string, int> labels;
    for (const auto& c : mix.chains) {
        for (std::size_t s = 0; s < c.states.size(); ++s) {
            auto [it, inserted] = labels.emplace(c.states[s], c.labels[s]);
            if (!inserted && it->second != c.labels[s]) it->second = -1;
        }
    }
    return labels;
}

/// Re-keys labels under a tokenization config (e.g. case folding), so they
/// match vocabulary types. Each key must tokenize to exactly one token.
inline std::map<std::string, int> normalize_labels(const std::map<std::string, int>& labels,
                                                   const TokenizationConfig& config) {
    std::map<std::string, int> out;
    for (const auto& [word, label] : labels) {
        auto toks = tokenize(word, config);
        if (toks.size() != 1) throw ParseError("label key is not a single token: " + word);
        auto [it, inserted] = out.emplace(toks.front(), label);
        if (!inserted && it->second != label) it->second = -1;
    }
    return out;
}

/// Fraction of labelled words whose coordinate sign on `axis` agrees with
/// their class, under the better of the two class-to-sign assignments.
/// Words labelled -1 (shared) and the unknown-word type are not scored.
inline double separation_accuracy(const SpectralResult& result, const Vocabulary& vocabulary,
                                  const std::map<std::string, int>& truth, Eigen::Index axis) {
    if (axis < 2) throw std::invalid_argument("separation axis must be >= 2");
    const Eigen::VectorXd y = result.axis(axis);
    if (static_cast<std::size_t>(y.size()) != vocabulary.size())
        throw std::invalid_argument("spectral result does not match vocabulary");

    std::vector<int> seen_labels;
    std::size_t scored = 0, agree = 0;
    for (std::size_t i = 0; i < vocabulary.size(); ++i) {
        if (vocabulary.unk && *vocabulary.unk == i) continue;
        auto it = truth.find(vocabulary.types[i]);
        if (it == truth.end()) throw MissingLabel("no label for word: " + vocabulary.types[i]);
        if (it->second < 0) continue;
        if (std::find(seen_labels.begin(), seen_labels.end(), it->second) == seen_labels.end())
            seen_labels.push_back(it->second);
        if (seen_labels.size() > 2) throw std::invalid_argument("sign separation scores exactly two classes");
        const bool positive = y[static_cast<Eigen::Index>(i)] >= 0.0;
        const bool first_class = it->second == seen_labels.front();
        ++scored;
        if (positive == first_class) ++agree;
    }
    if (scored == 0) throw std::invalid_argument("no labelled words to score");
    const double a = static_cast<double>(agree) / static_cast<double>(scored);
    return std::max(a, 1.0 - a);
}

// ---------------------------------------------------------------------------
// Plain-text formats.
//
// Mix config:
//   # comment
//   cross_probability = 0.02
//   seed = 7
//   length = 10000
//   chain = GA BU          (state names; starts a new chain)
//   labels = 0 0           (optional; defaults to the chain index)
//   0.3 0.7                (one transition row per line)
//   0.3 0.7
//
// Label file: one "word label" pair per line, -1 marks a shared word.

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <class T>
std::vector<T> split_values(const std::string& s) {
    std::istringstream in(s);
    std::vector<T> out;
    T v;
    while (in >> v) out.push_back(v);
    if (!in.eof()) throw ParseError("malformed value list");
    return out;
}

}  // namespace detail

inline MixSpec parse_mix_spec(std::istream& in) {
    MixSpec mix;
    std::string raw;
    int line_no = 0;
    bool labels_given = false;
    auto finish_chain = [&] {
        if (mix.chains.empty()) return;
        auto& c = mix.chains.back();
        if (!labels_given) c.labels.assign(c.states.size(), static_cast<int>(mix.chains.size() - 1));
    };
    while (std::getline(in, raw)) {
        ++line_no;
        auto line = detail::trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        const auto key = eq == std::string::npos ? std::string() : detail::trim(std::string_view(line).substr(0, eq));
        const auto value = eq == std::string::npos ? line : detail::trim(std::string_view(line).substr(eq + 1));
        try {
            if (eq == std::string::npos) {
                if (mix.chains.empty()) throw ParseError("matrix row before any chain");
                mix.chains.back().transitions.push_back(detail::split_values<double>(value));
            } else if (key == "cross_probability") {
                mix.cross_probability = std::stod(value);
            } else if (key == "seed") {
                mix.seed = std::stoull(value);
            } else if (key == "length") {
                mix.length = std::stoull(value);
            } else if (key == "chain") {
                finish_chain();
                labels_given = false;
                mix.chains.emplace_back().states = detail::split_values<std::string>(value);
            } else if (key == "labels") {
                if (mix.chains.empty()) throw ParseError("labels before any chain");
                mix.chains.back().labels = detail::split_values<int>(value);
                labels_given = true;
            } else {
                throw ParseError("unknown key '" + key + "'");
            }
        } catch (const std::logic_error&) {
            throw ParseError("line " + std::to_string(line_no) + ": bad value '" + value + "'");
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    finish_chain();
    try {
        mix.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("invalid mix config: ") + e.what());
    }
    return mix;
}

inline void write_mix_spec(std::ostream& out, const MixSpec& mix) {
    out << "cross_probability = " << format_double(mix.cross_probability) << '\n';
    out << "seed = " << mix.seed << '\n';
    out << "length = " << mix.length << '\n';
    for (const auto& c : mix.chains) {
        out << "chain =";
        for (const auto& s : c.states) out << ' ' << s;
        out << "\nlabels =";
        for (int l : c.labels) out << ' ' << l;
        out << '\n';
        for (const auto& row : c.transitions) {
            for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << format_double(row[j]);
            out << '\n';
        }
    }
}

inline std::map<std::string, int> parse_labels(std::istream& in) {
    std::map<std::string, int> labels;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        auto line = detail::trim(raw);
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string word;
        int label;
        if (!(fields >> word >> label)) throw ParseError("line " + std::to_string(line_no) + ": expected 'word label'");
        labels[word] = label;
    }
    return labels;
}

inline void write_labels(std::ostream& out, const std::map<std::string, int>& labels) {
    for (const auto& [word, label] : labels) out << word << ' ' << label << '\n';
}

/// The two-author example: a GA/BU chain and a ZO/MEU chain coupled at 2%.
/// Intra-chain rows are illustrative: BU tends to repeat (internal eigenvalue
/// +0.15), ZO and MEU tend to alternate (-0.15), so each chain owns a
/// distinct eigen-axis after the chain-separating one.
inline MixSpec gabu_zomeu(std::size_t length = 10000, std::uint64_t seed = 2006, double cross = 0.02) {
    MixSpec mix;
    mix.chains.push_back({{"GA", "BU"}, {{0.4, 0.6}, {0.25, 0.75}}, {0, 0}});
    mix.chains.push_back({{"ZO", "MEU"}, {{0.45, 0.55}, {0.6, 0.4}}, {1, 1}});
    mix.cross_probability = cross;
    mix.seed = seed;
    mix.length = length;
    return mix;
}

}  // namespace spectext
