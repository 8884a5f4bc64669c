#pragma once
// Paradigmatic (shared-context) dissimilarity between words over an interval
// of context positions, and the similarity s = 1 - delta derived from it.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "spectext/counts.hpp"
#include "spectext/format.hpp"

namespace spectext {

struct ParadigmaticConfig {
    std::vector<int> interval{-1, 1};
    std::vector<double> weights{0.5, 0.5};
    BoundaryPolicy policy = BoundaryPolicy::truncate;

    static ParadigmaticConfig uniform(std::vector<int> positions, BoundaryPolicy policy = BoundaryPolicy::truncate) {
        ParadigmaticConfig c;
        c.weights.assign(positions.size(), positions.empty() ? 0.0 : 1.0 / static_cast<double>(positions.size()));
        c.interval = std::move(positions);
        c.policy = policy;
        return c;
    }

    /// Every position in [k1, k2], uniformly weighted.
    static ParadigmaticConfig range(int k1, int k2, BoundaryPolicy policy = BoundaryPolicy::truncate) {
        if (k2 < k1) throw std::invalid_argument("empty context interval");
        std::vector<int> ks(static_cast<std::size_t>(k2 - k1 + 1));
        std::iota(ks.begin(), ks.end(), k1);
        return uniform(std::move(ks), policy);
    }

    void validate() const {
        if (interval.empty()) throw std::invalid_argument("context interval is empty");
        if (weights.size() != interval.size()) throw std::invalid_argument("one weight per context position required");
        double total = 0.0;
        for (double w : weights) {
            if (!(w >= 0.0)) throw std::invalid_argument("context weights must be nonnegative");
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("context weights must sum to 1");
        for (std::size_t a = 0; a < interval.size(); ++a)
            for (std::size_t b = a + 1; b < interval.size(); ++b)
                if (interval[a] == interval[b]) throw std::invalid_argument("duplicate context position");
    }
};

/// Dense symmetric dissimilarity over a subset of the vocabulary; row r of
/// `values` belongs to word `ids[r]`.
struct DissimilarityMatrix {
    std::vector<WordId> ids;
    Eigen::MatrixXd values;
    std::size_t vocabulary_size = 0;
    std::vector<int> interval;
    BoundaryPolicy policy = BoundaryPolicy::truncate;

    std::size_t dim() const { return ids.size(); }
};

/// sum_x |c_k(i,x) - c_k(j,x)| / sum_x (c_k(i,x) + c_k(j,x)); zero when both
/// context rows are empty.
inline double positional_dissimilarity(const ContextMatrix& c, WordId i, WordId j) {
    if (i >= c.dim() || j >= c.dim()) throw std::out_of_range("word id outside context matrix");
    const auto a = c.counts.row(i);
    const auto b = c.counts.row(j);
    std::uint64_t diff = 0, total = 0;
    std::size_t p = 0, q = 0;
    while (p < a.size() || q < b.size()) {
        if (q == b.size() || (p < a.size() && a[p].col < b[q].col)) {
            diff += a[p].value;
            total += a[p].value;
            ++p;
        } else if (p == a.size() || b[q].col < a[p].col) {
            diff += b[q].value;
            total += b[q].value;
            ++q;
        } else {
            const auto x = a[p].value, y = b[q].value;
            diff += x > y ? x - y : y - x;
            total += x + y;
            ++p;
            ++q;
        }
    }
    if (total == 0) return 0.0;
    return static_cast<double>(diff) / static_cast<double>(total);
}

/// Weighted sum of positional dissimilarities over the configured interval.
/// `subset` restricts rows/columns to the given ids (all words when empty).
inline DissimilarityMatrix dissimilarity_matrix(const TokenizedCorpus& corpus, const ParadigmaticConfig& config,
                                                std::span<const WordId> subset = {}) {
    config.validate();
    DissimilarityMatrix out;
    out.vocabulary_size = corpus.vocabulary.size();
    out.interval = config.interval;
    out.policy = config.policy;
    if (subset.empty()) {
        out.ids.resize(out.vocabulary_size);
        std::iota(out.ids.begin(), out.ids.end(), WordId{0});
    } else {
        out.ids.assign(subset.begin(), subset.end());
        for (auto id : out.ids)
            if (id >= out.vocabulary_size) throw std::out_of_range("subset id outside vocabulary");
    }

    const auto n = static_cast<Eigen::Index>(out.ids.size());
    out.values = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t pos = 0; pos < config.interval.size(); ++pos) {
        const double weight = config.weights[pos];
        if (weight == 0.0) continue;
        const auto c = context_matrix(corpus, config.interval[pos], config.policy);
        for (Eigen::Index r = 0; r < n; ++r) {
            for (Eigen::Index s = r + 1; s < n; ++s) {
                const double d = weight * positional_dissimilarity(c, out.ids[static_cast<std::size_t>(r)],
                                                                   out.ids[static_cast<std::size_t>(s)]);
                out.values(r, s) += d;
                out.values(s, r) += d;
            }
        }
    }
    return out;
}

/// s(i,j) = 1 - delta(i,j). Throws RangeError for entries outside [0,1]
/// beyond rounding slack, which means the weights were not normalized.
inline Eigen::MatrixXd similarity_matrix(const DissimilarityMatrix& delta) {
    constexpr double slack = 1e-12;
    Eigen::MatrixXd s(delta.values.rows(), delta.values.cols());
    for (Eigen::Index r = 0; r < s.rows(); ++r) {
        for (Eigen::Index c = 0; c < s.cols(); ++c) {
            const double d = delta.values(r, c);
            if (!(d >= -slack && d <= 1.0 + slack)) throw RangeError("dissimilarity outside [0,1]: " + format_double(d));
            s(r, c) = 1.0 - std::clamp(d, 0.0, 1.0);
        }
    }
    return s;
}

/// Triplet dump in vocabulary ids, header "nt positions policy".
inline void write_triplets(std::ostream& out, const DissimilarityMatrix& delta) {
    write_triplet_header(out, delta.vocabulary_size, delta.interval, delta.policy);
    for (Eigen::Index r = 0; r < delta.values.rows(); ++r)
        for (Eigen::Index c = 0; c < delta.values.cols(); ++c)
            if (delta.values(r, c) != 0.0)
                out << delta.ids[static_cast<std::size_t>(r)] << ' ' << delta.ids[static_cast<std::size_t>(c)] << ' '
                    << format_double(delta.values(r, c)) << '\n';
}

/// One row per unordered pair of distinct words in the matrix.
inline void write_pairs_csv(std::ostream& out, const DissimilarityMatrix& delta, const Vocabulary& vocabulary) {
    const Eigen::MatrixXd s = similarity_matrix(delta);
    out << "word_i,word_j,delta,similarity\n";
    for (Eigen::Index r = 0; r < delta.values.rows(); ++r)
        for (Eigen::Index c = r + 1; c < delta.values.cols(); ++c)
            out << csv_field(vocabulary.types[delta.ids[static_cast<std::size_t>(r)]]) << ','
                << csv_field(vocabulary.types[delta.ids[static_cast<std::size_t>(c)]]) << ','
                << format_double(delta.values(r, c)) << ',' << format_double(s(r, c)) << '\n';
}

}  // namespace spectext
