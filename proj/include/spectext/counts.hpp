#pragma once
// Context matrices C_k, symmetrized neighborhood matrices W_k and the
// row-stochastic transition matrix P = D^-1 W built from a TokenizedCorpus.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "spectext/corpus.hpp"
#include "spectext/format.hpp"

namespace spectext {

enum class BoundaryPolicy { truncate, wrap };

inline std::string to_string(BoundaryPolicy p) { return p == BoundaryPolicy::wrap ? "wrap" : "truncate"; }

inline BoundaryPolicy parse_boundary(std::string_view s) {
    if (s == "truncate") return BoundaryPolicy::truncate;
    if (s == "wrap") return BoundaryPolicy::wrap;
    throw std::invalid_argument("unknown boundary policy: " + std::string(s));
}

/// Immutable compressed-row matrix with sorted columns. Iteration order is
/// (row, column) ascending, which keeps every export bit-reproducible.
template <class T>
class SparseRows {
public:
    struct Entry {
        WordId col;
        T value;
    };
    using Key = std::pair<WordId, WordId>;

    SparseRows() = default;

    SparseRows(std::size_t dim, const std::map<Key, T>& entries) : dim_(dim), offsets_(dim + 1, 0) {
        entries_.reserve(entries.size());
        for (const auto& [key, value] : entries) {
            if (key.first >= dim || key.second >= dim) throw std::out_of_range("sparse entry outside matrix");
            if (value == T{}) continue;
            ++offsets_[key.first + 1];
            entries_.push_back({key.second, value});
        }
        for (std::size_t i = 0; i < dim; ++i) offsets_[i + 1] += offsets_[i];
    }

    std::size_t dim() const { return dim_; }
    std::size_t nonzeros() const { return entries_.size(); }

    std::span<const Entry> row(std::size_t i) const {
        return {entries_.data() + offsets_[i], entries_.data() + offsets_[i + 1]};
    }

    T at(std::size_t i, std::size_t j) const {
        auto r = row(i);
        auto it = std::lower_bound(r.begin(), r.end(), j, [](const Entry& e, std::size_t col) { return e.col < col; });
        return (it != r.end() && it->col == j) ? it->value : T{};
    }

    T row_sum(std::size_t i) const {
        T s{};
        for (const auto& e : row(i)) s += e.value;
        return s;
    }

    std::vector<T> col_sums() const {
        std::vector<T> s(dim_, T{});
        for (std::size_t i = 0; i < dim_; ++i)
            for (const auto& e : row(i)) s[e.col] += e.value;
        return s;
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t i = 0; i < dim_; ++i)
            for (const auto& e : row(i)) f(static_cast<WordId>(i), e.col, e.value);
    }

    friend bool operator==(const SparseRows& a, const SparseRows& b) {
        if (a.dim_ != b.dim_ || a.offsets_ != b.offsets_) return false;
        for (std::size_t n = 0; n < a.entries_.size(); ++n)
            if (a.entries_[n].col != b.entries_[n].col || a.entries_[n].value != b.entries_[n].value) return false;
        return true;
    }

private:
    std::size_t dim_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<Entry> entries_;
};

/// Directed co-occurrence counts at signed distance k: c_k(i,j) is the number
/// of positions p where word i sits at p and word j at p+k. C_0 = D.
struct ContextMatrix {
    int k = 0;
    BoundaryPolicy policy = BoundaryPolicy::truncate;
    std::vector<std::uint64_t> occurrences;  // d_i
    SparseRows<std::uint64_t> counts;

    std::size_t dim() const { return counts.dim(); }
    std::uint64_t at(WordId i, WordId j) const { return counts.at(i, j); }
    std::uint64_t row_sum(WordId i) const { return counts.row_sum(i); }
};

/// Counts every ordered pair (p, p+k) inside each chain, never across chains.
/// Under wrap, p+k is taken modulo the chain length.
inline ContextMatrix context_matrix(const TokenizedCorpus& corpus, int k,
                                    BoundaryPolicy policy = BoundaryPolicy::truncate) {
    std::map<SparseRows<std::uint64_t>::Key, std::uint64_t> acc;
    for (const auto& seq : corpus.sequences) {
        const auto n = static_cast<long long>(seq.size());
        for (long long p = 0; p < n; ++p) {
            long long q = p + k;
            if (policy == BoundaryPolicy::wrap) {
                q %= n;
                if (q < 0) q += n;
            } else if (q < 0 || q >= n) {
                continue;
            }
            ++acc[{seq[static_cast<std::size_t>(p)], seq[static_cast<std::size_t>(q)]}];
        }
    }
    return ContextMatrix{k, policy, corpus.vocabulary.counts, SparseRows<std::uint64_t>(corpus.vocabulary.size(), acc)};
}

/// Symmetrized neighborhood weights w(i,j) = (c_k(i,j) + c_k(j,i)) / 2,
/// averaged uniformly when several distances are combined. Stored as integer
/// sums of both directions times `scale`, so symmetry is exact.
struct NeighborhoodMatrix {
    std::vector<int> ks;
    BoundaryPolicy policy = BoundaryPolicy::truncate;
    std::vector<std::uint64_t> occurrences;
    SparseRows<std::uint64_t> doubled;
    double scale = 0.5;
    std::vector<double> degree;  // g_i = sum_j w(i,j)

    std::size_t dim() const { return doubled.dim(); }
    double at(WordId i, WordId j) const { return static_cast<double>(doubled.at(i, j)) * scale; }
};

inline NeighborhoodMatrix neighborhood_matrix(std::span<const ContextMatrix> contexts) {
    if (contexts.empty()) throw std::invalid_argument("neighborhood_matrix needs at least one context matrix");
    const auto& first = contexts.front();
    NeighborhoodMatrix out;
    out.policy = first.policy;
    out.occurrences = first.occurrences;

    std::map<SparseRows<std::uint64_t>::Key, std::uint64_t> acc;
    for (const auto& c : contexts) {
        if (c.k <= 0) throw std::invalid_argument("neighborhood distance must be positive");
        if (c.dim() != first.dim() || c.policy != first.policy)
            throw std::invalid_argument("context matrices disagree on dimension or boundary policy");
        if (std::find(out.ks.begin(), out.ks.end(), c.k) != out.ks.end())
            throw std::invalid_argument("duplicate neighborhood distance");
        out.ks.push_back(c.k);
        c.counts.for_each([&](WordId i, WordId j, std::uint64_t v) {
            acc[{i, j}] += v;
            acc[{j, i}] += v;
        });
    }
    out.doubled = SparseRows<std::uint64_t>(first.dim(), acc);
    out.scale = 1.0 / (2.0 * static_cast<double>(contexts.size()));
    out.degree.resize(first.dim());
    for (std::size_t i = 0; i < first.dim(); ++i)
        out.degree[i] = static_cast<double>(out.doubled.row_sum(i)) * out.scale;
    return out;
}

inline NeighborhoodMatrix neighborhood_matrix(const ContextMatrix& c_pos) {
    return neighborhood_matrix(std::span<const ContextMatrix>(&c_pos, 1));
}

inline NeighborhoodMatrix neighborhood_matrix(const TokenizedCorpus& corpus, std::span<const int> ks,
                                              BoundaryPolicy policy) {
    std::vector<ContextMatrix> cs;
    for (int k : ks) cs.push_back(context_matrix(corpus, k, policy));
    return neighborhood_matrix(cs);
}

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// P = D^-1 W over the effective weights. `weights` equals the neighborhood
/// matrix except on isolated rows, which receive a self-loop of weight d_i;
/// `degree` is the row sum of `weights` and is the D of the spectral step.
struct TransitionMatrix {
    std::vector<int> ks;
    BoundaryPolicy policy = BoundaryPolicy::truncate;
    SparseMatrix p;
    SparseMatrix weights;
    Eigen::VectorXd degree;
    std::vector<WordId> self_loops;

    Eigen::Index dim() const { return p.rows(); }
};

inline TransitionMatrix transition_matrix(const NeighborhoodMatrix& w) {
    const auto nt = static_cast<Eigen::Index>(w.dim());
    TransitionMatrix out;
    out.ks = w.ks;
    out.policy = w.policy;
    out.degree = Eigen::VectorXd::Zero(nt);

    std::vector<Eigen::Triplet<double>> wt, pt;
    wt.reserve(w.doubled.nonzeros() + 8);
    pt.reserve(w.doubled.nonzeros() + 8);
    for (Eigen::Index i = 0; i < nt; ++i) {
        const auto row = w.doubled.row(static_cast<std::size_t>(i));
        const std::uint64_t row_total = w.doubled.row_sum(static_cast<std::size_t>(i));
        if (row_total == 0) {
            const auto d = static_cast<double>(std::max<std::uint64_t>(w.occurrences.at(static_cast<std::size_t>(i)), 1));
            out.self_loops.push_back(static_cast<WordId>(i));
            out.degree[i] = d;
            wt.emplace_back(i, i, d);
            pt.emplace_back(i, i, 1.0);
            continue;
        }
        out.degree[i] = static_cast<double>(row_total) * w.scale;
        for (const auto& e : row) {
            wt.emplace_back(i, e.col, static_cast<double>(e.value) * w.scale);
            // ratio of integers: the uniform scale cancels exactly
            pt.emplace_back(i, e.col, static_cast<double>(e.value) / static_cast<double>(row_total));
        }
    }
    out.weights.resize(nt, nt);
    out.weights.setFromTriplets(wt.begin(), wt.end());
    out.p.resize(nt, nt);
    out.p.setFromTriplets(pt.begin(), pt.end());
    return out;
}

inline TransitionMatrix transition_matrix(const TokenizedCorpus& corpus, std::span<const int> ks,
                                          BoundaryPolicy policy) {
    return transition_matrix(neighborhood_matrix(corpus, ks, policy));
}

/// Brute-force maximum-likelihood check of a k=1 transition matrix: streams
/// the symmetrized bigram events of the corpus, estimates Pr(j | i) directly
/// and returns the largest absolute deviation from `tm.p`.
inline double bigram_mle_check(const TokenizedCorpus& corpus, const TransitionMatrix& tm) {
    if (tm.ks != std::vector<int>{1}) throw std::invalid_argument("bigram_mle_check requires a k=1 transition matrix");
    const auto nt = corpus.vocabulary.size();
    if (static_cast<std::size_t>(tm.dim()) != nt) throw std::invalid_argument("transition matrix does not match corpus");

    std::vector<std::map<WordId, double>> events(nt);
    std::vector<double> totals(nt, 0.0);
    auto observe = [&](WordId a, WordId b) {
        events[a][b] += 1.0;
        totals[a] += 1.0;
        events[b][a] += 1.0;
        totals[b] += 1.0;
    };
    for (const auto& seq : corpus.sequences) {
        for (std::size_t p = 0; p + 1 < seq.size(); ++p) observe(seq[p], seq[p + 1]);
        if (tm.policy == BoundaryPolicy::wrap && !seq.empty()) observe(seq.back(), seq.front());
    }

    const Eigen::MatrixXd dense = Eigen::MatrixXd(tm.p);
    double residual = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
        for (std::size_t j = 0; j < nt; ++j) {
            double expected = 0.0;
            if (totals[i] == 0.0) {
                expected = (i == j) ? 1.0 : 0.0;
            } else if (auto it = events[i].find(static_cast<WordId>(j)); it != events[i].end()) {
                expected = it->second / totals[i];
            }
            residual = std::max(residual, std::abs(expected - dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
        }
    }
    return residual;
}

/// Sparse triplet dump: header "nt k policy", then one "i j value" line per
/// nonzero in row-major order. Several distances are written comma-joined.
inline void write_triplet_header(std::ostream& out, std::size_t nt, std::span<const int> ks, BoundaryPolicy policy) {
    out << nt << ' ' << join_ints(ks) << ' ' << to_string(policy) << '\n';
}

inline void write_triplets(std::ostream& out, const ContextMatrix& c) {
    const int ks[] = {c.k};
    write_triplet_header(out, c.dim(), ks, c.policy);
    c.counts.for_each([&](WordId i, WordId j, std::uint64_t v) { out << i << ' ' << j << ' ' << v << '\n'; });
}

inline void write_triplets(std::ostream& out, const NeighborhoodMatrix& w) {
    write_triplet_header(out, w.dim(), w.ks, w.policy);
    w.doubled.for_each([&](WordId i, WordId j, std::uint64_t v) {
        out << i << ' ' << j << ' ' << format_double(static_cast<double>(v) * w.scale) << '\n';
    });
}

inline void write_triplets(std::ostream& out, const TransitionMatrix& tm) {
    write_triplet_header(out, static_cast<std::size_t>(tm.dim()), tm.ks, tm.policy);
    for (Eigen::Index i = 0; i < tm.p.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(tm.p, i); it; ++it)
            out << it.row() << ' ' << it.col() << ' ' << format_double(it.value()) << '\n';
}

}  // namespace spectext
