#pragma once
// Spectral analysis of the transition matrix P = D^-1 W.
//
// The eigenproblem P y = lambda y is solved through the symmetric matrix
// M = D^-1/2 W D^-1/2, which has the same spectrum. With M u = lambda u and
// |u| = 1, the vector y = D^-1/2 u is an eigenvector of P satisfying
// y^T D y = 1, so d_i y_k(i)^2 is a probability distribution over words:
// the membership of word i in the latent class of axis k. The same y solves
// the generalized problem (D - W) y = (1 - lambda) D y behind the normalized
// cut criterion.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include "spectext/counts.hpp"
#include "spectext/error.hpp"

namespace spectext {

struct SpectralResult {
    Eigen::VectorXd eigenvalues;   // descending, lambda_1 = 1
    Eigen::MatrixXd eigenvectors;  // column k-1 holds y_k, scaled so that y^T D y = 1
    Eigen::VectorXd degrees;       // the D used for scaling

    Eigen::Index axes() const { return eigenvalues.size(); }

    /// 1-based axis access, matching the lambda_1, lambda_2, ... numbering.
    Eigen::VectorXd axis(Eigen::Index k) const {
        if (k < 1 || k > axes()) throw AxisOutOfRange("axis " + std::to_string(k) + " not computed (have " +
                                                      std::to_string(axes()) + ")");
        return eigenvectors.col(k - 1);
    }
};

/// entries(i, k-1) = Pr(word i | class of axis k) = g_i y_k(i)^2.
struct MembershipTable {
    Eigen::MatrixXd entries;

    Eigen::Index axes() const { return entries.cols(); }
};

namespace detail {

// Flip so the entry of largest magnitude is positive; near-ties (relative
// 1e-9) go to the lowest word id.
inline void fix_sign(Eigen::Ref<Eigen::VectorXd> y) {
    const double peak = y.cwiseAbs().maxCoeff();
    if (peak == 0.0) return;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (std::abs(y[i]) >= peak * (1.0 - 1e-9)) {
            if (y[i] < 0.0) y = -y;
            return;
        }
    }
}

inline void check_degrees(const Eigen::VectorXd& degree) {
    for (Eigen::Index i = 0; i < degree.size(); ++i)
        if (!(degree[i] > 0.0)) throw DegenerateDegree("normalization degree of word " + std::to_string(i) + " is zero");
}

inline Eigen::Index resolve_axes(Eigen::Index m, Eigen::Index nt) {
    if (m < 0) throw std::invalid_argument("negative axis count");
    if (m > nt) throw AxisOutOfRange("requested " + std::to_string(m) + " axes for " + std::to_string(nt) + " words");
    return m == 0 ? nt : m;
}

// Rounding can push an eigenvalue of a stochastic matrix a hair outside
// [-1, 1]; pull such values back, leave anything larger visible.
inline double clamp_unit(double lambda) {
    if (lambda > 1.0 && lambda < 1.0 + 1e-9) return 1.0;
    if (lambda < -1.0 && lambda > -1.0 - 1e-9) return -1.0;
    return lambda;
}

}  // namespace detail

/// Leading `m` eigenpairs of P (all of them when m = 0), via the symmetric
/// transform. When lambda = 1 is repeated (disconnected vocabulary), the
/// basis of that eigenspace is rotated so that y_1 is the constant vector.
inline SpectralResult spectral_decompose(const TransitionMatrix& tm, Eigen::Index m = 0) {
    const Eigen::Index nt = tm.dim();
    if (nt == 0) throw EmptyCorpus("cannot decompose an empty transition matrix");
    m = detail::resolve_axes(m, nt);
    detail::check_degrees(tm.degree);

    const Eigen::VectorXd inv_sqrt = tm.degree.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(nt, nt);
    for (Eigen::Index i = 0; i < tm.weights.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(tm.weights, i); it; ++it)
            sym(it.row(), it.col()) = it.value() * inv_sqrt[it.row()] * inv_sqrt[it.col()];

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) throw Error("symmetric eigensolver did not converge");

    // Eigen sorts ascending; reverse into descending order.
    Eigen::VectorXd values = solver.eigenvalues().reverse();
    Eigen::MatrixXd vectors = solver.eigenvectors().rowwise().reverse();

    Eigen::Index leading = 1;
    while (leading < nt && values[leading] > 1.0 - 1e-9) ++leading;
    if (leading > 1) {
        // The constant vector of P maps to sqrt(g) in the symmetric picture.
        // Express it in the eigenspace basis and complete it orthonormally.
        const Eigen::MatrixXd basis = vectors.leftCols(leading);
        const Eigen::VectorXd coeffs = (basis.transpose() * tm.degree.cwiseSqrt()).normalized();
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(coeffs);
        const Eigen::MatrixXd rotation = qr.householderQ();
        vectors.leftCols(leading) = basis * rotation;
    }

    SpectralResult out;
    out.degrees = tm.degree;
    out.eigenvalues.resize(m);
    out.eigenvectors.resize(nt, m);
    for (Eigen::Index k = 0; k < m; ++k) {
        out.eigenvalues[k] = detail::clamp_unit(values[k]);
        out.eigenvectors.col(k) = vectors.col(k).cwiseProduct(inv_sqrt);
        detail::fix_sign(out.eigenvectors.col(k));
    }
    return out;
}

/// Reference route: eigendecomposition of the nonsymmetric P itself, each
/// unit-norm eigenvector y' rescaled by 1 / sqrt(sum_i g_i y'(i)^2). Used to
/// cross-check spectral_decompose; eigenspaces of repeated eigenvalues are
/// returned as the general solver yields them.
inline SpectralResult spectral_decompose_direct(const TransitionMatrix& tm, Eigen::Index m = 0) {
    const Eigen::Index nt = tm.dim();
    if (nt == 0) throw EmptyCorpus("cannot decompose an empty transition matrix");
    m = detail::resolve_axes(m, nt);
    detail::check_degrees(tm.degree);

    Eigen::EigenSolver<Eigen::MatrixXd> solver(Eigen::MatrixXd(tm.p));
    if (solver.info() != Eigen::Success) throw Error("general eigensolver did not converge");
    const Eigen::VectorXd values = solver.eigenvalues().real();
    const Eigen::MatrixXd vectors = solver.eigenvectors().real();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(nt));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return values[a] > values[b]; });

    SpectralResult out;
    out.degrees = tm.degree;
    out.eigenvalues.resize(m);
    out.eigenvectors.resize(nt, m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const auto src = order[static_cast<std::size_t>(k)];
        Eigen::VectorXd y = vectors.col(src);
        y /= std::sqrt(tm.degree.dot(y.cwiseAbs2()));
        detail::fix_sign(y);
        out.eigenvalues[k] = detail::clamp_unit(values[src]);
        out.eigenvectors.col(k) = y;
    }
    return out;
}

/// g_i y_k(i)^2 for the first `m` axes (all computed axes when m = 0).
/// Column 0 reproduces the word frequencies g_i / sum_j g_j.
inline MembershipTable membership(const SpectralResult& result, Eigen::Index m = 0) {
    if (m < 0 || m > result.axes()) throw AxisOutOfRange("membership requested for more axes than computed");
    if (m == 0) m = result.axes();
    MembershipTable table;
    table.entries = result.eigenvectors.leftCols(m).cwiseAbs2();
    table.entries.array().colwise() *= result.degrees.array();
    return table;
}

/// max_k |(D - W) y_k - (1 - lambda_k) D y_k|_inf / |D y_k|_inf over the
/// computed axes.
inline double generalized_residual(const SpectralResult& result, const SparseMatrix& weights,
                                   const Eigen::VectorXd& degree) {
    double worst = 0.0;
    for (Eigen::Index k = 0; k < result.axes(); ++k) {
        const Eigen::VectorXd y = result.eigenvectors.col(k);
        const Eigen::VectorXd dy = degree.cwiseProduct(y);
        const Eigen::VectorXd lhs = dy - weights * y;
        const double mu = 1.0 - result.eigenvalues[k];
        const double scale = dy.cwiseAbs().maxCoeff();
        if (scale == 0.0) continue;
        worst = std::max(worst, (lhs - mu * dy).cwiseAbs().maxCoeff() / scale);
    }
    return worst;
}

/// Normalized-cut quadratic form sum_{i,j} w_ij (z_i - z_j)^2 for a 0/1
/// class indicator z.
inline double ncut_cost(const SparseMatrix& weights, std::span<const int> indicator) {
    if (static_cast<Eigen::Index>(indicator.size()) != weights.rows())
        throw std::invalid_argument("indicator length does not match the number of words");
    for (int z : indicator)
        if (z != 0 && z != 1) throw std::invalid_argument("indicator entries must be 0 or 1");
    double cost = 0.0;
    for (Eigen::Index i = 0; i < weights.outerSize(); ++i) {
        for (SparseMatrix::InnerIterator it(weights, i); it; ++it) {
            const int diff = indicator[static_cast<std::size_t>(it.row())] - indicator[static_cast<std::size_t>(it.col())];
            cost += it.value() * diff * diff;
        }
    }
    return cost;
}

}  // namespace spectext
