#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>

#include "prdkit/common.hpp"
#include "prdkit/sample_set.hpp"

namespace prdkit {

/// Lower-triangular factor L with positive diagonal, L L^T = A (+ jitter).
struct SymmetricFactor {
    Matrix l;
    double jitter = 0.0;  // diagonal shift actually applied

    std::size_t dim() const { return l.rows; }
};

struct PcaBasis {
    std::vector<double> mean;
    Matrix eigvecs;  // columns = eigenvectors, ordered by decreasing eigenvalue
    std::vector<double> eigvals;

    std::size_t dim() const { return eigvecs.rows; }
};

/// Sample mean and unbiased covariance (divisor N-1), symmetrized.
inline std::pair<std::vector<double>, Matrix> fit_gaussian(const SampleSet& s) {
    if (s.size() < 2) throw std::invalid_argument("fit_gaussian: needs at least 2 samples");
    const std::size_t n = s.size(), d = s.dim();
    std::vector<double> mean(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto r = s.row(i);
        for (std::size_t j = 0; j < d; ++j) mean[j] += r[j];
    }
    for (double& m : mean) m /= static_cast<double>(n);
    Matrix cov(d, d);
    std::vector<double> centered(d);
    for (std::size_t i = 0; i < n; ++i) {
        auto r = s.row(i);
        for (std::size_t j = 0; j < d; ++j) centered[j] = r[j] - mean[j];
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = a; b < d; ++b) cov.at(a, b) += centered[a] * centered[b];
    }
    const double denom = static_cast<double>(n - 1);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a; b < d; ++b) {
            const double v = cov.at(a, b) / denom;
            cov.at(a, b) = v;
            cov.at(b, a) = v;
        }
    return {std::move(mean), std::move(cov)};
}

namespace detail {

inline double off_diagonal_frobenius_sq(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j)
            if (i != j) s += a.at(i, j) * a.at(i, j);
    return s;
}

inline double frobenius_sq(const Matrix& a) {
    double s = 0.0;
    for (double v : a.data) s += v * v;
    return s;
}

inline void check_symmetric(const Matrix& a, const char* who) {
    if (a.rows != a.cols) throw std::invalid_argument(std::string(who) + ": matrix not square");
    double scale = 0.0;
    for (double v : a.data) scale = std::max(scale, std::abs(v));
    const double tol = 1e-8 * std::max(1.0, scale);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = i + 1; j < a.cols; ++j)
            if (std::abs(a.at(i, j) - a.at(j, i)) > tol)
                throw std::invalid_argument(std::string(who) + ": matrix not symmetric at (" +
                                            std::to_string(i) + "," + std::to_string(j) + ")");
}

}  // namespace detail

/// Cyclic Jacobi eigensolver for symmetric matrices. Iterates until the
/// off-diagonal Frobenius mass drops below 1e-12 * ||A||_F or 100 sweeps.
/// Returns eigenvalues sorted descending with matching eigenvector columns.
inline void sym_eig(const Matrix& input, std::vector<double>& eigenvalues, Matrix& eigenvectors) {
    detail::check_symmetric(input, "sym_eig");
    const std::size_t n = input.rows;
    Matrix a = input;
    Matrix v = Matrix::identity(n);
    const double target = 1e-24 * detail::frobenius_sq(a);  // (1e-12 ||A||_F)^2
    for (int sweep = 0; sweep < 100; ++sweep) {
        if (detail::off_diagonal_frobenius_sq(a) <= target) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a.at(p, q);
                if (apq == 0.0) continue;
                const double app = a.at(p, p), aqq = a.at(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a.at(i, p), aiq = a.at(i, q);
                    a.at(i, p) = c * aip - s * aiq;
                    a.at(i, q) = s * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const double apj = a.at(p, j), aqj = a.at(q, j);
                    a.at(p, j) = c * apj - s * aqj;
                    a.at(q, j) = s * apj + c * aqj;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v.at(i, p), viq = v.at(i, q);
                    v.at(i, p) = c * vip - s * viq;
                    v.at(i, q) = s * vip + c * viq;
                }
            }
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), static_cast<std::size_t>(0));
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a.at(i, i);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t lhs, std::size_t rhs) { return diag[lhs] > diag[rhs]; });
    eigenvalues.resize(n);
    eigenvectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        eigenvalues[j] = diag[order[j]];
        for (std::size_t i = 0; i < n; ++i) eigenvectors.at(i, j) = v.at(i, order[j]);
    }
}

/// Cholesky with escalating diagonal jitter: on pivot failure, add
/// 1e-9 * trace/d to the diagonal and restart, x10 per retry, at most 3
/// retries, then report not-PSD.
inline SymmetricFactor cholesky_jittered(const Matrix& input) {
    detail::check_symmetric(input, "cholesky_jittered");
    const std::size_t n = input.rows;
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += input.at(i, i);
    double jitter = 0.0;
    double step = 1e-9 * std::max(trace, 1e-300) / static_cast<double>(n);
    for (int attempt = 0; attempt <= 3; ++attempt) {
        Matrix l(n, n);
        bool ok = true;
        for (std::size_t j = 0; j < n && ok; ++j) {
            double diag = input.at(j, j) + jitter;
            for (std::size_t k = 0; k < j; ++k) diag -= l.at(j, k) * l.at(j, k);
            if (!(diag > 0.0) || !std::isfinite(diag)) {
                ok = false;
                break;
            }
            l.at(j, j) = std::sqrt(diag);
            for (std::size_t i = j + 1; i < n; ++i) {
                double v = input.at(i, j);
                for (std::size_t k = 0; k < j; ++k) v -= l.at(i, k) * l.at(j, k);
                l.at(i, j) = v / l.at(j, j);
            }
        }
        if (ok) return {std::move(l), jitter};
        jitter = (jitter == 0.0) ? step : jitter * 10.0;
    }
    throw NotPsdError("cholesky_jittered: matrix not positive semidefinite after 3 jitter retries");
}

/// Forward-substitution solve L w = b.
inline void forward_solve(const Matrix& l, std::span<const double> b, std::vector<double>& w) {
    const std::size_t n = l.rows;
    w.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = b[i];
        for (std::size_t k = 0; k < i; ++k) v -= l.at(i, k) * w[k];
        w[i] = v / l.at(i, i);
    }
}

inline PcaBasis fit_pca(const SampleSet& s) {
    auto [mean, cov] = fit_gaussian(s);
    PcaBasis basis;
    basis.mean = std::move(mean);
    sym_eig(cov, basis.eigvals, basis.eigvecs);
    return basis;
}

/// Rows = (x - mean)^T [first d_out eigenvectors].
inline SampleSet pca_project(const PcaBasis& basis, const SampleSet& s, std::size_t d_out) {
    if (d_out == 0 || d_out > basis.eigvecs.cols)
        throw std::invalid_argument("pca_project: d_out=" + std::to_string(d_out) +
                                    " exceeds basis dimension " + std::to_string(basis.eigvecs.cols));
    if (s.dim() != basis.dim()) throw std::invalid_argument("pca_project: dimension mismatch");
    SampleSet out;
    out.label = s.label + "/pca" + std::to_string(d_out);
    out.points = Matrix(s.size(), d_out);
    parallel_for(s.size(), [&](std::size_t i) {
        auto r = s.row(i);
        for (std::size_t j = 0; j < d_out; ++j) {
            double v = 0.0;
            for (std::size_t c = 0; c < s.dim(); ++c)
                v += (r[c] - basis.mean[c]) * basis.eigvecs.at(c, j);
            out.points.at(i, j) = v;
        }
    });
    return out;
}

}  // namespace prdkit
