#pragma once

// Reference implementations used only by the tests. They follow the
// definitions directly (explicit index arithmetic, full sums, exhaustive
// search) and share no code with the library beyond its value types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "tuckreg/measurement.hpp"
#include "tuckreg/model.hpp"
#include "tuckreg/tensor.hpp"

namespace oracle {

using tuckreg::DenseTensor;
using tuckreg::Dims;
using tuckreg::Matrix;

inline std::vector<std::size_t> unravel(std::size_t flat, const Dims& dims) {
    std::vector<std::size_t> idx(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
        idx[k] = flat % dims[k];
        flat /= dims[k];
    }
    return idx;
}

inline std::size_t ravel(const std::vector<std::size_t>& idx, const Dims& dims) {
    std::size_t flat = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) flat = flat * dims[k] + idx[k];
    return flat;
}

/// Column of entry `idx` in the mode unfolding: sum_{k != mode} i_k J_k,
/// J_k = prod_{l < k, l != mode} n_l (0-based).
inline std::size_t unfold_column(const std::vector<std::size_t>& idx, const Dims& dims, std::size_t mode) {
    std::size_t col = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (k == mode) continue;
        std::size_t j = 1;
        for (std::size_t l = 0; l < k; ++l) {
            if (l != mode) j *= dims[l];
        }
        col += idx[k] * j;
    }
    return col;
}

inline DenseTensor random_tensor(const Dims& dims, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v(tuckreg::dims_product(dims));
    for (double& x : v) x = g(eng);
    return DenseTensor(dims, std::move(v));
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v(rows * cols);
    for (double& x : v) x = g(eng);
    return Matrix(rows, cols, std::move(v));
}

/// Full outer-product sum: Z(i) = sum_j S(j) prod_k U_k(i_k, j_k).
inline DenseTensor compose_by_summation(const DenseTensor& core, const std::vector<Matrix>& factors) {
    Dims dims;
    for (const Matrix& u : factors) dims.push_back(u.rows());
    const Dims& rank = core.dims();
    const std::size_t n = tuckreg::dims_product(dims);
    const std::size_t r = tuckreg::dims_product(rank);
    std::vector<double> out(n, 0.0);
    const auto cd = core.data();
    for (std::size_t a = 0; a < n; ++a) {
        const auto i = unravel(a, dims);
        double acc = 0.0;
        for (std::size_t b = 0; b < r; ++b) {
            const auto j = unravel(b, rank);
            double term = cd[b];
            for (std::size_t k = 0; k < dims.size() && term != 0.0; ++k) term *= factors[k](i[k], j[k]);
            acc += term;
        }
        out[a] = acc;
    }
    return DenseTensor(dims, std::move(out));
}

inline double rel_diff(const DenseTensor& a, const DenseTensor& b) {
    double num = 0.0, den = 0.0;
    const auto ad = a.data();
    const auto bd = b.data();
    for (std::size_t i = 0; i < ad.size(); ++i) {
        num += (ad[i] - bd[i]) * (ad[i] - bd[i]);
        den += bd[i] * bd[i];
    }
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

inline Eigen::MatrixXd to_eigen(const Matrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) e(r, c) = m(r, c);
    return e;
}

/// ||v^T M||^2 for a column vector v.
inline double explained_variance(const Matrix& m, const std::vector<double>& v) {
    const Eigen::MatrixXd e = to_eigen(m);
    Eigen::VectorXd x(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) x(i) = v[i];
    return (e.transpose() * x).squaredNorm();
}

/// Best explained variance over every support of size s: the largest
/// eigenvalue of the Gram matrix restricted to that support.
inline double best_sparse_variance(const Matrix& m, std::size_t s) {
    const Eigen::MatrixXd e = to_eigen(m);
    const Eigen::MatrixXd g = e * e.transpose();
    const std::size_t n = m.rows();
    std::vector<bool> mask(n, false);
    std::fill(mask.begin(), mask.begin() + static_cast<long>(s), true);
    double best = 0.0;
    do {
        std::vector<Eigen::Index> rows;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask[i]) rows.push_back(static_cast<Eigen::Index>(i));
        }
        Eigen::MatrixXd sub(rows.size(), rows.size());
        for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t b = 0; b < rows.size(); ++b) sub(a, b) = g(rows[a], rows[b]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub);
        best = std::max(best, es.eigenvalues().maxCoeff());
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return best;
}

/// Dense top left singular vector by plain power iteration on M M^T.
inline std::vector<double> power_top_vector(const Matrix& m, int iters = 5000) {
    const Eigen::MatrixXd e = to_eigen(m);
    const Eigen::MatrixXd g = e * e.transpose();
    Eigen::VectorXd v = Eigen::VectorXd::Ones(g.rows()).normalized();
    for (int k = 0; k < iters; ++k) v = (g * v).normalized();
    std::vector<double> out(v.data(), v.data() + v.size());
    return out;
}

/// Rows of the sensing map as an explicit m x N matrix.
inline Eigen::MatrixXd design_matrix(const tuckreg::LinearMapSpec& map) {
    const std::size_t n = tuckreg::dims_product(map.dims);
    Eigen::MatrixXd a(map.m, n);
    for (std::size_t i = 0; i < map.m; ++i) {
        const DenseTensor x = tuckreg::sensing_tensor(map, i);
        for (std::size_t j = 0; j < n; ++j) a(i, j) = x.data()[j];
    }
    return a;
}

/// argmin ||A b - y|| through the normal equations.
inline std::vector<double> least_squares(const Eigen::MatrixXd& a, const std::vector<double>& y) {
    Eigen::VectorXd yy(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) yy(i) = y[i];
    const Eigen::VectorXd b = (a.transpose() * a).ldlt().solve(a.transpose() * yy);
    return std::vector<double>(b.data(), b.data() + b.size());
}

/// Orthonormal, support-disjoint s-sparse columns, with the supports of the
/// columns laid out consecutively after a random row permutation.
inline Matrix disjoint_orthonormal_factor(std::size_t n, std::size_t r, std::size_t s, std::mt19937_64& eng) {
    std::vector<std::size_t> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = i;
    std::shuffle(rows.begin(), rows.end(), eng);
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix u(n, r);
    for (std::size_t c = 0; c < r; ++c) {
        double norm = 0.0;
        std::vector<double> vals(s);
        for (double& v : vals) {
            v = g(eng);
            if (std::abs(v) < 0.2) v = v < 0 ? -0.2 : 0.2;
            norm += v * v;
        }
        for (std::size_t k = 0; k < s; ++k) u(rows[c * s + k], c) = vals[k] / std::sqrt(norm);
    }
    return u;
}

/// Core whose every unfolding has singular values separated by at least
/// `gap` (diagonal-dominant superdiagonal core with entries gap^-k).
inline DenseTensor separated_core(const Dims& rank, double gap, std::mt19937_64& eng) {
    const std::size_t n = tuckreg::dims_product(rank);
    std::uniform_real_distribution<double> small(-1e-4, 1e-4);
    std::vector<double> v(n);
    for (std::size_t a = 0; a < n; ++a) {
        const auto idx = unravel(a, rank);
        const bool diag = std::all_of(idx.begin(), idx.end(), [&](std::size_t x) { return x == idx[0]; });
        v[a] = diag ? std::pow(gap, -static_cast<double>(idx[0])) : small(eng);
    }
    return DenseTensor(rank, std::move(v));
}

}  // namespace oracle
