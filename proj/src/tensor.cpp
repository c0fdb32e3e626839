#include "tuckreg/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tuckreg {

namespace {

void require_finite(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(what) + ": non-finite entry");
        }
    }
}

void require_same_dims(const DenseTensor& a, const DenseTensor& b, const char* what) {
    if (a.dims() != b.dims()) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
    }
}

// Advance a C-order multi-index by one position.
void increment(std::vector<std::size_t>& index, const Dims& dims) {
    for (std::size_t k = dims.size(); k-- > 0;) {
        if (++index[k] < dims[k]) return;
        index[k] = 0;
    }
}

// Column strides of the mode-`mode` unfolding.
std::vector<std::size_t> unfolding_strides(const Dims& dims, std::size_t mode) {
    std::vector<std::size_t> stride(dims.size(), 0);
    std::size_t acc = 1;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (k == mode) continue;
        stride[k] = acc;
        acc *= dims[k];
    }
    return stride;
}

}  // namespace

std::size_t dims_product(const Dims& dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>{});
}

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("Matrix: zero extent");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("Matrix: zero extent");
    if (data_.size() != rows * cols) throw std::invalid_argument("Matrix: data length mismatch");
    require_finite(data_, "Matrix");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

std::vector<double> Matrix::column(std::size_t c) const {
    if (c >= cols_) throw std::out_of_range("Matrix::column");
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

void Matrix::set_column(std::size_t c, std::span<const double> values) {
    if (c >= cols_) throw std::out_of_range("Matrix::set_column");
    if (values.size() != rows_) throw std::invalid_argument("Matrix::set_column: length mismatch");
    require_finite(values, "Matrix::set_column");
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("Matrix product: shape mismatch");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

// ---------------------------------------------------------------------------
// DenseTensor

DenseTensor::DenseTensor(Dims dims, std::vector<double> data) : dims_(std::move(dims)), data_(std::move(data)) {
    if (dims_.empty()) throw std::invalid_argument("DenseTensor: order must be at least 1");
    if (std::ranges::any_of(dims_, [](std::size_t n) { return n == 0; })) {
        throw std::invalid_argument("DenseTensor: zero extent");
    }
    if (data_.size() != dims_product(dims_)) throw std::invalid_argument("DenseTensor: data length mismatch");
    require_finite(data_, "DenseTensor");
}

DenseTensor DenseTensor::zeros(Dims dims) {
    const std::size_t n = dims.empty() ? 0 : dims_product(dims);
    return DenseTensor(std::move(dims), std::vector<double>(n, 0.0));
}

std::size_t DenseTensor::offset(std::span<const std::size_t> index) const {
    if (index.size() != dims_.size()) throw std::invalid_argument("DenseTensor: index arity mismatch");
    std::size_t off = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (index[k] >= dims_[k]) throw std::out_of_range("DenseTensor: index out of range");
        off = off * dims_[k] + index[k];
    }
    return off;
}

double DenseTensor::at(std::span<const std::size_t> index) const { return data_[offset(index)]; }

double DenseTensor::at(std::initializer_list<std::size_t> index) const {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& other) {
    axpy(1.0, other);
    return *this;
}

DenseTensor& DenseTensor::operator-=(const DenseTensor& other) {
    axpy(-1.0, other);
    return *this;
}

DenseTensor& DenseTensor::operator*=(double alpha) {
    for (double& v : data_) v *= alpha;
    return *this;
}

void DenseTensor::axpy(double alpha, const DenseTensor& x) {
    require_same_dims(*this, x, "axpy");
    const auto xs = x.data();
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += alpha * xs[i];
}

DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
DenseTensor operator*(double alpha, DenseTensor a) { return a *= alpha; }

// ---------------------------------------------------------------------------
// Unfoldings and products

Matrix matricize(const DenseTensor& t, std::size_t mode) {
    const Dims& dims = t.dims();
    if (mode >= dims.size()) throw std::invalid_argument("matricize: mode out of range");
    const std::size_t cols = t.size() / dims[mode];
    const auto stride = unfolding_strides(dims, mode);

    std::vector<double> out(t.size());
    std::vector<std::size_t> index(dims.size(), 0);
    const auto data = t.data();
    for (std::size_t flat = 0; flat < data.size(); ++flat) {
        std::size_t col = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) col += index[k] * stride[k];
        out[index[mode] * cols + col] = data[flat];
        increment(index, dims);
    }
    return Matrix(dims[mode], cols, std::move(out));
}

DenseTensor tensorize(const Matrix& m, std::size_t mode, const Dims& dims) {
    if (mode >= dims.size()) throw std::invalid_argument("tensorize: mode out of range");
    const std::size_t n = dims_product(dims);
    if (m.rows() != dims[mode] || m.rows() * m.cols() != n) {
        throw std::invalid_argument("tensorize: matrix shape inconsistent with dims");
    }
    const auto stride = unfolding_strides(dims, mode);
    const auto src = m.data();
    std::vector<double> out(n);
    std::vector<std::size_t> index(dims.size(), 0);
    for (std::size_t flat = 0; flat < n; ++flat) {
        std::size_t col = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) col += index[k] * stride[k];
        out[flat] = src[index[mode] * m.cols() + col];
        increment(index, dims);
    }
    return DenseTensor(dims, std::move(out));
}

DenseTensor mode_product(const DenseTensor& t, const Matrix& u, std::size_t mode) {
    const Dims& dims = t.dims();
    if (mode >= dims.size()) throw std::invalid_argument("mode_product: mode out of range");
    if (u.cols() != dims[mode]) throw std::invalid_argument("mode_product: factor columns must equal mode extent");

    std::size_t left = 1;
    for (std::size_t k = 0; k < mode; ++k) left *= dims[k];
    std::size_t right = 1;
    for (std::size_t k = mode + 1; k < dims.size(); ++k) right *= dims[k];
    const std::size_t n = dims[mode];
    const std::size_t rows = u.rows();

    Dims out_dims = dims;
    out_dims[mode] = rows;
    std::vector<double> out(left * rows * right, 0.0);
    const auto src = t.data();
    const auto uu = u.data();

    // out[l, a, r] = sum_j U[a, j] * T[l, j, r]
    for (std::size_t l = 0; l < left; ++l) {
        const double* tin = src.data() + l * n * right;
        double* tout = out.data() + l * rows * right;
        for (std::size_t a = 0; a < rows; ++a) {
            double* dst = tout + a * right;
            for (std::size_t j = 0; j < n; ++j) {
                const double w = uu[a * n + j];
                if (w == 0.0) continue;
                const double* row = tin + j * right;
                for (std::size_t r = 0; r < right; ++r) dst[r] += w * row[r];
            }
        }
    }
    return DenseTensor(std::move(out_dims), std::move(out));
}

DenseTensor tucker_compose(const DenseTensor& core, std::span<const Matrix> factors) {
    if (factors.size() != core.order()) throw std::invalid_argument("tucker_compose: factor count must equal core order");
    for (std::size_t k = 0; k < factors.size(); ++k) {
        if (factors[k].cols() != core.dims()[k]) {
            throw std::invalid_argument("tucker_compose: factor " + std::to_string(k) + " shape mismatch");
        }
    }
    DenseTensor out = core;
    for (std::size_t k = 0; k < factors.size(); ++k) out = mode_product(out, factors[k], k);
    return out;
}

double inner(const DenseTensor& a, const DenseTensor& b) {
    require_same_dims(a, b, "inner");
    const auto x = a.data();
    const auto y = b.data();
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double frob_norm(const DenseTensor& t) {
    // Scaled accumulation keeps huge/tiny entries from overflowing.
    double scale = 0.0;
    for (double v : t.data()) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return 0.0;
    double s = 0.0;
    for (double v : t.data()) {
        const double q = v / scale;
        s += q * q;
    }
    return scale * std::sqrt(s);
}

double l1_norm(const DenseTensor& t) {
    double s = 0.0;
    for (double v : t.data()) s += std::abs(v);
    return s;
}

DenseTensor as_tensor(const Matrix& m) {
    const auto d = m.data();
    return DenseTensor({m.rows(), m.cols()}, std::vector<double>(d.begin(), d.end()));
}

Matrix as_matrix(const DenseTensor& t) {
    if (t.order() != 2) throw std::invalid_argument("as_matrix: tensor must have order 2");
    const auto d = t.data();
    return Matrix(t.dims()[0], t.dims()[1], std::vector<double>(d.begin(), d.end()));
}

}  // namespace tuckreg
