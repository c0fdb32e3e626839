#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace tuckreg {

using Dims = std::vector<std::size_t>;

/// Number of entries described by a dimension tuple.
std::size_t dims_product(const Dims& dims);

/// Dense row-major matrix of doubles.
///
/// Rows and columns are at least one; every entry is finite.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix identity(std::size_t n);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

    [[nodiscard]] double operator()(std::size_t r, std::size_t c) const noexcept {
        return data_[r * cols_ + c];
    }
    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }

    [[nodiscard]] Matrix transpose() const;
    [[nodiscard]] std::vector<double> column(std::size_t c) const;
    void set_column(std::size_t c, std::span<const double> values);

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);

/// Order-d dense tensor stored in C order (last index varies fastest).
///
/// Invariants: d >= 1, every extent >= 1, data length equals the product of
/// the extents, and every entry is finite. Constructors enforce all of them
/// and throw std::invalid_argument otherwise.
class DenseTensor {
public:
    DenseTensor(Dims dims, std::vector<double> data);

    static DenseTensor zeros(Dims dims);

    [[nodiscard]] const Dims& dims() const noexcept { return dims_; }
    [[nodiscard]] std::size_t order() const noexcept { return dims_.size(); }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

    /// Entry at a 0-based multi-index.
    [[nodiscard]] double at(std::span<const std::size_t> index) const;
    [[nodiscard]] double at(std::initializer_list<std::size_t> index) const;

    /// Flat C-order offset of a 0-based multi-index.
    [[nodiscard]] std::size_t offset(std::span<const std::size_t> index) const;

    DenseTensor& operator+=(const DenseTensor& other);
    DenseTensor& operator-=(const DenseTensor& other);
    DenseTensor& operator*=(double alpha);

    /// this += alpha * x
    void axpy(double alpha, const DenseTensor& x);

    friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

private:
    Dims dims_;
    std::vector<double> data_;
};

DenseTensor operator+(DenseTensor a, const DenseTensor& b);
DenseTensor operator-(DenseTensor a, const DenseTensor& b);
DenseTensor operator*(double alpha, DenseTensor a);

/// Mode-`mode` unfolding (0-based mode). Entry T(i_1..i_d) lands in row
/// i_mode and column sum_{k != mode} i_k * J_k, where
/// J_k = prod_{l < k, l != mode} n_l.
Matrix matricize(const DenseTensor& t, std::size_t mode);

/// Inverse of matricize.
DenseTensor tensorize(const Matrix& m, std::size_t mode, const Dims& dims);

/// n-mode product T x_mode U, with (T x_mode U)_(mode) = U * T_(mode).
DenseTensor mode_product(const DenseTensor& t, const Matrix& u, std::size_t mode);

/// core x_1 U_1 x_2 ... x_d U_d.
DenseTensor tucker_compose(const DenseTensor& core, std::span<const Matrix> factors);

double inner(const DenseTensor& a, const DenseTensor& b);
double frob_norm(const DenseTensor& t);
double l1_norm(const DenseTensor& t);

/// Order-2 tensor view of a matrix and back, used for factor serialization.
DenseTensor as_tensor(const Matrix& m);
Matrix as_matrix(const DenseTensor& t);

}  // namespace tuckreg
