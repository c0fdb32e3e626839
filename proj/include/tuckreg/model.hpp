#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "tuckreg/tensor.hpp"

namespace tuckreg {

/// Tucker representation with column-sparse factors: compose() is
/// core x_1 U_1 ... x_d U_d where U_i is n_i x r_i and every column of U_i
/// has at most s_i nonzeros.
///
/// The constructor checks shapes and the sparsity certificate and throws
/// std::invalid_argument on violation.
class TuckerFactors {
public:
    TuckerFactors(DenseTensor core, std::vector<Matrix> factors, Dims sparsity);

    [[nodiscard]] const DenseTensor& core() const noexcept { return core_; }
    [[nodiscard]] const std::vector<Matrix>& factors() const noexcept { return factors_; }
    [[nodiscard]] const Dims& rank() const noexcept { return core_.dims(); }
    [[nodiscard]] const Dims& sparsity() const noexcept { return sparsity_; }
    [[nodiscard]] const Dims& dims() const noexcept { return dims_; }
    [[nodiscard]] std::size_t order() const noexcept { return dims_.size(); }

    [[nodiscard]] DenseTensor compose() const;

private:
    DenseTensor core_;
    std::vector<Matrix> factors_;
    Dims sparsity_;
    Dims dims_;
};

/// Member of the bounded set: l1_norm(core) <= tau and unit-or-smaller factor
/// columns, hence frob_norm(compose()) <= tau.
class NormalizedTuckerFactors {
public:
    /// Rescales every nonzero factor column to unit norm and absorbs the
    /// scales into the core. tau is set to the resulting core l1 norm.
    static NormalizedTuckerFactors normalize(const TuckerFactors& f);

    [[nodiscard]] const TuckerFactors& factors() const noexcept { return factors_; }
    [[nodiscard]] double tau() const noexcept { return tau_; }
    [[nodiscard]] DenseTensor compose() const { return factors_.compose(); }

private:
    NormalizedTuckerFactors(TuckerFactors f, double tau) : factors_(std::move(f)), tau_(tau) {}

    TuckerFactors factors_;
    double tau_;
};

/// Count of nonzero entries in a matrix column.
std::size_t column_nnz(const Matrix& m, std::size_t col);

/// Check shape tuples: equal arity, 1 <= rank_i <= dims_i, 1 <= sparsity_i <= dims_i.
void validate_tuples(const Dims& dims, const Dims& rank, const Dims& sparsity);

/// Synthetic model: each factor column has exactly s_i nonzeros at distinct
/// uniformly drawn rows, with values (-1)^u (a + |z|), u ~ Bernoulli(1/2),
/// z ~ N(0,1). Core entries are uniform on [0, 1).
///
/// Column (mode, j) draws from the substream derive_seed(seed, {mode, j});
/// the core draws from derive_seed(seed, {order}).
TuckerFactors gen_model(const Dims& dims, const Dims& rank, const Dims& sparsity, double a, std::uint64_t seed);

/// prod r_i + sum_i r_i s_i ln(n_i).
double degrees_of_freedom(const Dims& rank, const Dims& sparsity, const Dims& dims);

/// Block-diagonal combination: a (2r)-rank, s-sparse representation of
/// gamma_a * compose(za) + gamma_b * compose(zb).
TuckerFactors direct_sum(const TuckerFactors& za, const TuckerFactors& zb, double gamma_a, double gamma_b);

/// Model bundle directory: manifest.json, core.tnsr, factor_<i>.tnsr (1-based).
struct ModelBundle {
    TuckerFactors model;
    double a = 0.0;
    std::uint64_t seed = 0;
};

void write_model_bundle(const std::filesystem::path& dir, const ModelBundle& bundle);
ModelBundle read_model_bundle(const std::filesystem::path& dir);

}  // namespace tuckreg
