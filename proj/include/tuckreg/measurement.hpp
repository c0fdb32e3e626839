#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tuckreg/model.hpp"
#include "tuckreg/tensor.hpp"

namespace tuckreg {

/// Entry law of the sensing tensors. All three have mean 0 and variance 1/m.
enum class Distribution { gaussian, rademacher, uniform };

std::string_view to_string(Distribution d);
Distribution parse_distribution(std::string_view name);

/// Seed-defined linear map X: R^{n_1 x ... x n_d} -> R^m with
/// X(Z)_i = <X_i, Z>. Sensing tensor X_i is regenerated on demand from the
/// substream derive_seed(seed, {i}).
struct LinearMapSpec {
    std::size_t m = 1;
    Dims dims;
    std::uint64_t seed = 0;
    Distribution distribution = Distribution::gaussian;

    /// Throws std::invalid_argument unless m >= 1 and dims is a valid shape.
    void validate() const;
};

/// Sensing tensor X_i for a 0-based sample index i (std::out_of_range if i >= m).
DenseTensor sensing_tensor(const LinearMapSpec& map, std::size_t i);

/// Abstract measurement operator with forward map and adjoint
/// X*(v) = sum_i v_i X_i.
class MeasurementOperator {
public:
    virtual ~MeasurementOperator() = default;

    [[nodiscard]] virtual std::size_t m() const = 0;
    [[nodiscard]] virtual const Dims& dims() const = 0;
    [[nodiscard]] virtual std::vector<double> apply(const DenseTensor& z) const = 0;
    [[nodiscard]] virtual DenseTensor adjoint(std::span<const double> v) const = 0;
};

/// Regenerates one sensing tensor at a time; peak extra memory is one tensor.
class ImplicitOperator final : public MeasurementOperator {
public:
    explicit ImplicitOperator(LinearMapSpec spec);

    [[nodiscard]] std::size_t m() const override { return spec_.m; }
    [[nodiscard]] const Dims& dims() const override { return spec_.dims; }
    [[nodiscard]] std::vector<double> apply(const DenseTensor& z) const override;
    [[nodiscard]] DenseTensor adjoint(std::span<const double> v) const override;

    [[nodiscard]] const LinearMapSpec& spec() const noexcept { return spec_; }

private:
    LinearMapSpec spec_;
};

/// Explicit operator holding vec(X_i) as the rows of an m x N matrix.
class DenseOperator final : public MeasurementOperator {
public:
    /// rows must be m x prod(dims).
    DenseOperator(Dims dims, Matrix rows);

    /// Materialize a seed-defined map; entries are bit-identical to sensing_tensor().
    static DenseOperator materialize(const LinearMapSpec& spec);

    [[nodiscard]] std::size_t m() const override { return rows_.rows(); }
    [[nodiscard]] const Dims& dims() const override { return dims_; }
    [[nodiscard]] std::vector<double> apply(const DenseTensor& z) const override;
    [[nodiscard]] DenseTensor adjoint(std::span<const double> v) const override;

private:
    Dims dims_;
    Matrix rows_;
};

/// Dense operator when the materialized matrix fits in max_bytes, implicit otherwise.
std::unique_ptr<MeasurementOperator> make_operator(const LinearMapSpec& spec,
                                                   std::size_t max_bytes = std::size_t{512} << 20);

std::vector<double> apply(const LinearMapSpec& map, const DenseTensor& z);
DenseTensor adjoint(const LinearMapSpec& map, std::span<const double> v);

/// y = X(B) + eta with eta ~ N(0, sigma^2 I).
struct RegressionDataset {
    std::vector<double> y;
    LinearMapSpec map;
    double sigma = 0.0;
    std::uint64_t noise_seed = 0;
    std::string model_ref;  // path of the generating model bundle, may be empty
};

/// Noise entry i comes from the stream make_engine(derive_seed(noise_seed, {0})).
RegressionDataset synthesize(const DenseTensor& truth, const LinearMapSpec& map, double sigma,
                             std::uint64_t noise_seed);
RegressionDataset synthesize(const TuckerFactors& model, const LinearMapSpec& map, double sigma,
                             std::uint64_t noise_seed);

/// Dataset directory: manifest.json + y.f64.
void write_dataset(const std::filesystem::path& dir, const RegressionDataset& data);
RegressionDataset read_dataset(const std::filesystem::path& dir);

struct RipEstimate {
    double delta_hat = 0.0;
    std::vector<double> samples;  // ||X(Z)||^2 / ||Z||_F^2 per trial
};

/// Monte-Carlo lower estimate of the restricted isometry constant over the
/// bounded structured set: max over sampled Z of | ||X(Z)||^2/||Z||_F^2 - 1 |.
/// Trial t samples Z from derive_seed(seed, {t}), so a longer run extends a
/// shorter one.
RipEstimate rip_probe(const MeasurementOperator& op, const Dims& rank, const Dims& sparsity, double tau,
                      std::size_t trials, std::uint64_t seed);

}  // namespace tuckreg
