#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "tuckreg/measurement.hpp"
#include "tuckreg/model.hpp"
#include "tuckreg/projection.hpp"

namespace tuckreg {

enum class Method { tpgd, pgd_tucker, lasso };
enum class Init { zero, spectral };
enum class StopReason { tol, max_iters };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);
std::string_view to_string(StopReason r);

struct SolverConfig {
    Method method = Method::tpgd;
    double mu = 1.0;  // gradient step; lasso derives its own step from the operator norm
    std::size_t max_iters = 500;
    double tol = 1e-8;  // relative change of the loss between iterations
    Dims rank;
    Dims sparsity;
    double lambda = 0.0;  // lasso l1 weight
    ProjectionConfig projection;  // rank/sparsity here are overwritten from the fields above
    Init init = Init::zero;

    void validate() const;
};

struct FitReport {
    DenseTensor estimate;
    std::optional<TuckerFactors> factors;
    /// 0.5 * ||y - X(B^k)||^2 for k = 0 .. iters_run.
    std::vector<double> residuals;
    std::size_t iters_run = 0;
    double wall_time_total = 0.0;     // seconds
    double wall_time_per_iter = 0.0;  // seconds
    StopReason stop_reason = StopReason::max_iters;
};

/// Non-finite loss or growth beyond 1e6 times the initial loss.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::size_t iteration, const std::string& what);
    [[nodiscard]] std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

/// Projected gradient descent onto sparse low-Tucker-rank tensors:
///   B~ = B - mu X*(X(B) - y),  B <- project_sparse_hosvd(B~).
FitReport tpgd(const MeasurementOperator& op, std::span<const double> y, const SolverConfig& cfg);

/// Same loop with the dense truncated HOSVD as projection.
FitReport pgd_tucker(const MeasurementOperator& op, std::span<const double> y, const SolverConfig& cfg);

/// Iterative soft-thresholding on vec(B) with step 0.9 / ||X||^2.
FitReport lasso_ista(const MeasurementOperator& op, std::span<const double> y, const SolverConfig& cfg);

/// Dispatch on cfg.method.
FitReport fit(const MeasurementOperator& op, std::span<const double> y, const SolverConfig& cfg);

/// Builds the operator for the dataset's map (materialized when it fits).
FitReport fit(const RegressionDataset& data, const SolverConfig& cfg);

double soft_threshold(double x, double t);

/// Largest eigenvalue of X* X by power iteration from a fixed start.
double operator_norm_sq(const MeasurementOperator& op, std::size_t iters = 20);

struct RateEstimate {
    double gamma_hat = 1.0;
    double r2 = 0.0;
    bool converging = false;  // false when the trace does not decay at all
};

/// Least-squares fit of log(residual) against the iteration index over the
/// leading segment that stays above 10x the final value. gamma_hat is the
/// fitted per-iteration ratio. A trace that never decays is reported as
/// gamma_hat = 1, converging = false. Throws std::invalid_argument when the
/// segment has fewer than 3 points.
RateEstimate convergence_rate(std::span<const double> residuals);
RateEstimate convergence_rate(const FitReport& report);

/// report.json + estimate.tnsr (and the factor bundle when structured).
void write_fit_report(const std::filesystem::path& dir, const FitReport& report, const SolverConfig& cfg);

}  // namespace tuckreg
