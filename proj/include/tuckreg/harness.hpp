#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tuckreg/measurement.hpp"
#include "tuckreg/solvers.hpp"
#include "tuckreg/tensor.hpp"

namespace tuckreg {

/// Per-method solver knobs for a sweep. Tuples come from the sweep itself.
struct MethodSettings {
    double mu = 1.0;
    std::size_t max_iters = 500;
    double tol = 1e-8;
    double lambda = 1e-3;
    Init init = Init::zero;
};

struct SweepConfig {
    Dims dims;
    Dims rank;
    Dims sparsity;
    double a = 0.5;
    std::uint64_t base_seed = 0;
    std::vector<std::size_t> m_grid;
    std::vector<double> sigma_grid;
    std::vector<Method> methods;
    std::size_t trials = 1;
    std::map<Method, MethodSettings> settings;  // missing entries use defaults
    std::size_t threads = 1;
    Distribution distribution = Distribution::gaussian;
    /// When false the timing columns are written as 0 so that repeated
    /// sweeps produce byte-identical files.
    bool timing = true;

    void validate() const;
};

struct SweepRow {
    Method method = Method::tpgd;
    std::size_t m = 0;
    double sigma = 0.0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    double normalized_error = 0.0;  // +inf for diverged trials
    std::size_t iters = 0;
    std::string stop_reason;  // "tol", "max_iters" or "diverged"
    double wall_time = 0.0;
    double per_iter_time = 0.0;
};

/// Seed of one (m, sigma, trial) instance. Methods share the instance so
/// that comparisons are paired.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t m, double sigma, std::size_t trial);

SolverConfig solver_config(const SweepConfig& cfg, Method method);

SweepRow run_trial(const SweepConfig& cfg, Method method, std::size_t m, double sigma, std::size_t trial);

/// All (method, m, sigma, trial) cells, sorted by method, m, sigma, trial.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

inline constexpr const char* kSweepHeader =
    "method,m,sigma,trial,seed,normalized_error,iters,stop_reason,wall_time_s,per_iter_time_s";

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);
void write_sweep_csv(const std::filesystem::path& path, std::span<const SweepRow> rows);
std::vector<SweepRow> read_sweep_csv(const std::filesystem::path& path);

struct CellSummary {
    Method method = Method::tpgd;
    std::size_t m = 0;
    double sigma = 0.0;
    std::size_t count = 0;
    double median = 0.0;
    double p25 = 0.0;
    double p75 = 0.0;
};

/// Quantile q in [0, 1] with linear interpolation between order statistics
/// (position q * (n - 1)). +inf sorts above every finite value.
double percentile(std::vector<double> values, double q);

std::vector<CellSummary> summarize(std::span<const SweepRow> rows);

/// ||truth - est||_F / ||truth||_F.
double normalized_error(const DenseTensor& truth, const DenseTensor& est);

struct ClassifyMetrics {
    double specificity = 0.0;
    double sensitivity = 0.0;
    double harmonic_mean = 0.0;
};

/// A prediction above `threshold` is labeled positive.
ClassifyMetrics classify_metrics(std::span<const double> predictions, std::span<const int> labels,
                                 double threshold = 0.5);

/// Shortest round-trip decimal form; "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double v);

}  // namespace tuckreg
