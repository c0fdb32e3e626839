#include "tuckreg/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "tuckreg/io.hpp"
#include "tuckreg/model.hpp"
#include "tuckreg/rng.hpp"

namespace tuckreg {

namespace {

struct Cell {
    Method method;
    std::size_t m;
    double sigma;
    std::size_t trial;
};

auto row_key(const SweepRow& r) { return std::make_tuple(static_cast<int>(r.method), r.m, r.sigma, r.trial); }

double parse_double(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw FormatError("bad number '" + s + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& s) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw FormatError("bad integer '" + s + "'");
    return v;
}

}  // namespace

void SweepConfig::validate() const {
    validate_tuples(dims, rank, sparsity);
    if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("sweep: a must be >= 0");
    if (m_grid.empty()) throw std::invalid_argument("sweep: empty m grid");
    if (sigma_grid.empty()) throw std::invalid_argument("sweep: empty sigma grid");
    if (methods.empty()) throw std::invalid_argument("sweep: empty method list");
    if (trials < 1) throw std::invalid_argument("sweep: trials must be at least 1");
    if (threads < 1) throw std::invalid_argument("sweep: threads must be at least 1");
    for (std::size_t m : m_grid) {
        if (m < 1) throw std::invalid_argument("sweep: m must be at least 1");
    }
    for (double s : sigma_grid) {
        if (!(s >= 0.0) || !std::isfinite(s)) throw std::invalid_argument("sweep: sigma must be >= 0");
    }
    for (Method method : methods) solver_config(*this, method).validate();
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t m, double sigma, std::size_t trial) {
    return derive_seed(base_seed, {m, std::bit_cast<std::uint64_t>(sigma), trial});
}

SolverConfig solver_config(const SweepConfig& cfg, Method method) {
    MethodSettings s;
    if (auto it = cfg.settings.find(method); it != cfg.settings.end()) s = it->second;
    SolverConfig sc;
    sc.method = method;
    sc.mu = s.mu;
    sc.max_iters = s.max_iters;
    sc.tol = s.tol;
    sc.lambda = s.lambda;
    sc.init = s.init;
    sc.rank = cfg.rank;
    sc.sparsity = method == Method::tpgd ? cfg.sparsity : cfg.dims;
    return sc;
}

SweepRow run_trial(const SweepConfig& cfg, Method method, std::size_t m, double sigma, std::size_t trial) {
    SweepRow row;
    row.method = method;
    row.m = m;
    row.sigma = sigma;
    row.trial = trial;
    row.seed = trial_seed(cfg.base_seed, m, sigma, trial);

    const TuckerFactors model = gen_model(cfg.dims, cfg.rank, cfg.sparsity, cfg.a, derive_seed(row.seed, {1}));
    const DenseTensor truth = model.compose();
    const LinearMapSpec map{m, cfg.dims, derive_seed(row.seed, {2}), cfg.distribution};
    const RegressionDataset data = synthesize(truth, map, sigma, derive_seed(row.seed, {3}));
    const auto op = make_operator(map);

    try {
        const FitReport report = fit(*op, data.y, solver_config(cfg, method));
        row.normalized_error = normalized_error(truth, report.estimate);
        row.iters = report.iters_run;
        row.stop_reason = std::string(to_string(report.stop_reason));
        if (cfg.timing) {
            row.wall_time = report.wall_time_total;
            row.per_iter_time = report.wall_time_per_iter;
        }
    } catch (const DivergenceError& e) {
        row.normalized_error = std::numeric_limits<double>::infinity();
        row.iters = e.iteration();
        row.stop_reason = "diverged";
    }
    return row;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    std::vector<Cell> cells;
    for (Method method : cfg.methods) {
        for (std::size_t m : cfg.m_grid) {
            for (double sigma : cfg.sigma_grid) {
                for (std::size_t t = 0; t < cfg.trials; ++t) cells.push_back({method, m, sigma, t});
            }
        }
    }

    std::vector<SweepRow> rows(cells.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                const Cell& c = cells[i];
                rows[i] = run_trial(cfg, c.method, c.m, c.sigma, c.trial);
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
                next = cells.size();
            }
        }
    };

    const std::size_t n_threads = std::min(cfg.threads, cells.size());
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    std::sort(rows.begin(), rows.end(), [](const SweepRow& x, const SweepRow& y) { return row_key(x) < row_key(y); });
    return rows;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
    out << kSweepHeader << '\n';
    for (const SweepRow& r : rows) {
        out << to_string(r.method) << ',' << r.m << ',' << format_double(r.sigma) << ',' << r.trial << ',' << r.seed
            << ',' << format_double(r.normalized_error) << ',' << r.iters << ',' << r.stop_reason << ','
            << format_double(r.wall_time) << ',' << format_double(r.per_iter_time) << '\n';
    }
}

void write_sweep_csv(const std::filesystem::path& path, std::span<const SweepRow> rows) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write " + path.string());
    write_sweep_csv(out, rows);
}

std::vector<SweepRow> read_sweep_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot read " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kSweepHeader) throw FormatError(path.string() + ": unexpected header");
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        if (f.size() != 10) throw FormatError(path.string() + ": expected 10 fields in '" + line + "'");
        SweepRow r;
        r.method = parse_method(f[0]);
        r.m = parse_u64(f[1]);
        r.sigma = parse_double(f[2]);
        r.trial = parse_u64(f[3]);
        r.seed = parse_u64(f[4]);
        r.normalized_error = parse_double(f[5]);
        r.iters = parse_u64(f[6]);
        r.stop_reason = f[7];
        r.wall_time = parse_double(f[8]);
        r.per_iter_time = parse_double(f[9]);
        rows.push_back(std::move(r));
    }
    return rows;
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("percentile: empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("percentile: q must lie in [0, 1]");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    if (frac == 0.0 || values[lo] == values[hi]) return values[lo];
    return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<CellSummary> summarize(std::span<const SweepRow> rows) {
    std::map<std::tuple<int, std::size_t, double>, std::vector<double>> cells;
    for (const SweepRow& r : rows) cells[{static_cast<int>(r.method), r.m, r.sigma}].push_back(r.normalized_error);
    std::vector<CellSummary> out;
    out.reserve(cells.size());
    for (const auto& [key, errs] : cells) {
        CellSummary c;
        c.method = static_cast<Method>(std::get<0>(key));
        c.m = std::get<1>(key);
        c.sigma = std::get<2>(key);
        c.count = errs.size();
        c.median = percentile(errs, 0.5);
        c.p25 = percentile(errs, 0.25);
        c.p75 = percentile(errs, 0.75);
        out.push_back(c);
    }
    return out;
}

double normalized_error(const DenseTensor& truth, const DenseTensor& est) {
    if (truth.dims() != est.dims()) throw std::invalid_argument("normalized_error: dims differ");
    const double denom = frob_norm(truth);
    if (denom == 0.0) throw std::invalid_argument("normalized_error: truth has zero norm");
    return frob_norm(truth - est) / denom;
}

ClassifyMetrics classify_metrics(std::span<const double> predictions, std::span<const int> labels, double threshold) {
    if (predictions.size() != labels.size()) throw std::invalid_argument("classify_metrics: length mismatch");
    std::size_t neg = 0, pos = 0, true_neg = 0, true_pos = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool predicted = predictions[i] > threshold;
        if (labels[i] == 1) {
            ++pos;
            if (predicted) ++true_pos;
        } else if (labels[i] == 0) {
            ++neg;
            if (!predicted) ++true_neg;
        } else {
            throw std::invalid_argument("classify_metrics: labels must be 0 or 1");
        }
    }
    if (neg == 0) throw std::invalid_argument("classify_metrics: no negative labels, specificity undefined");
    if (pos == 0) throw std::invalid_argument("classify_metrics: no positive labels, sensitivity undefined");
    ClassifyMetrics out;
    out.specificity = static_cast<double>(true_neg) / static_cast<double>(neg);
    out.sensitivity = static_cast<double>(true_pos) / static_cast<double>(pos);
    const double sum = out.specificity + out.sensitivity;
    out.harmonic_mean = sum > 0.0 ? 2.0 * out.specificity * out.sensitivity / sum : 0.0;
    return out;
}

}  // namespace tuckreg
