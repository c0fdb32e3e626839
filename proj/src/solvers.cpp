#include "tuckreg/solvers.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include <json.hpp>

#include "tuckreg/io.hpp"

namespace tuckreg {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kBlowup = 1e6;

double half_sq_norm(std::span<const double> r) { return 0.5 * std::inner_product(r.begin(), r.end(), r.begin(), 0.0); }

std::vector<double> residual(const MeasurementOperator& op, const DenseTensor& b, std::span<const double> y) {
    auto r = op.apply(b);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
    return r;
}

void check_inputs(const MeasurementOperator& op, std::span<const double> y) {
    if (y.size() != op.m()) throw std::invalid_argument("solver: response length must equal m");
    for (double v : y) {
        if (!std::isfinite(v)) throw std::invalid_argument("solver: non-finite response");
    }
}

struct Projected {
    DenseTensor tensor;
    std::optional<TuckerFactors> factors;
};

using Projector = std::function<Projected(const DenseTensor&)>;

bool loss_converged(double prev, double cur, double initial, double tol) {
    if (std::abs(prev - cur) <= tol * std::max(prev, kEps)) return true;
    // Exact-fit floor: nothing left to resolve in double precision.
    return cur <= kEps * kEps * initial;
}

void guard(double loss, double initial, std::size_t iter) {
    if (!std::isfinite(loss)) {
        throw DivergenceError(iter, "non-finite loss at iteration " + std::to_string(iter));
    }
    if (initial > 0.0 && loss > kBlowup * initial) {
        throw DivergenceError(iter, "loss exceeded 1e6 x its initial value at iteration " + std::to_string(iter));
    }
}

DenseTensor checked_step(const DenseTensor& b, const DenseTensor& grad, double mu, std::size_t iter) {
    std::vector<double> out(b.size());
    const auto bd = b.data();
    const auto gd = grad.data();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = bd[i] - mu * gd[i];
        if (!std::isfinite(out[i])) throw DivergenceError(iter, "non-finite iterate at iteration " + std::to_string(iter));
    }
    return DenseTensor(b.dims(), std::move(out));
}

FitReport projected_gradient(const MeasurementOperator& op, std::span<const double> y, const SolverConfig& cfg,
                             const Projector& project) {
    const auto start = Clock::now();
    FitReport report{DenseTensor::zeros(op.dims()), std::nullopt, {}, 0, 0.0, 0.0, StopReason::max_iters};

    if (cfg.init == Init::spectral) {
        auto p = project(op.adjoint(y));
        report.estimate = std::move(p.tensor);
        report.factors = std::move(p.factors);
    }
    auto r = residual(op, report.estimate, y);
    double loss = half_sq_norm(r);
    const double initial = loss;
    report.residuals.push_back(loss);

    if (loss == 0.0) {
        report.stop_reason = StopReason::tol;
    } else {
        for (std::size_t k = 1; k <= cfg.max_iters; ++k) {
            const DenseTensor step = checked_step(report.estimate, op.adjoint(r), cfg.mu, k);
            auto p = project(step);
            r = residual(op, p.tensor, y);
            const double next = half_sq_norm(r);
            guard(next, initial, k);
            report.estimate = std::move(p.tensor);
            report.factors = std::move(p.factors);
            report.residuals.push_back(next);
            report.iters_run = k;
            const bool done = loss_converged(loss, next, initial, cfg.tol);
            loss = next;
            if (done) {
                report.stop_reason = StopReason::tol;
                break;
            }
        }
    }

    report.wall_time_total = std::chrono::duration<double>(Clock::now() - start).count();
    report.wall_time_per_iter = report.iters_run > 0 ? report.wall_time_total / static_cast<double>(report.iters_run) : 0.0;
    return report;
}

void require_tuples(const MeasurementOperator& op, const SolverConfig& cfg, bool sparse) {
    validate_tuples(op.dims(), cfg.rank, sparse ? cfg.sparsity : op.dims());
}

}  // namespace

DivergenceError::DivergenceError(std::size_t iteration, const std::string& what)
    : std::runtime_error(what), iteration_(iteration) {}

std::string_view to_string(Method m) {
    switch (m) {
        case Method::tpgd: return "tpgd";
        case Method::pgd_tucker: return "pgd_tucker";
        case Method::lasso: return "lasso";
    }
    return "tpgd";
}

Method parse_method(std::string_view name) {
    if (name == "tpgd") return Method::tpgd;
    if (name == "pgd_tucker") return Method::pgd_tucker;
    if (name == "lasso") return Method::lasso;
    throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

std::string_view to_string(StopReason r) { return r == StopReason::tol ? "tol" : "max_iters"; }

void SolverConfig::validate() const {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("SolverConfig: mu must be positive");
    if (!(tol >= 0.0)) throw std::invalid_argument("SolverConfig: tol must be nonnegative");
    if (max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be at least 1");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("SolverConfig: lambda must be >= 0");
}

FitReport tpgd(const MeasurementOperator& op, std::span<const double> y, const SolverConfig& cfg) {
    cfg.validate();
    check_inputs(op, y);
    require_tuples(op, cfg, true);
    ProjectionConfig pc = cfg.projection;
    pc.rank = cfg.rank;
    pc.sparsity = cfg.sparsity;
    pc.validate();
    return projected_gradient(op, y, cfg, [&pc](const DenseTensor& t) {
        TuckerFactors f = project_sparse_hosvd(t, pc);
        DenseTensor z = f.compose();
        return Projected{std::move(z), std::move(f)};
    });
}

FitReport pgd_tucker(const MeasurementOperator& op, std::span<const double> y, const SolverConfig& cfg) {
    cfg.validate();
    check_inputs(op, y);
    require_tuples(op, cfg, false);
    return projected_gradient(op, y, cfg, [&cfg](const DenseTensor& t) {
        TuckerFactors f = project_tucker(t, cfg.rank);
        DenseTensor z = f.compose();
        return Projected{std::move(z), std::move(f)};
    });
}

double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

double operator_norm_sq(const MeasurementOperator& op, std::size_t iters) {
    const std::size_t n = dims_product(op.dims());
    DenseTensor v(op.dims(), std::vector<double>(n, 1.0 / std::sqrt(static_cast<double>(n))));
    double lambda = 0.0;
    for (std::size_t k = 0; k < iters; ++k) {
        DenseTensor w = op.adjoint(op.apply(v));
        lambda = inner(v, w);
        const double norm = frob_norm(w);
        if (norm == 0.0) return 0.0;
        v = (1.0 / norm) * std::move(w);
    }
    return lambda;
}

FitReport lasso_ista(const MeasurementOperator& op, std::span<const double> y, const SolverConfig& cfg) {
    cfg.validate();
    check_inputs(op, y);
    const auto start = Clock::now();

    const double lip = operator_norm_sq(op);
    const double mu = lip > 0.0 ? 0.9 / lip : 1.0;
    const double shrink = mu * cfg.lambda;

    FitReport report{DenseTensor::zeros(op.dims()), std::nullopt, {}, 0, 0.0, 0.0, StopReason::max_iters};
    auto r = residual(op, report.estimate, y);
    double loss = half_sq_norm(r);
    double objective = loss;
    const double initial = loss;
    report.residuals.push_back(loss);

    if (loss == 0.0) {
        report.stop_reason = StopReason::tol;
    } else {
        for (std::size_t k = 1; k <= cfg.max_iters; ++k) {
            const DenseTensor step = checked_step(report.estimate, op.adjoint(r), mu, k);
            std::vector<double> b(step.size());
            const auto sd = step.data();
            for (std::size_t i = 0; i < b.size(); ++i) b[i] = soft_threshold(sd[i], shrink);
            DenseTensor next_b(op.dims(), std::move(b));
            r = residual(op, next_b, y);
            const double next_loss = half_sq_norm(r);
            guard(next_loss, initial, k);
            const double next_objective = next_loss + cfg.lambda * l1_norm(next_b);
            report.estimate = std::move(next_b);
            report.residuals.push_back(next_loss);
            report.iters_run = k;
            const bool done = loss_converged(objective, next_objective, initial, cfg.tol);
            objective = next_objective;
            loss = next_loss;
            if (done) {
                report.stop_reason = StopReason::tol;
                break;
            }
        }
    }

    report.wall_time_total = std::chrono::duration<double>(Clock::now() - start).count();
    report.wall_time_per_iter = report.iters_run > 0 ? report.wall_time_total / static_cast<double>(report.iters_run) : 0.0;
    return report;
}

FitReport fit(const MeasurementOperator& op, std::span<const double> y, const SolverConfig& cfg) {
    switch (cfg.method) {
        case Method::tpgd: return tpgd(op, y, cfg);
        case Method::pgd_tucker: return pgd_tucker(op, y, cfg);
        case Method::lasso: return lasso_ista(op, y, cfg);
    }
    throw std::invalid_argument("fit: unknown method");
}

FitReport fit(const RegressionDataset& data, const SolverConfig& cfg) {
    const auto op = make_operator(data.map);
    return fit(*op, data.y, cfg);
}

// ---------------------------------------------------------------------------

RateEstimate convergence_rate(std::span<const double> residuals) {
    if (residuals.size() < 3) throw std::invalid_argument("convergence_rate: need at least 3 residuals");
    const double last = residuals.back();
    if (!(last < residuals.front())) return RateEstimate{1.0, 0.0, false};

    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t k = 0; k < residuals.size(); ++k) {
        if (!(residuals[k] > 10.0 * last) || !(residuals[k] > 0.0)) break;
        xs.push_back(static_cast<double>(k));
        ys.push_back(std::log(residuals[k]));
    }
    if (xs.size() < 3) throw std::invalid_argument("convergence_rate: fewer than 3 points above the floor");

    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    double r2 = 1.0;
    if (syy > 0.0) {
        double ss_res = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double fit = my + slope * (xs[i] - mx);
            ss_res += (ys[i] - fit) * (ys[i] - fit);
        }
        r2 = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    return RateEstimate{std::exp(slope), r2, true};
}

RateEstimate convergence_rate(const FitReport& report) { return convergence_rate(report.residuals); }

void write_fit_report(const std::filesystem::path& dir, const FitReport& report, const SolverConfig& cfg) {
    std::filesystem::create_directories(dir);
    write_tnsr(dir / "estimate.tnsr", report.estimate);
    if (report.factors) write_model_bundle(dir / "factors", ModelBundle{*report.factors, 0.0, 0});

    nlohmann::json j = {
        {"method", std::string(to_string(cfg.method))},
        {"mu", cfg.mu},
        {"max_iters", cfg.max_iters},
        {"tol", cfg.tol},
        {"rank", cfg.rank},
        {"sparsity", cfg.sparsity},
        {"lambda", cfg.lambda},
        {"iters_run", report.iters_run},
        {"stop_reason", std::string(to_string(report.stop_reason))},
        {"wall_time_total_s", report.wall_time_total},
        {"wall_time_per_iter_s", report.wall_time_per_iter},
        {"residuals", report.residuals},
    };
    std::ofstream out(dir / "report.json");
    if (!out) throw FormatError("cannot write " + (dir / "report.json").string());
    out << j.dump(2) << '\n';
}

}  // namespace tuckreg
