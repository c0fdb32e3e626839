#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "oracles.hpp"
#include "tuckreg/solvers.hpp"

using namespace tuckreg;

namespace {

struct Instance {
    DenseTensor truth;
    LinearMapSpec map;
    std::vector<double> y;
};

Instance desk_instance(std::uint64_t seed, std::size_t m = 250, double sigma = 0.0) {
    const Dims dims{10, 10, 10};
    DenseTensor truth = gen_model(dims, {2, 2, 2}, {3, 3, 3}, 0.5, seed).compose();
    LinearMapSpec map{m, dims, seed + 1000, Distribution::gaussian};
    auto y = synthesize(truth, map, sigma, seed + 2000).y;
    return {std::move(truth), map, std::move(y)};
}

SolverConfig desk_config() {
    SolverConfig cfg;
    cfg.rank = {2, 2, 2};
    cfg.sparsity = {3, 3, 3};
    return cfg;
}

double rel_err(const DenseTensor& truth, const DenseTensor& est) { return frob_norm(truth - est) / frob_norm(truth); }

}  // namespace

TEST(SoftThreshold, ClosedForm) {
    EXPECT_DOUBLE_EQ(soft_threshold(1.2, 0.5), 0.7);
    EXPECT_EQ(soft_threshold(-0.3, 0.5), 0.0);
    EXPECT_DOUBLE_EQ(soft_threshold(-2.0, 0.5), -1.5);
}

TEST(Tpgd, ZeroResponseStopsImmediately) {
    const LinearMapSpec map{40, {5, 5, 5}, 1, Distribution::gaussian};
    const auto op = make_operator(map);
    const std::vector<double> y(40, 0.0);
    SolverConfig cfg;
    cfg.rank = {2, 2, 2};
    cfg.sparsity = {2, 2, 2};
    for (Method m : {Method::tpgd, Method::pgd_tucker, Method::lasso}) {
        cfg.method = m;
        cfg.sparsity = m == Method::pgd_tucker ? Dims{5, 5, 5} : Dims{2, 2, 2};
        const FitReport r = fit(*op, y, cfg);
        EXPECT_EQ(r.iters_run, 0u);
        EXPECT_EQ(r.residuals.size(), 1u);
        EXPECT_EQ(r.stop_reason, StopReason::tol);
        EXPECT_EQ(r.estimate, DenseTensor::zeros(map.dims));
    }
}

TEST(Tpgd, FirstIterationIsProjectedAdjoint) {
    const Instance in = desk_instance(3);
    const auto op = make_operator(in.map);
    SolverConfig cfg = desk_config();
    cfg.max_iters = 1;
    cfg.mu = 0.8;
    const FitReport r = tpgd(*op, in.y, cfg);
    ProjectionConfig pc;
    pc.rank = cfg.rank;
    pc.sparsity = cfg.sparsity;
    const DenseTensor want = project_sparse_hosvd(0.8 * op->adjoint(in.y), pc).compose();
    EXPECT_EQ(r.iters_run, 1u);
    EXPECT_EQ(r.residuals.size(), 2u);
    EXPECT_LE(oracle::rel_diff(r.estimate, want), 1e-14);
}

TEST(Tpgd, NoiselessDeskRecovery) {
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Instance in = desk_instance(seed);
        const auto op = make_operator(in.map);
        const FitReport r = tpgd(*op, in.y, desk_config());
        ASSERT_EQ(r.residuals.size(), r.iters_run + 1);
        ASSERT_TRUE(r.factors.has_value());
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t c = 0; c < 2; ++c) EXPECT_LE(column_nnz(r.factors->factors()[i], c), 3u);
        if (rel_err(in.truth, r.estimate) > 1e-3) continue;
        ++ok;
        const double ynorm2 = std::inner_product(in.y.begin(), in.y.end(), in.y.begin(), 0.0);
        EXPECT_LE(2.0 * r.residuals.back(), 1e-10 * ynorm2);
        std::size_t up = 0;
        for (std::size_t k = 1; k < r.residuals.size(); ++k) up += r.residuals[k] > r.residuals[k - 1];
        EXPECT_LE(static_cast<double>(up), 0.05 * static_cast<double>(r.iters_run)) << "seed " << seed;
        const RateEstimate rate = convergence_rate(r);
        EXPECT_GE(rate.r2, 0.9);
        EXPECT_GT(rate.gamma_hat, 0.0);
        EXPECT_LT(rate.gamma_hat, 1.0);
    }
    EXPECT_GE(ok, 16);
}

TEST(Tpgd, Deterministic) {
    const Instance in = desk_instance(5, 200, 0.1);
    const auto op = make_operator(in.map);
    const FitReport a = tpgd(*op, in.y, desk_config());
    const FitReport b = tpgd(*op, in.y, desk_config());
    EXPECT_EQ(a.residuals, b.residuals);
    EXPECT_EQ(a.estimate, b.estimate);
}

TEST(Tpgd, SpectralInitStartsFromProjection) {
    const Instance in = desk_instance(6);
    const auto op = make_operator(in.map);
    SolverConfig cfg = desk_config();
    cfg.init = Init::spectral;
    const FitReport r = tpgd(*op, in.y, cfg);
    EXPECT_LT(r.residuals.front(), 0.5 * std::inner_product(in.y.begin(), in.y.end(), in.y.begin(), 0.0));
    EXPECT_LE(rel_err(in.truth, r.estimate), 1e-3);
}

TEST(Tpgd, ArgumentErrors) {
    const Instance in = desk_instance(1);
    const auto op = make_operator(in.map);
    SolverConfig cfg = desk_config();
    std::vector<double> short_y(in.y.begin(), in.y.end() - 1);
    EXPECT_THROW(tpgd(*op, short_y, cfg), std::invalid_argument);
    cfg.rank = {2, 2};
    EXPECT_THROW(tpgd(*op, in.y, cfg), std::invalid_argument);
    cfg = desk_config();
    cfg.mu = 0.0;
    EXPECT_THROW(tpgd(*op, in.y, cfg), std::invalid_argument);
    cfg = desk_config();
    cfg.max_iters = 0;
    EXPECT_THROW(tpgd(*op, in.y, cfg), std::invalid_argument);
}

TEST(Tpgd, DivergenceNamesIteration) {
    const Instance in = desk_instance(2);
    const auto op = make_operator(in.map);
    SolverConfig cfg = desk_config();
    cfg.method = Method::pgd_tucker;
    cfg.sparsity = {10, 10, 10};
    cfg.mu = 50.0;
    try {
        (void)fit(*op, in.y, cfg);
        FAIL() << "expected divergence";
    } catch (const DivergenceError& e) {
        EXPECT_GE(e.iteration(), 1u);
        EXPECT_NE(std::string(e.what()).find(std::to_string(e.iteration())), std::string::npos);
    }
}

TEST(PgdTucker, RecoversLowTuckerRank) {
    const Dims dims{10, 10, 10};
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const DenseTensor core = oracle::random_tensor({2, 2, 2}, 10 + seed);
        const std::vector<Matrix> f{oracle::random_matrix(10, 2, 20 + seed), oracle::random_matrix(10, 2, 30 + seed),
                                    oracle::random_matrix(10, 2, 40 + seed)};
        const DenseTensor truth = tucker_compose(core, f);
        // Tucker degrees of freedom: 8 + 3 * 10 * 2 = 68, so 5x is 340.
        const LinearMapSpec map{400, dims, 50 + seed, Distribution::gaussian};
        const auto op = make_operator(map);
        SolverConfig cfg;
        cfg.method = Method::pgd_tucker;
        cfg.rank = {2, 2, 2};
        cfg.sparsity = dims;
        const FitReport r = fit(*op, apply(map, truth), cfg);
        EXPECT_LE(rel_err(truth, r.estimate), 1e-3) << "seed " << seed;
    }
}

TEST(Lasso, HugeLambdaGivesZero) {
    const Instance in = desk_instance(4);
    const auto op = make_operator(in.map);
    SolverConfig cfg;
    cfg.method = Method::lasso;
    cfg.lambda = 1e6;
    const FitReport r = lasso_ista(*op, in.y, cfg);
    EXPECT_EQ(r.estimate, DenseTensor::zeros(in.map.dims));
}

TEST(Lasso, ZeroLambdaMatchesLeastSquares) {
    const LinearMapSpec map{20, {3, 3}, 8, Distribution::gaussian};
    const DenseTensor truth = oracle::random_tensor({3, 3}, 9);
    const RegressionDataset data = synthesize(truth, map, 0.2, 10);
    const auto want = oracle::least_squares(oracle::design_matrix(map), data.y);
    SolverConfig cfg;
    cfg.method = Method::lasso;
    cfg.lambda = 0.0;
    cfg.tol = 0.0;
    cfg.max_iters = 5000;
    const FitReport r = fit(data, cfg);
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(r.estimate.data()[i], want[i], 1e-6);
}

TEST(Lasso, ObjectiveNonincreasing) {
    const LinearMapSpec map{30, {4, 4}, 12, Distribution::rademacher};
    const DenseTensor truth = oracle::random_tensor({4, 4}, 13);
    const auto op = make_operator(map);
    const auto y = synthesize(truth, map, 0.1, 14).y;
    SolverConfig cfg;
    cfg.method = Method::lasso;
    cfg.lambda = 0.05;
    cfg.tol = 0.0;
    double prev = INFINITY;
    for (std::size_t k = 1; k <= 30; ++k) {
        cfg.max_iters = k;
        const FitReport r = lasso_ista(*op, y, cfg);
        const double obj = r.residuals.back() + cfg.lambda * l1_norm(r.estimate);
        EXPECT_LE(obj, prev * (1 + 1e-12));
        prev = obj;
    }
    cfg.lambda = -1.0;
    EXPECT_THROW(lasso_ista(*op, y, cfg), std::invalid_argument);
}

TEST(OperatorNorm, MatchesDenseSpectrum) {
    const LinearMapSpec map{15, {3, 4}, 3, Distribution::gaussian};
    const auto op = make_operator(map);
    const Eigen::MatrixXd a = oracle::design_matrix(map);
    const double want = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues()(0);
    EXPECT_NEAR(operator_norm_sq(*op, 200), want * want, 1e-6 * want * want);
}

TEST(ConvergenceRate, GeometricTrace) {
    std::vector<double> trace;
    for (int k = 0; k < 20; ++k) trace.push_back(std::pow(0.5, k));
    const RateEstimate r = convergence_rate(trace);
    EXPECT_NEAR(r.gamma_hat, 0.5, 1e-12);
    EXPECT_NEAR(r.r2, 1.0, 1e-12);
    EXPECT_TRUE(r.converging);
}

TEST(ConvergenceRate, ConstantTraceRejected) {
    const RateEstimate r = convergence_rate(std::vector<double>(10, 3.0));
    EXPECT_EQ(r.gamma_hat, 1.0);
    EXPECT_FALSE(r.converging);
}

TEST(ConvergenceRate, TooFewPoints) {
    EXPECT_THROW(convergence_rate(std::vector<double>{1.0, 0.5}), std::invalid_argument);
    // Only two points sit above 10x the final value.
    EXPECT_THROW(convergence_rate(std::vector<double>{100.0, 50.0, 1.0, 1.0}), std::invalid_argument);
}

TEST(FitReport, WritesJsonAndTensor) {
    const Instance in = desk_instance(7);
    const auto op = make_operator(in.map);
    SolverConfig cfg = desk_config();
    cfg.max_iters = 5;
    const FitReport r = tpgd(*op, in.y, cfg);
    const auto dir = std::filesystem::temp_directory_path() / "tuckreg_test_fit";
    std::filesystem::remove_all(dir);
    write_fit_report(dir, r, cfg);
    std::ifstream f(dir / "report.json");
    const auto j = nlohmann::json::parse(f);
    EXPECT_EQ(j["method"], "tpgd");
    EXPECT_EQ(j["iters_run"], 5);
    EXPECT_EQ(j["residuals"].size(), 6u);
    EXPECT_EQ(j["stop_reason"], "max_iters");
    EXPECT_TRUE(std::filesystem::exists(dir / "estimate.tnsr"));
    EXPECT_TRUE(std::filesystem::exists(dir / "factors" / "manifest.json"));
    EXPECT_GT(r.wall_time_total, 0.0);
    EXPECT_NEAR(r.wall_time_per_iter * 5, r.wall_time_total, 1e-12);
}
