#include "tuckreg/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "tuckreg/bounds.hpp"
#include "tuckreg/harness.hpp"
#include "tuckreg/io.hpp"
#include "tuckreg/measurement.hpp"
#include "tuckreg/model.hpp"
#include "tuckreg/solvers.hpp"

namespace tuckreg {

using nlohmann::json;

namespace {

/// Bad user input detected after CLI11 parsing.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

Dims parse_sizes(const std::string& text, const std::string& flag) {
    Dims out;
    for (const std::string& tok : split_list(text)) {
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) {
            throw UsageError("--" + flag + ": '" + tok + "' is not a nonnegative integer");
        }
        out.push_back(v);
    }
    if (out.empty()) throw UsageError("--" + flag + ": empty list");
    return out;
}

std::vector<double> parse_reals(const std::string& text, const std::string& what) {
    std::vector<double> out;
    for (const std::string& tok : split_list(text)) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) throw UsageError(what + ": '" + tok + "' is not a number");
        out.push_back(v);
    }
    return out;
}

std::vector<double> read_numbers(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_reals(ss.str(), path);
}

Init parse_init(const std::string& s) {
    if (s == "zero") return Init::zero;
    if (s == "spectral") return Init::spectral;
    throw UsageError("--init: expected zero or spectral");
}

DenseTensor load_tensor(const std::filesystem::path& p, const char* tnsr_name) {
    if (std::filesystem::is_directory(p)) {
        if (std::filesystem::exists(p / "manifest.json") && !std::filesystem::exists(p / tnsr_name)) {
            return read_model_bundle(p).model.compose();
        }
        return read_tnsr(p / tnsr_name);
    }
    return read_tnsr(p);
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

// ---------------------------------------------------------------------------

struct GenModelArgs {
    std::string dims, rank, sparsity, out;
    double a = 0.5;
    std::uint64_t seed = 0;
};

struct GenDataArgs {
    std::string model, out, distribution = "gaussian";
    std::size_t m = 0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t noise_seed = 0;
};

struct FitArgs {
    std::string data, method = "tpgd", rank, sparsity, out, init = "zero", truth;
    double mu = 1.0, tol = 1e-8, lambda = 0.0;
    std::size_t max_iters = 500;
    bool no_refine = false;
};

struct SweepArgs {
    std::string dims, rank, sparsity, m_grid, sigma_grid, methods = "tpgd,pgd_tucker", out, summary, init = "zero",
        distribution = "gaussian";
    double a = 0.5, mu = 1.0, tol = 1e-8, lambda = 1e-3;
    std::uint64_t seed = 0;
    std::size_t trials = 1, threads = 1, max_iters = 500;
    bool no_timing = false;
    bool large_scale = false;
};

struct EvalErrorArgs {
    std::string truth, estimate;
};

struct EvalClassifyArgs {
    std::string predictions, labels;
    double threshold = 0.5;
};

struct BoundArgs {
    std::string dims, rank, sparsity, format = "json";
    double tau = 1.0, delta = 0.5, eps = 0.1, eps_cover = 0.5, K1 = 1.0, K2 = 1.0;
};

struct RipArgs {
    std::string dims, rank, sparsity, distribution = "gaussian";
    std::size_t m = 0, trials = 100;
    double tau = 1.0;
    std::uint64_t seed = 0, probe_seed = 0;
};

void run_gen_model(const GenModelArgs& g, std::ostream& out) {
    const Dims dims = parse_sizes(g.dims, "dims");
    const Dims rank = parse_sizes(g.rank, "rank");
    const Dims sparsity = parse_sizes(g.sparsity, "sparsity");
    TuckerFactors model = gen_model(dims, rank, sparsity, g.a, g.seed);
    write_model_bundle(g.out, ModelBundle{model, g.a, g.seed});
    emit(out, {{"model", g.out}, {"dims", dims}, {"rank", rank}, {"sparsity", sparsity}, {"a", g.a}, {"seed", g.seed}});
}

void run_gen_data(const GenDataArgs& g, std::ostream& out) {
    const ModelBundle bundle = read_model_bundle(g.model);
    const LinearMapSpec map{g.m, bundle.model.dims(), g.seed, parse_distribution(g.distribution)};
    RegressionDataset data = synthesize(bundle.model, map, g.sigma, g.noise_seed);
    data.model_ref = g.model;
    write_dataset(g.out, data);
    emit(out, {{"data", g.out}, {"m", g.m}, {"sigma", g.sigma}, {"seed", g.seed}, {"noise_seed", g.noise_seed}});
}

void run_fit(const FitArgs& f, std::ostream& out) {
    const RegressionDataset data = read_dataset(f.data);
    SolverConfig cfg;
    cfg.method = parse_method(f.method);
    cfg.mu = f.mu;
    cfg.max_iters = f.max_iters;
    cfg.tol = f.tol;
    cfg.lambda = f.lambda;
    cfg.init = parse_init(f.init);
    cfg.projection.subspace_refine = !f.no_refine;
    if (cfg.method != Method::lasso) {
        if (f.rank.empty()) throw UsageError("--rank is required for " + f.method);
        cfg.rank = parse_sizes(f.rank, "rank");
        if (cfg.method == Method::tpgd) {
            if (f.sparsity.empty()) throw UsageError("--sparsity is required for tpgd");
            cfg.sparsity = parse_sizes(f.sparsity, "sparsity");
        } else {
            cfg.sparsity = data.map.dims;
        }
    }
    const FitReport report = fit(data, cfg);
    write_fit_report(f.out, report, cfg);

    json j = {{"out", f.out},
              {"method", f.method},
              {"iters_run", report.iters_run},
              {"stop_reason", std::string(to_string(report.stop_reason))},
              {"final_residual", report.residuals.back()},
              {"wall_time_per_iter_s", report.wall_time_per_iter}};
    if (!f.truth.empty()) j["normalized_error"] = normalized_error(load_tensor(f.truth, "estimate.tnsr"), report.estimate);
    emit(out, j);
}

void apply_large_scale(SweepArgs& s, const CLI::App& sub) {
    auto unset = [&sub](const char* name) { return sub.get_option(name)->count() == 0; };
    if (unset("--dims")) s.dims = "50,50,30";
    if (unset("--rank")) s.rank = "3,3,3";
    if (unset("--sparsity")) s.sparsity = "6,6,4";
    if (unset("--a")) s.a = 0.5;
    if (unset("--m-grid")) s.m_grid = "300,500,700,900,1100,1300,1500";
    if (unset("--sigma-grid")) s.sigma_grid = "0.1,0.4,0.7";
    if (unset("--trials")) s.trials = 50;
}

void run_sweep_cmd(SweepArgs s, const CLI::App& sub, std::ostream& out) {
    if (s.large_scale) apply_large_scale(s, sub);
    if (s.dims.empty() || s.rank.empty() || s.sparsity.empty()) {
        throw UsageError("--dims, --rank and --sparsity are required (or --large-scale)");
    }
    if (s.m_grid.empty() || s.sigma_grid.empty()) throw UsageError("--m-grid and --sigma-grid are required");
    if (s.out.empty()) throw UsageError("--out is required");

    SweepConfig cfg;
    cfg.dims = parse_sizes(s.dims, "dims");
    cfg.rank = parse_sizes(s.rank, "rank");
    cfg.sparsity = parse_sizes(s.sparsity, "sparsity");
    cfg.a = s.a;
    cfg.base_seed = s.seed;
    cfg.m_grid = parse_sizes(s.m_grid, "m-grid");
    cfg.sigma_grid = parse_reals(s.sigma_grid, "--sigma-grid");
    for (const std::string& name : split_list(s.methods)) cfg.methods.push_back(parse_method(name));
    cfg.trials = s.trials;
    cfg.threads = s.threads;
    cfg.timing = !s.no_timing;
    cfg.distribution = parse_distribution(s.distribution);
    MethodSettings ms{s.mu, s.max_iters, s.tol, s.lambda, parse_init(s.init)};
    for (Method m : cfg.methods) cfg.settings[m] = ms;

    const std::vector<SweepRow> rows = run_sweep(cfg);
    write_sweep_csv(std::filesystem::path(s.out), rows);

    std::ostringstream table;
    table << "method,m,sigma,count,median,p25,p75\n";
    for (const CellSummary& c : summarize(rows)) {
        table << to_string(c.method) << ',' << c.m << ',' << format_double(c.sigma) << ',' << c.count << ','
              << format_double(c.median) << ',' << format_double(c.p25) << ',' << format_double(c.p75) << '\n';
    }
    if (!s.summary.empty()) {
        std::ofstream f(s.summary, std::ios::binary);
        if (!f) throw FormatError("cannot write " + s.summary);
        f << table.str();
    }
    out << table.str();
}

void run_eval_error(const EvalErrorArgs& e, std::ostream& out) {
    const DenseTensor truth = load_tensor(e.truth, "estimate.tnsr");
    const DenseTensor est = load_tensor(e.estimate, "estimate.tnsr");
    emit(out, {{"normalized_error", normalized_error(truth, est)}});
}

void run_eval_classify(const EvalClassifyArgs& e, std::ostream& out) {
    const std::vector<double> preds = read_numbers(e.predictions);
    std::vector<int> labels;
    for (double v : read_numbers(e.labels)) {
        if (v != 0.0 && v != 1.0) throw UsageError("labels must be 0 or 1");
        labels.push_back(static_cast<int>(v));
    }
    const ClassifyMetrics m = classify_metrics(preds, labels, e.threshold);
    emit(out, {{"specificity", m.specificity}, {"sensitivity", m.sensitivity}, {"harmonic_mean", m.harmonic_mean}});
}

void run_bound(const BoundArgs& b, std::ostream& out) {
    BoundInputs in;
    in.dims = parse_sizes(b.dims, "dims");
    in.rank = parse_sizes(b.rank, "rank");
    in.sparsity = parse_sizes(b.sparsity, "sparsity");
    in.tau = b.tau;
    in.epsilon_cover = b.eps_cover;
    in.delta = b.delta;
    in.failure_prob = b.eps;
    in.K1 = b.K1;
    in.K2 = b.K2;
    in.validate();

    const double core = log_cover_core(in.rank, in.tau, in.epsilon_cover);
    std::vector<double> factors;
    for (std::size_t i = 0; i < in.dims.size(); ++i) {
        factors.push_back(log_cover_factor(in.dims[i], in.rank[i], in.sparsity[i], in.epsilon_cover));
    }
    const double g = log_cover_G(in);
    const double m = sample_complexity(in);
    const DofRow dof = dof_comparison_table(in);

    if (b.format == "csv") {
        out << "log_cover_core,log_cover_factor_sum,log_cover_G,sample_complexity,structured_dof,tucker_dof,"
               "vector_sparsity_dof\n";
        double fsum = 0.0;
        for (double f : factors) fsum += f;
        out << format_double(core) << ',' << format_double(fsum) << ',' << format_double(g) << ','
            << format_double(m) << ',' << format_double(dof.structured) << ',' << format_double(dof.tucker) << ','
            << format_double(dof.vector_sparsity) << '\n';
        return;
    }
    if (b.format != "json") throw UsageError("--format: expected json or csv");
    emit(out, {{"inputs",
                {{"dims", in.dims},
                 {"rank", in.rank},
                 {"sparsity", in.sparsity},
                 {"tau", in.tau},
                 {"eps_cover", in.epsilon_cover},
                 {"delta", in.delta},
                 {"eps", in.failure_prob},
                 {"K1", in.K1},
                 {"K2", in.K2}}},
               {"note", "K1 and K2 are unspecified theory constants"},
               {"log_cover_core", core},
               {"log_cover_factor", factors},
               {"log_cover_G", g},
               {"sample_complexity", m},
               {"dof", {{"structured", dof.structured}, {"tucker", dof.tucker}, {"vector_sparsity", dof.vector_sparsity}}}});
}

void run_rip(const RipArgs& r, std::ostream& out) {
    const LinearMapSpec map{r.m, parse_sizes(r.dims, "dims"), r.seed, parse_distribution(r.distribution)};
    const auto op = make_operator(map);
    const RipEstimate est =
        rip_probe(*op, parse_sizes(r.rank, "rank"), parse_sizes(r.sparsity, "sparsity"), r.tau, r.trials, r.probe_seed);
    const auto [lo, hi] = std::minmax_element(est.samples.begin(), est.samples.end());
    emit(out, {{"delta_hat", est.delta_hat},
               {"trials", est.samples.size()},
               {"min_ratio", est.samples.empty() ? 0.0 : *lo},
               {"max_ratio", est.samples.empty() ? 0.0 : *hi}});
}

std::string config_value(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ',';
            s += config_value(v[i]);
        }
        return s;
    }
    return v.dump();
}

}  // namespace

std::vector<std::string> expand_config_args(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a path");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            out.push_back(args[i]);
            continue;
        }
        std::ifstream in(path);
        if (!in) throw UsageError("cannot read config file " + path);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw UsageError("config " + path + ": " + e.what());
        }
        if (!j.is_object()) throw UsageError("config " + path + ": expected a JSON object");
        for (const auto& [key, value] : j.items()) {
            const std::string flag = "--" + key;
            if (value.is_boolean()) {
                if (value.get<bool>()) out.push_back(flag);
                continue;
            }
            if (value.is_null() || value.is_object()) throw UsageError("config " + path + ": bad value for '" + key + "'");
            out.push_back(flag);
            out.push_back(config_value(value));
        }
    }
    return out;
}

int cli_main(const std::vector<std::string>& raw, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sparse low-Tucker-rank tensor regression toolkit", "tuckreg"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);
    app.set_version_flag("--version", "tuckreg 0.1.0");
    app.add_flag("--config", "JSON file whose keys mirror the long flags (expanded before parsing)");

    auto* gen = app.add_subcommand("gen", "Generate models and datasets");
    gen->require_subcommand(1);

    GenModelArgs gm;
    auto* gen_model_cmd = gen->add_subcommand("model", "Sample a sparse Tucker model");
    gen_model_cmd->add_option("--dims", gm.dims, "Tensor dimensions, e.g. 50,50,30")->required();
    gen_model_cmd->add_option("--rank", gm.rank, "Tucker rank tuple")->required();
    gen_model_cmd->add_option("--sparsity", gm.sparsity, "Nonzeros per factor column")->required();
    gen_model_cmd->add_option("--a", gm.a, "Magnitude floor of factor entries")->capture_default_str();
    gen_model_cmd->add_option("--seed", gm.seed, "Random seed")->required();
    gen_model_cmd->add_option("--out", gm.out, "Output bundle directory")->required();

    GenDataArgs gd;
    auto* gen_data_cmd = gen->add_subcommand("data", "Draw a linear map and responses for a model");
    gen_data_cmd->add_option("--model", gd.model, "Model bundle directory")->required();
    gen_data_cmd->add_option("--m", gd.m, "Number of measurements")->required();
    gen_data_cmd->add_option("--sigma", gd.sigma, "Noise standard deviation")->capture_default_str();
    gen_data_cmd->add_option("--seed", gd.seed, "Seed of the linear map")->required();
    gen_data_cmd->add_option("--noise-seed", gd.noise_seed, "Seed of the noise")->capture_default_str();
    gen_data_cmd->add_option("--distribution", gd.distribution, "gaussian, rademacher or uniform")->capture_default_str();
    gen_data_cmd->add_option("--out", gd.out, "Output dataset directory")->required();

    FitArgs fa;
    auto* fit_cmd = app.add_subcommand("fit", "Fit a dataset");
    fit_cmd->add_option("--data", fa.data, "Dataset directory")->required();
    fit_cmd->add_option("--method", fa.method, "tpgd, pgd_tucker or lasso")->capture_default_str();
    fit_cmd->add_option("--rank", fa.rank, "Tucker rank tuple");
    fit_cmd->add_option("--sparsity", fa.sparsity, "Factor column sparsity tuple");
    fit_cmd->add_option("--mu", fa.mu, "Step size")->capture_default_str();
    fit_cmd->add_option("--max-iters", fa.max_iters, "Iteration cap")->capture_default_str();
    fit_cmd->add_option("--tol", fa.tol, "Relative loss change for stopping")->capture_default_str();
    fit_cmd->add_option("--lambda", fa.lambda, "l1 weight (lasso)")->capture_default_str();
    fit_cmd->add_option("--init", fa.init, "zero or spectral")->capture_default_str();
    fit_cmd->add_flag("--no-refine", fa.no_refine, "Use the deflated sparse components as factors");
    fit_cmd->add_option("--truth", fa.truth, "Model bundle or TNSR file to score against");
    fit_cmd->add_option("--out", fa.out, "Output directory")->required();

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a synthetic recovery sweep");
    sweep_cmd->add_option("--dims", sw.dims, "Tensor dimensions");
    sweep_cmd->add_option("--rank", sw.rank, "Tucker rank tuple");
    sweep_cmd->add_option("--sparsity", sw.sparsity, "Factor column sparsity tuple");
    sweep_cmd->add_option("--a", sw.a, "Magnitude floor of factor entries")->capture_default_str();
    sweep_cmd->add_option("--seed", sw.seed, "Base seed")->capture_default_str();
    sweep_cmd->add_option("--m-grid", sw.m_grid, "Measurement counts, comma separated");
    sweep_cmd->add_option("--sigma-grid", sw.sigma_grid, "Noise levels, comma separated");
    sweep_cmd->add_option("--methods", sw.methods, "Comma separated methods")->capture_default_str();
    sweep_cmd->add_option("--trials", sw.trials, "Trials per cell")->capture_default_str();
    sweep_cmd->add_option("--threads", sw.threads, "Worker threads")->capture_default_str();
    sweep_cmd->add_option("--mu", sw.mu, "Step size")->capture_default_str();
    sweep_cmd->add_option("--max-iters", sw.max_iters, "Iteration cap")->capture_default_str();
    sweep_cmd->add_option("--tol", sw.tol, "Relative loss change for stopping")->capture_default_str();
    sweep_cmd->add_option("--lambda", sw.lambda, "l1 weight (lasso)")->capture_default_str();
    sweep_cmd->add_option("--init", sw.init, "zero or spectral")->capture_default_str();
    sweep_cmd->add_option("--distribution", sw.distribution, "Sensing distribution")->capture_default_str();
    sweep_cmd->add_flag("--no-timing", sw.no_timing, "Write zeros in the timing columns");
    sweep_cmd->add_flag("--large-scale", sw.large_scale, "Fill unset flags with the large synthetic setup");
    sweep_cmd->add_option("--out", sw.out, "CSV output path");
    sweep_cmd->add_option("--summary", sw.summary, "Per-cell summary CSV path");

    auto* eval = app.add_subcommand("eval", "Evaluate estimates");
    eval->require_subcommand(1);
    EvalErrorArgs ee;
    auto* eval_error_cmd = eval->add_subcommand("error", "Normalized estimation error");
    eval_error_cmd->add_option("--truth", ee.truth, "Model bundle, fit directory or TNSR file")->required();
    eval_error_cmd->add_option("--estimate", ee.estimate, "Fit directory or TNSR file")->required();
    EvalClassifyArgs ec;
    auto* eval_classify_cmd = eval->add_subcommand("classify", "Specificity, sensitivity and their harmonic mean");
    eval_classify_cmd->add_option("--predictions", ec.predictions, "Text file of predicted responses")->required();
    eval_classify_cmd->add_option("--labels", ec.labels, "Text file of 0/1 labels")->required();
    eval_classify_cmd->add_option("--threshold", ec.threshold, "Positive when prediction exceeds this")
        ->capture_default_str();

    BoundArgs ba;
    auto* bound_cmd = app.add_subcommand("bound", "Covering-number and sample-size calculators");
    bound_cmd->add_option("--dims", ba.dims, "Tensor dimensions")->required();
    bound_cmd->add_option("--rank", ba.rank, "Tucker rank tuple")->required();
    bound_cmd->add_option("--sparsity", ba.sparsity, "Factor column sparsity tuple")->required();
    bound_cmd->add_option("--tau", ba.tau, "Core l1 radius")->capture_default_str();
    bound_cmd->add_option("--delta", ba.delta, "Isometry constant")->capture_default_str();
    bound_cmd->add_option("--eps", ba.eps, "Failure probability")->capture_default_str();
    bound_cmd->add_option("--eps-cover", ba.eps_cover, "Covering radius")->capture_default_str();
    bound_cmd->add_option("--K1", ba.K1, "Unspecified theory constant")->capture_default_str();
    bound_cmd->add_option("--K2", ba.K2, "Unspecified theory constant")->capture_default_str();
    bound_cmd->add_option("--format", ba.format, "json or csv")->capture_default_str();

    RipArgs ra;
    auto* rip_cmd = app.add_subcommand("rip-probe", "Monte-Carlo restricted isometry estimate");
    rip_cmd->add_option("--dims", ra.dims, "Tensor dimensions")->required();
    rip_cmd->add_option("--m", ra.m, "Number of measurements")->required();
    rip_cmd->add_option("--seed", ra.seed, "Seed of the linear map")->required();
    rip_cmd->add_option("--distribution", ra.distribution, "Sensing distribution")->capture_default_str();
    rip_cmd->add_option("--rank", ra.rank, "Tucker rank tuple")->required();
    rip_cmd->add_option("--sparsity", ra.sparsity, "Factor column sparsity tuple")->required();
    rip_cmd->add_option("--tau", ra.tau, "Core l1 radius")->capture_default_str();
    rip_cmd->add_option("--trials", ra.trials, "Number of sampled tensors")->capture_default_str();
    rip_cmd->add_option("--probe-seed", ra.probe_seed, "Seed of the sampled tensors")->capture_default_str();

    try {
        std::vector<std::string> args = expand_config_args(raw);
        std::reverse(args.begin(), args.end());
        try {
            app.parse(args);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e, out, err);
            return code == 0 ? 0 : 2;
        }

        if (gen_model_cmd->parsed()) run_gen_model(gm, out);
        else if (gen_data_cmd->parsed()) run_gen_data(gd, out);
        else if (fit_cmd->parsed()) run_fit(fa, out);
        else if (sweep_cmd->parsed()) run_sweep_cmd(sw, *sweep_cmd, out);
        else if (eval_error_cmd->parsed()) run_eval_error(ee, out);
        else if (eval_classify_cmd->parsed()) run_eval_classify(ec, out);
        else if (bound_cmd->parsed()) run_bound(ba, out);
        else if (rip_cmd->parsed()) run_rip(ra, out);
        return 0;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return cli_main(args, out, err);
}

}  // namespace tuckreg
