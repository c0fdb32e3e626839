#include "tuckreg/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>
#include <json.hpp>

#include "tuckreg/io.hpp"
#include "tuckreg/rng.hpp"

namespace tuckreg {

using nlohmann::json;

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void fill_row(const LinearMapSpec& map, std::size_t i, std::span<double> out) {
    Engine eng = make_engine(derive_seed(map.seed, {i}));
    const double scale = 1.0 / std::sqrt(static_cast<double>(map.m));
    switch (map.distribution) {
        case Distribution::gaussian: {
            std::normal_distribution<double> g(0.0, 1.0);
            for (double& v : out) v = scale * g(eng);
            break;
        }
        case Distribution::rademacher: {
            std::bernoulli_distribution coin(0.5);
            for (double& v : out) v = coin(eng) ? scale : -scale;
            break;
        }
        case Distribution::uniform: {
            // U(-sqrt(3), sqrt(3)) has unit variance.
            const double half = std::sqrt(3.0);
            std::uniform_real_distribution<double> u(-half, half);
            for (double& v : out) v = scale * u(eng);
            break;
        }
    }
}

void require_dims(const MeasurementOperator& op, const DenseTensor& z) {
    if (z.dims() != op.dims()) throw std::invalid_argument("measurement: tensor dims do not match the map");
}

void require_length(const MeasurementOperator& op, std::span<const double> v) {
    if (v.size() != op.m()) throw std::invalid_argument("measurement: vector length must equal m");
}

}  // namespace

std::string_view to_string(Distribution d) {
    switch (d) {
        case Distribution::gaussian: return "gaussian";
        case Distribution::rademacher: return "rademacher";
        case Distribution::uniform: return "uniform";
    }
    return "gaussian";
}

Distribution parse_distribution(std::string_view name) {
    if (name == "gaussian") return Distribution::gaussian;
    if (name == "rademacher") return Distribution::rademacher;
    if (name == "uniform") return Distribution::uniform;
    throw std::invalid_argument("unknown distribution '" + std::string(name) + "'");
}

void LinearMapSpec::validate() const {
    if (m == 0) throw std::invalid_argument("LinearMapSpec: m must be at least 1");
    if (dims.empty() || std::ranges::any_of(dims, [](std::size_t n) { return n == 0; })) {
        throw std::invalid_argument("LinearMapSpec: dims must be nonempty and positive");
    }
}

DenseTensor sensing_tensor(const LinearMapSpec& map, std::size_t i) {
    map.validate();
    if (i >= map.m) throw std::out_of_range("sensing_tensor: sample index out of range");
    std::vector<double> data(dims_product(map.dims));
    fill_row(map, i, data);
    return DenseTensor(map.dims, std::move(data));
}

// ---------------------------------------------------------------------------

ImplicitOperator::ImplicitOperator(LinearMapSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

std::vector<double> ImplicitOperator::apply(const DenseTensor& z) const {
    require_dims(*this, z);
    const auto zd = z.data();
    std::vector<double> row(zd.size());
    std::vector<double> out(spec_.m);
    for (std::size_t i = 0; i < spec_.m; ++i) {
        fill_row(spec_, i, row);
        out[i] = std::inner_product(row.begin(), row.end(), zd.begin(), 0.0);
    }
    return out;
}

DenseTensor ImplicitOperator::adjoint(std::span<const double> v) const {
    require_length(*this, v);
    std::vector<double> row(dims_product(spec_.dims));
    std::vector<double> acc(row.size(), 0.0);
    for (std::size_t i = 0; i < spec_.m; ++i) {
        if (v[i] == 0.0) continue;
        fill_row(spec_, i, row);
        for (std::size_t k = 0; k < row.size(); ++k) acc[k] += v[i] * row[k];
    }
    return DenseTensor(spec_.dims, std::move(acc));
}

DenseOperator::DenseOperator(Dims dims, Matrix rows) : dims_(std::move(dims)), rows_(std::move(rows)) {
    if (dims_.empty() || rows_.cols() != dims_product(dims_)) {
        throw std::invalid_argument("DenseOperator: row length must equal prod(dims)");
    }
}

DenseOperator DenseOperator::materialize(const LinearMapSpec& spec) {
    spec.validate();
    const std::size_t n = dims_product(spec.dims);
    std::vector<double> data(spec.m * n);
    for (std::size_t i = 0; i < spec.m; ++i) fill_row(spec, i, std::span<double>(data).subspan(i * n, n));
    return DenseOperator(spec.dims, Matrix(spec.m, n, std::move(data)));
}

std::vector<double> DenseOperator::apply(const DenseTensor& z) const {
    require_dims(*this, z);
    Eigen::Map<const RowMajor> a(rows_.data().data(), rows_.rows(), rows_.cols());
    Eigen::Map<const Eigen::VectorXd> x(z.data().data(), z.size());
    std::vector<double> out(rows_.rows());
    Eigen::Map<Eigen::VectorXd>(out.data(), out.size()).noalias() = a * x;
    return out;
}

DenseTensor DenseOperator::adjoint(std::span<const double> v) const {
    require_length(*this, v);
    Eigen::Map<const RowMajor> a(rows_.data().data(), rows_.rows(), rows_.cols());
    Eigen::Map<const Eigen::VectorXd> x(v.data(), v.size());
    std::vector<double> out(rows_.cols());
    Eigen::Map<Eigen::VectorXd>(out.data(), out.size()).noalias() = a.transpose() * x;
    return DenseTensor(dims_, std::move(out));
}

std::unique_ptr<MeasurementOperator> make_operator(const LinearMapSpec& spec, std::size_t max_bytes) {
    spec.validate();
    const std::size_t n = dims_product(spec.dims);
    if (n <= max_bytes / sizeof(double) / spec.m) {
        return std::make_unique<DenseOperator>(DenseOperator::materialize(spec));
    }
    return std::make_unique<ImplicitOperator>(spec);
}

std::vector<double> apply(const LinearMapSpec& map, const DenseTensor& z) { return ImplicitOperator(map).apply(z); }

DenseTensor adjoint(const LinearMapSpec& map, std::span<const double> v) { return ImplicitOperator(map).adjoint(v); }

// ---------------------------------------------------------------------------

RegressionDataset synthesize(const DenseTensor& truth, const LinearMapSpec& map, double sigma,
                             std::uint64_t noise_seed) {
    map.validate();
    if (truth.dims() != map.dims) throw std::invalid_argument("synthesize: model dims do not match the map");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("synthesize: sigma must be >= 0");
    RegressionDataset data;
    data.y = apply(map, truth);
    data.map = map;
    data.sigma = sigma;
    data.noise_seed = noise_seed;
    if (sigma > 0.0) {
        Engine eng = make_engine(derive_seed(noise_seed, {0}));
        std::normal_distribution<double> g(0.0, sigma);
        for (double& v : data.y) v += g(eng);
    }
    return data;
}

RegressionDataset synthesize(const TuckerFactors& model, const LinearMapSpec& map, double sigma,
                             std::uint64_t noise_seed) {
    return synthesize(model.compose(), map, sigma, noise_seed);
}

void write_dataset(const std::filesystem::path& dir, const RegressionDataset& data) {
    std::filesystem::create_directories(dir);
    json manifest = {
        {"m", data.map.m},
        {"dims", data.map.dims},
        {"seed", data.map.seed},
        {"distribution", std::string(to_string(data.map.distribution))},
        {"sigma", data.sigma},
        {"noise_seed", data.noise_seed},
        {"model_ref", data.model_ref},
    };
    std::ofstream out(dir / "manifest.json");
    if (!out) throw FormatError("cannot write " + (dir / "manifest.json").string());
    out << manifest.dump(2) << '\n';
    write_f64(dir / "y.f64", data.y);
}

RegressionDataset read_dataset(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw FormatError("cannot open " + (dir / "manifest.json").string());
    RegressionDataset data;
    try {
        const json manifest = json::parse(in);
        data.map.m = manifest.at("m").get<std::size_t>();
        data.map.dims = manifest.at("dims").get<Dims>();
        data.map.seed = manifest.at("seed").get<std::uint64_t>();
        data.map.distribution = parse_distribution(manifest.value("distribution", std::string("gaussian")));
        data.sigma = manifest.value("sigma", 0.0);
        data.noise_seed = manifest.value("noise_seed", std::uint64_t{0});
        data.model_ref = manifest.value("model_ref", std::string());
        data.map.validate();
    } catch (const json::exception& e) {
        throw FormatError(std::string("dataset manifest: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("dataset manifest: ") + e.what());
    }
    data.y = read_f64(dir / "y.f64");
    if (data.y.size() != data.map.m) throw FormatError("dataset: y length does not match m");
    for (double v : data.y) {
        if (!std::isfinite(v)) throw FormatError("dataset: non-finite response");
    }
    return data;
}

// ---------------------------------------------------------------------------

RipEstimate rip_probe(const MeasurementOperator& op, const Dims& rank, const Dims& sparsity, double tau,
                      std::size_t trials, std::uint64_t seed) {
    const Dims& dims = op.dims();
    validate_tuples(dims, rank, sparsity);
    if (trials == 0) throw std::invalid_argument("rip_probe: trials must be at least 1");
    if (!(tau > 0.0)) throw std::invalid_argument("rip_probe: tau must be positive");

    RipEstimate est;
    est.samples.reserve(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        Engine eng = make_engine(derive_seed(seed, {t}));
        std::normal_distribution<double> g(0.0, 1.0);
        std::vector<Matrix> factors;
        for (std::size_t mode = 0; mode < dims.size(); ++mode) {
            const std::size_t n = dims[mode];
            Matrix u(n, rank[mode]);
            std::vector<std::size_t> rows(n);
            for (std::size_t c = 0; c < rank[mode]; ++c) {
                std::iota(rows.begin(), rows.end(), std::size_t{0});
                double norm2 = 0.0;
                for (std::size_t k = 0; k < sparsity[mode]; ++k) {
                    std::uniform_int_distribution<std::size_t> pick(k, n - 1);
                    std::swap(rows[k], rows[pick(eng)]);
                    const double v = g(eng);
                    u(rows[k], c) = v;
                    norm2 += v * v;
                }
                const double norm = std::sqrt(norm2);
                if (norm > 0.0) {
                    for (std::size_t k = 0; k < sparsity[mode]; ++k) u(rows[k], c) /= norm;
                }
            }
            factors.push_back(std::move(u));
        }
        std::vector<double> core(dims_product(rank));
        for (double& v : core) v = g(eng);
        DenseTensor s(rank, std::move(core));
        const double l1 = l1_norm(s);
        if (l1 > 0.0) s *= tau / l1;

        const DenseTensor z = tucker_compose(s, factors);
        const double zz = inner(z, z);
        if (zz == 0.0) {
            est.samples.push_back(1.0);
            continue;
        }
        const auto y = op.apply(z);
        const double yy = std::inner_product(y.begin(), y.end(), y.begin(), 0.0);
        const double ratio = yy / zz;
        est.samples.push_back(ratio);
        est.delta_hat = std::max(est.delta_hat, std::abs(ratio - 1.0));
    }
    return est;
}

}  // namespace tuckreg
