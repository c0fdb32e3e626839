#include "tuckreg/model.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "tuckreg/io.hpp"
#include "tuckreg/rng.hpp"

namespace tuckreg {

using nlohmann::json;

std::size_t column_nnz(const Matrix& m, std::size_t col) {
    std::size_t count = 0;
    for (std::size_t r = 0; r < m.rows(); ++r) count += m(r, col) != 0.0;
    return count;
}

void validate_tuples(const Dims& dims, const Dims& rank, const Dims& sparsity) {
    if (dims.empty()) throw std::invalid_argument("dims must be nonempty");
    if (rank.size() != dims.size() || sparsity.size() != dims.size()) {
        throw std::invalid_argument("rank, sparsity and dims must have the same length");
    }
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (dims[i] == 0) throw std::invalid_argument("dims entries must be positive");
        if (rank[i] == 0 || rank[i] > dims[i]) {
            throw std::invalid_argument("rank[" + std::to_string(i) + "] must lie in [1, dims[i]]");
        }
        if (sparsity[i] == 0 || sparsity[i] > dims[i]) {
            throw std::invalid_argument("sparsity[" + std::to_string(i) + "] must lie in [1, dims[i]]");
        }
    }
}

// ---------------------------------------------------------------------------

TuckerFactors::TuckerFactors(DenseTensor core, std::vector<Matrix> factors, Dims sparsity)
    : core_(std::move(core)), factors_(std::move(factors)), sparsity_(std::move(sparsity)) {
    const std::size_t d = core_.order();
    if (factors_.size() != d) throw std::invalid_argument("TuckerFactors: factor count must equal core order");
    if (sparsity_.size() != d) throw std::invalid_argument("TuckerFactors: sparsity arity mismatch");
    dims_.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        const Matrix& u = factors_[i];
        dims_[i] = u.rows();
        if (u.cols() != core_.dims()[i]) {
            throw std::invalid_argument("TuckerFactors: factor " + std::to_string(i) + " column count != core extent");
        }
        if (u.cols() > u.rows()) throw std::invalid_argument("TuckerFactors: rank exceeds dimension");
        if (sparsity_[i] == 0 || sparsity_[i] > u.rows()) {
            throw std::invalid_argument("TuckerFactors: sparsity must lie in [1, n_i]");
        }
        for (std::size_t c = 0; c < u.cols(); ++c) {
            if (column_nnz(u, c) > sparsity_[i]) {
                throw std::invalid_argument("TuckerFactors: factor " + std::to_string(i) + " column " +
                                            std::to_string(c) + " exceeds sparsity");
            }
        }
    }
}

DenseTensor TuckerFactors::compose() const { return tucker_compose(core_, factors_); }

NormalizedTuckerFactors NormalizedTuckerFactors::normalize(const TuckerFactors& f) {
    std::vector<Matrix> factors = f.factors();
    DenseTensor core = f.core();
    for (std::size_t i = 0; i < factors.size(); ++i) {
        Matrix scale = Matrix::identity(factors[i].cols());
        for (std::size_t c = 0; c < factors[i].cols(); ++c) {
            auto col = factors[i].column(c);
            const double norm = std::sqrt(std::inner_product(col.begin(), col.end(), col.begin(), 0.0));
            if (norm == 0.0) continue;
            for (double& v : col) v /= norm;
            factors[i].set_column(c, col);
            scale(c, c) = norm;
        }
        core = mode_product(core, scale, i);
    }
    const double tau = l1_norm(core);
    return NormalizedTuckerFactors(TuckerFactors(std::move(core), std::move(factors), f.sparsity()), tau);
}

// ---------------------------------------------------------------------------

TuckerFactors gen_model(const Dims& dims, const Dims& rank, const Dims& sparsity, double a, std::uint64_t seed) {
    validate_tuples(dims, rank, sparsity);
    if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("gen_model: a must be a finite nonnegative value");

    const std::size_t d = dims.size();
    std::vector<Matrix> factors;
    factors.reserve(d);
    for (std::size_t mode = 0; mode < d; ++mode) {
        const std::size_t n = dims[mode];
        Matrix u(n, rank[mode]);
        std::vector<std::size_t> rows(n);
        for (std::size_t c = 0; c < rank[mode]; ++c) {
            Engine eng = make_engine(derive_seed(seed, {mode, c}));
            // Partial Fisher-Yates: the first s entries become the support.
            std::iota(rows.begin(), rows.end(), std::size_t{0});
            for (std::size_t k = 0; k < sparsity[mode]; ++k) {
                std::uniform_int_distribution<std::size_t> pick(k, n - 1);
                std::swap(rows[k], rows[pick(eng)]);
            }
            std::bernoulli_distribution coin(0.5);
            std::normal_distribution<double> gauss(0.0, 1.0);
            for (std::size_t k = 0; k < sparsity[mode]; ++k) {
                const double sign = coin(eng) ? -1.0 : 1.0;
                u(rows[k], c) = sign * (a + std::abs(gauss(eng)));
            }
        }
        factors.push_back(std::move(u));
    }

    Engine eng = make_engine(derive_seed(seed, {d}));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> core(dims_product(rank));
    for (double& v : core) v = unif(eng);
    return TuckerFactors(DenseTensor(rank, std::move(core)), std::move(factors), sparsity);
}

double degrees_of_freedom(const Dims& rank, const Dims& sparsity, const Dims& dims) {
    if (rank.size() != sparsity.size() || rank.size() != dims.size()) {
        throw std::invalid_argument("degrees_of_freedom: tuple lengths differ");
    }
    double prod = 1.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < rank.size(); ++i) {
        prod *= static_cast<double>(rank[i]);
        sum += static_cast<double>(rank[i]) * static_cast<double>(sparsity[i]) * std::log(static_cast<double>(dims[i]));
    }
    return prod + sum;
}

TuckerFactors direct_sum(const TuckerFactors& za, const TuckerFactors& zb, double gamma_a, double gamma_b) {
    if (za.dims() != zb.dims() || za.rank() != zb.rank() || za.sparsity() != zb.sparsity()) {
        throw std::invalid_argument("direct_sum: dims, rank and sparsity tuples must agree");
    }
    const Dims& r = za.rank();
    const std::size_t d = r.size();
    Dims r2(d);
    for (std::size_t i = 0; i < d; ++i) r2[i] = 2 * r[i];

    // Block-diagonal core: S_a in the leading block, S_b in the trailing one.
    std::vector<double> core(dims_product(r2), 0.0);
    const auto sa = za.core().data();
    const auto sb = zb.core().data();
    std::vector<std::size_t> idx(d, 0);
    for (std::size_t flat = 0; flat < sa.size(); ++flat) {
        std::size_t off_a = 0;
        std::size_t off_b = 0;
        for (std::size_t k = 0; k < d; ++k) {
            off_a = off_a * r2[k] + idx[k];
            off_b = off_b * r2[k] + idx[k] + r[k];
        }
        core[off_a] = gamma_a * sa[flat];
        core[off_b] = gamma_b * sb[flat];
        for (std::size_t k = d; k-- > 0;) {
            if (++idx[k] < r[k]) break;
            idx[k] = 0;
        }
    }

    std::vector<Matrix> factors;
    factors.reserve(d);
    for (std::size_t i = 0; i < d; ++i) {
        const Matrix& ua = za.factors()[i];
        const Matrix& ub = zb.factors()[i];
        Matrix uc(ua.rows(), 2 * r[i]);
        for (std::size_t row = 0; row < ua.rows(); ++row) {
            for (std::size_t c = 0; c < r[i]; ++c) {
                uc(row, c) = ua(row, c);
                uc(row, c + r[i]) = ub(row, c);
            }
        }
        factors.push_back(std::move(uc));
    }
    return TuckerFactors(DenseTensor(std::move(r2), std::move(core)), std::move(factors), za.sparsity());
}

// ---------------------------------------------------------------------------

void write_model_bundle(const std::filesystem::path& dir, const ModelBundle& bundle) {
    std::filesystem::create_directories(dir);
    const TuckerFactors& m = bundle.model;
    write_tnsr(dir / "core.tnsr", m.core());
    for (std::size_t i = 0; i < m.order(); ++i) {
        write_tnsr(dir / ("factor_" + std::to_string(i + 1) + ".tnsr"), as_tensor(m.factors()[i]));
    }
    json manifest = {
        {"dims", m.dims()}, {"rank", m.rank()}, {"sparsity", m.sparsity()}, {"a", bundle.a}, {"seed", bundle.seed},
    };
    std::ofstream out(dir / "manifest.json");
    if (!out) throw FormatError("cannot write " + (dir / "manifest.json").string());
    out << manifest.dump(2) << '\n';
}

ModelBundle read_model_bundle(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw FormatError("cannot open " + (dir / "manifest.json").string());
    json manifest;
    try {
        manifest = json::parse(in);
        const auto dims = manifest.at("dims").get<Dims>();
        const auto sparsity = manifest.at("sparsity").get<Dims>();
        DenseTensor core = read_tnsr(dir / "core.tnsr");
        std::vector<Matrix> factors;
        for (std::size_t i = 0; i < dims.size(); ++i) {
            factors.push_back(as_matrix(read_tnsr(dir / ("factor_" + std::to_string(i + 1) + ".tnsr"))));
        }
        TuckerFactors model(std::move(core), std::move(factors), sparsity);
        if (model.dims() != dims || model.rank() != manifest.at("rank").get<Dims>()) {
            throw FormatError("model bundle: manifest disagrees with stored tensors");
        }
        return ModelBundle{std::move(model), manifest.value("a", 0.0), manifest.value("seed", std::uint64_t{0})};
    } catch (const json::exception& e) {
        throw FormatError(std::string("model bundle manifest: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("model bundle: ") + e.what());
    }
}

}  // namespace tuckreg
