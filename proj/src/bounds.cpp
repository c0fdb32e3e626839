#include "tuckreg/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tuckreg/model.hpp"

namespace tuckreg {

namespace {

void check_eps(double eps, const char* who) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::out_of_range(std::string(who) + ": eps must lie in (0, 1]");
}

void check_open_unit(double v, const char* name) {
    if (!(v > 0.0 && v < 1.0)) throw std::out_of_range(std::string("BoundInputs: ") + name + " must lie in (0, 1)");
}

double rank_product(const Dims& rank) {
    double p = 1.0;
    for (std::size_t r : rank) p *= static_cast<double>(r);
    return p;
}

double sparse_rank_sum(const Dims& rank, const Dims& sparsity) {
    double s = 0.0;
    for (std::size_t i = 0; i < rank.size(); ++i) s += static_cast<double>(sparsity[i]) * static_cast<double>(rank[i]);
    return s;
}

}  // namespace

void BoundInputs::validate() const {
    validate_tuples(dims, rank, sparsity);
    if (!(tau > 0.0) || !std::isfinite(tau)) throw std::out_of_range("BoundInputs: tau must be positive");
    check_open_unit(epsilon_cover, "epsilon_cover");
    check_open_unit(delta, "delta");
    check_open_unit(failure_prob, "failure_prob");
    if (!(K1 > 0.0) || !std::isfinite(K1)) throw std::out_of_range("BoundInputs: K1 must be positive");
    if (!(K2 > 0.0) || !std::isfinite(K2)) throw std::out_of_range("BoundInputs: K2 must be positive");
}

std::size_t BoundInputs::max_dim() const { return dims.empty() ? 0 : *std::max_element(dims.begin(), dims.end()); }

double log_cover_core(const Dims& rank, double tau, double eps) {
    check_eps(eps, "log_cover_core");
    if (rank.empty()) throw std::invalid_argument("log_cover_core: empty rank tuple");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw std::out_of_range("log_cover_core: tau must be positive");
    return rank_product(rank) * std::log(3.0 * tau / eps);
}

double log_cover_factor(std::size_t n, std::size_t r, std::size_t s, double eps) {
    check_eps(eps, "log_cover_factor");
    if (n == 0) throw std::out_of_range("log_cover_factor: n must be positive");
    if (s > n) throw std::out_of_range("log_cover_factor: s exceeds n");
    return static_cast<double>(s) * static_cast<double>(r) * std::log(3.0 * static_cast<double>(n) / eps);
}

double log_cover_G(const BoundInputs& in) {
    in.validate();
    const double lip = in.tau * static_cast<double>(in.dims.size() + 1);
    const double nbar = static_cast<double>(in.max_dim());
    return rank_product(in.rank) * std::log(3.0 * lip / in.epsilon_cover) +
           sparse_rank_sum(in.rank, in.sparsity) * std::log(3.0 * nbar * lip / in.epsilon_cover);
}

double sample_complexity(const BoundInputs& in) {
    in.validate();
    const double l = std::log(3.0 * static_cast<double>(in.max_dim()) * static_cast<double>(in.dims.size()));
    const double first =
        in.K1 * in.tau * in.tau * (rank_product(in.rank) + sparse_rank_sum(in.rank, in.sparsity)) * l * l;
    const double second = in.K2 * std::log(1.0 / in.failure_prob);
    return std::max(first, second) / (in.delta * in.delta);
}

DofRow dof_comparison_table(const BoundInputs& in) {
    validate_tuples(in.dims, in.rank, in.sparsity);
    const double d = static_cast<double>(in.dims.size());
    const double rbar = static_cast<double>(*std::max_element(in.rank.begin(), in.rank.end()));
    const double sbar = static_cast<double>(*std::max_element(in.sparsity.begin(), in.sparsity.end()));
    const double nbar = static_cast<double>(in.max_dim());
    const double core = std::pow(rbar, d);
    DofRow row;
    row.structured = core + sbar * rbar * d;
    row.tucker = core + nbar * rbar * d;
    row.vector_sparsity = d * std::pow(sbar * rbar, d) * std::log(nbar / (sbar * rbar));
    return row;
}

}  // namespace tuckreg
