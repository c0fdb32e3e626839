#pragma once

#include <cstddef>

#include "tuckreg/tensor.hpp"

namespace tuckreg {

// Closed-form covering-number and sample-size expressions. Natural logs.

struct BoundInputs {
    Dims dims;
    Dims rank;
    Dims sparsity;
    double tau = 1.0;
    double epsilon_cover = 0.5;
    double delta = 0.5;
    double failure_prob = 0.1;
    double K1 = 1.0;  // unspecified theory constant
    double K2 = 1.0;  // unspecified theory constant

    void validate() const;
    [[nodiscard]] std::size_t max_dim() const;
};

/// prod(r) * ln(3 tau / eps), eps in (0, 1].
double log_cover_core(const Dims& rank, double tau, double eps);

/// s * r * ln(3 n / eps), eps in (0, 1].
double log_cover_factor(std::size_t n, std::size_t r, std::size_t s, double eps);

/// prod(r) ln(3 tau (d+1) / eps) + sum_i s_i r_i ln(3 nbar tau (d+1) / eps).
double log_cover_G(const BoundInputs& in);

/// delta^-2 max{K1 tau^2 (prod r + sum s_i r_i) ln(3 nbar d)^2, K2 ln(1/failure_prob)}.
double sample_complexity(const BoundInputs& in);

struct DofRow {
    double structured = 0.0;        // rbar^d + sbar rbar d
    double tucker = 0.0;            // rbar^d + nbar rbar d
    double vector_sparsity = 0.0;   // d (sbar rbar)^d ln(nbar / (sbar rbar))
};

DofRow dof_comparison_table(const BoundInputs& in);

}  // namespace tuckreg
