// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "spoofdet/models.hpp"

namespace spoofdet {

struct GmmFit {
    GmmClassParams params;
    std::vector<double> loglik_history;  // mean log-likelihood per iteration
    double final_loglik = 0.0;
    int restart_used = 0;
};

// Diagonal-covariance EM over row-major data [n_rows x n_cols];
// k-means++ seeding, covariance floor 1e-6, best of `restarts` runs.
// full_covariance requires k == 1 and fits a single regularized Gaussian.
// Throws EmptyComponent when a component collapses twice.
GmmFit fit_gmm(const std::vector<double>& data, std::size_t n_rows,
               std::size_t n_cols, const GmmConfig& config,
               std::uint64_t seed);

// Mean log-likelihood of data under a fitted class model.
double gmm_mean_loglik(const GmmClassParams& params, std::size_t n_cols,
                       const std::vector<double>& data, std::size_t n_rows);

// Log-density of one point under the mixture.
double gmm_log_density(const GmmClassParams& params, std::size_t n_cols,
                       const double* x);

}  // namespace spoofdet
