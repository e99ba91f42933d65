// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#include "spoofdet/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spoofdet/error.hpp"
#include "spoofdet/linalg.hpp"
#include "spoofdet/rng.hpp"

namespace spoofdet {

namespace {

constexpr double kVarFloor = 1e-6;
constexpr double kLog2Pi = 1.8378770664093453;

double logsumexp(const std::vector<double>& v) {
    double hi = -std::numeric_limits<double>::infinity();
    for (double x : v) hi = std::max(hi, x);
    if (!std::isfinite(hi)) return hi;
    double acc = 0.0;
    for (double x : v) acc += std::exp(x - hi);
    return hi + std::log(acc);
}

// log N(x; mu, diag(var)) for one component
double diag_log_density(const double* x, const double* mu, const double* var,
                        std::size_t d) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double diff = x[j] - mu[j];
        acc += std::log(var[j]) + diff * diff / var[j];
    }
    return -0.5 * (static_cast<double>(d) * kLog2Pi + acc);
}

std::vector<std::size_t> kmeanspp_centers(const std::vector<double>& data,
                                          std::size_t n_rows,
                                          std::size_t n_cols, std::size_t k,
                                          Rng& rng) {
    std::vector<std::size_t> centers;
    centers.push_back(rng.index(n_rows));
    std::vector<double> dist2(n_rows, std::numeric_limits<double>::infinity());
    while (centers.size() < k) {
        const double* c = data.data() + centers.back() * n_cols;
        double total = 0.0;
        for (std::size_t r = 0; r < n_rows; ++r) {
            const double* x = data.data() + r * n_cols;
            double sq = 0.0;
            for (std::size_t j = 0; j < n_cols; ++j) {
                double diff = x[j] - c[j];
                sq += diff * diff;
            }
            dist2[r] = std::min(dist2[r], sq);
            total += dist2[r];
        }
        if (total <= 0.0) {
            centers.push_back(rng.index(n_rows));
            continue;
        }
        double u = rng.uniform() * total;
        std::size_t pick = n_rows - 1;
        double cum = 0.0;
        for (std::size_t r = 0; r < n_rows; ++r) {
            cum += dist2[r];
            if (cum >= u) {
                pick = r;
                break;
            }
        }
        centers.push_back(pick);
    }
    return centers;
}

struct EmRun {
    GmmClassParams params;
    std::vector<double> history;
    double final_loglik = -std::numeric_limits<double>::infinity();
};

EmRun run_em(const std::vector<double>& data, std::size_t n_rows,
             std::size_t n_cols, const GmmConfig& config, std::uint64_t seed) {
    const std::size_t k = config.components;
    Rng rng(seed);

    // global per-feature variance for initial spreads and reseeds
    std::vector<double> global_mean(n_cols, 0.0), global_var(n_cols, 0.0);
    for (std::size_t r = 0; r < n_rows; ++r)
        for (std::size_t j = 0; j < n_cols; ++j)
            global_mean[j] += data[r * n_cols + j];
    for (std::size_t j = 0; j < n_cols; ++j)
        global_mean[j] /= static_cast<double>(n_rows);
    for (std::size_t r = 0; r < n_rows; ++r)
        for (std::size_t j = 0; j < n_cols; ++j) {
            double diff = data[r * n_cols + j] - global_mean[j];
            global_var[j] += diff * diff;
        }
    for (std::size_t j = 0; j < n_cols; ++j)
        global_var[j] =
            std::max(global_var[j] / static_cast<double>(n_rows), kVarFloor);

    EmRun run;
    run.params.log_weights.assign(k, std::log(1.0 / static_cast<double>(k)));
    run.params.means.resize(k * n_cols);
    run.params.vars.resize(k * n_cols);
    const auto centers = kmeanspp_centers(data, n_rows, n_cols, k, rng);
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t j = 0; j < n_cols; ++j) {
            run.params.means[c * n_cols + j] = data[centers[c] * n_cols + j];
            run.params.vars[c * n_cols + j] = global_var[j];
        }

    std::vector<double> resp(n_rows * k);
    std::vector<double> comp_ll(k);
    std::vector<bool> reseeded(k, false);
    double prev = -std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < config.max_iterations; ++iter) {
        // E step
        double total_ll = 0.0;
        for (std::size_t r = 0; r < n_rows; ++r) {
            const double* x = data.data() + r * n_cols;
            for (std::size_t c = 0; c < k; ++c)
                comp_ll[c] = run.params.log_weights[c] +
                             diag_log_density(x, &run.params.means[c * n_cols],
                                              &run.params.vars[c * n_cols],
                                              n_cols);
            const double lse = logsumexp(comp_ll);
            total_ll += lse;
            for (std::size_t c = 0; c < k; ++c)
                resp[r * k + c] = std::exp(comp_ll[c] - lse);
        }
        const double mean_ll = total_ll / static_cast<double>(n_rows);
        run.history.push_back(mean_ll);
        run.final_loglik = mean_ll;
        if (iter > 0 && mean_ll - prev < config.tolerance) break;
        prev = mean_ll;

        // M step
        for (std::size_t c = 0; c < k; ++c) {
            double nk = 0.0;
            for (std::size_t r = 0; r < n_rows; ++r) nk += resp[r * k + c];
            if (nk < 1e-10) {
                if (reseeded[c])
                    throw Error(ErrorCode::EmptyComponent,
                                "mixture component collapsed twice");
                reseeded[c] = true;
                const std::size_t pick = rng.index(n_rows);
                for (std::size_t j = 0; j < n_cols; ++j) {
                    run.params.means[c * n_cols + j] = data[pick * n_cols + j];
                    run.params.vars[c * n_cols + j] = global_var[j];
                }
                run.params.log_weights[c] =
                    std::log(1.0 / static_cast<double>(n_rows));
                continue;
            }
            run.params.log_weights[c] =
                std::log(nk / static_cast<double>(n_rows));
            for (std::size_t j = 0; j < n_cols; ++j) {
                double m = 0.0;
                for (std::size_t r = 0; r < n_rows; ++r)
                    m += resp[r * k + c] * data[r * n_cols + j];
                m /= nk;
                double v = 0.0;
                for (std::size_t r = 0; r < n_rows; ++r) {
                    double diff = data[r * n_cols + j] - m;
                    v += resp[r * k + c] * diff * diff;
                }
                run.params.means[c * n_cols + j] = m;
                run.params.vars[c * n_cols + j] = std::max(v / nk, kVarFloor);
            }
        }
    }
    return run;
}

// single full-covariance Gaussian, the k = 1 mode shared with QDA-style
// scoring: MLE moments with ridge 1e-6 * trace / d
EmRun fit_full_gaussian(const std::vector<double>& data, std::size_t n_rows,
                        std::size_t n_cols) {
    EmRun run;
    run.params.full_cov = true;
    run.params.log_weights.assign(1, 0.0);
    run.params.means.assign(n_cols, 0.0);
    run.params.cov.assign(n_cols * n_cols, 0.0);

    for (std::size_t r = 0; r < n_rows; ++r)
        for (std::size_t j = 0; j < n_cols; ++j)
            run.params.means[j] += data[r * n_cols + j];
    for (std::size_t j = 0; j < n_cols; ++j)
        run.params.means[j] /= static_cast<double>(n_rows);

    for (std::size_t r = 0; r < n_rows; ++r)
        for (std::size_t a = 0; a < n_cols; ++a) {
            const double da = data[r * n_cols + a] - run.params.means[a];
            for (std::size_t b = a; b < n_cols; ++b) {
                const double db = data[r * n_cols + b] - run.params.means[b];
                run.params.cov[a * n_cols + b] += da * db;
            }
        }
    double trace = 0.0;
    for (std::size_t a = 0; a < n_cols; ++a)
        for (std::size_t b = a; b < n_cols; ++b) {
            double v = run.params.cov[a * n_cols + b] /
                       static_cast<double>(n_rows);
            run.params.cov[a * n_cols + b] = v;
            run.params.cov[b * n_cols + a] = v;
            if (a == b) trace += v;
        }
    const double ridge = 1e-6 * trace / static_cast<double>(n_cols);
    for (std::size_t a = 0; a < n_cols; ++a)
        run.params.cov[a * n_cols + a] += ridge;

    std::vector<double> chol = run.params.cov;
    if (!cholesky_lower(chol, n_cols))
        throw Error(ErrorCode::SingularCovariance,
                    "full-covariance fit not positive definite");

    run.final_loglik = gmm_mean_loglik(run.params, n_cols, data, n_rows);
    run.history.push_back(run.final_loglik);
    return run;
}

}  // namespace

double gmm_log_density(const GmmClassParams& params, std::size_t n_cols,
                       const double* x) {
    if (params.full_cov) {
        std::vector<double> chol = params.cov;
        if (!cholesky_lower(chol, n_cols))
            throw Error(ErrorCode::SingularCovariance,
                        "stored covariance not positive definite");
        std::vector<double> diff(n_cols), y(n_cols);
        for (std::size_t j = 0; j < n_cols; ++j)
            diff[j] = x[j] - params.means[j];
        forward_solve(chol, n_cols, diff.data(), y.data());
        double quad = 0.0;
        for (double v : y) quad += v * v;
        return -0.5 * (static_cast<double>(n_cols) * kLog2Pi +
                       cholesky_log_det(chol, n_cols) + quad);
    }
    const std::size_t k = params.log_weights.size();
    std::vector<double> comp_ll(k);
    for (std::size_t c = 0; c < k; ++c)
        comp_ll[c] = params.log_weights[c] +
                     diag_log_density(x, &params.means[c * n_cols],
                                      &params.vars[c * n_cols], n_cols);
    return logsumexp(comp_ll);
}

double gmm_mean_loglik(const GmmClassParams& params, std::size_t n_cols,
                       const std::vector<double>& data, std::size_t n_rows) {
    double acc = 0.0;
    for (std::size_t r = 0; r < n_rows; ++r)
        acc += gmm_log_density(params, n_cols, data.data() + r * n_cols);
    return acc / static_cast<double>(n_rows);
}

GmmFit fit_gmm(const std::vector<double>& data, std::size_t n_rows,
               std::size_t n_cols, const GmmConfig& config,
               std::uint64_t seed) {
    if (n_rows == 0 || n_cols == 0)
        throw Error(ErrorCode::ClassTooSmall, "empty class data");
    if (config.full_covariance && config.components != 1)
        throw Error(ErrorCode::BadConfig,
                    "full covariance is a k = 1 mode only");

    GmmFit fit;
    if (config.full_covariance) {
        EmRun run = fit_full_gaussian(data, n_rows, n_cols);
        fit.params = std::move(run.params);
        fit.loglik_history = std::move(run.history);
        fit.final_loglik = fit.params.final_log_likelihood = run.final_loglik;
        return fit;
    }

    bool have = false;
    for (int restart = 0; restart < std::max(1, config.restarts); ++restart) {
        const std::uint64_t run_seed =
            seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(restart);
        EmRun run = run_em(data, n_rows, n_cols, config, run_seed);
        if (!have || run.final_loglik > fit.final_loglik) {
            have = true;
            fit.params = std::move(run.params);
            fit.loglik_history = std::move(run.history);
            fit.final_loglik = run.final_loglik;
            fit.restart_used = restart;
        }
    }
    fit.params.final_log_likelihood = fit.final_loglik;
    return fit;
}

}  // namespace spoofdet
