// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spoofdet/matrix.hpp"

namespace spoofdet {

// Scores are the common currency: larger means more Fake, decision at 0.
struct ScoreSet {
    std::vector<double> scores;
    double threshold = 0.0;

    std::vector<ClipLabel> predictions() const;
};

enum class ModelVariant { LogReg, Lda, Qda, Gnb, LinearSvm, RbfSvm, Gmm };

const char* model_variant_name(ModelVariant variant);
ModelVariant parse_model_variant(const std::string& name);

struct LogRegParams {
    std::vector<double> weights;
    double bias = 0.0;
    double l2 = 1.0;
    bool class_weighted = true;
    int iterations = 0;
    double final_grad_norm = 0.0;
};

// LDA and QDA share the representation; LDA stores the pooled covariance
// in both slots.
struct DiscriminantParams {
    std::vector<double> mean_real, mean_fake;
    std::vector<double> cov_real, cov_fake;  // d x d row-major, regularized
    double log_prior_real = 0.0, log_prior_fake = 0.0;
    bool shared_covariance = false;
};

struct GnbParams {
    std::vector<double> mean_real, mean_fake;
    std::vector<double> var_real, var_fake;
    double log_prior_real = 0.0, log_prior_fake = 0.0;
};

struct SvmParams {
    bool rbf = false;
    double gamma = 0.0;  // resolved numeric value
    double c = 1.0;
    std::vector<double> support;  // n_sv x d row-major
    std::vector<double> coeff;    // alpha_i * y_i per support vector
    double bias = 0.0;
    double final_kkt_violation = 0.0;
    std::uint64_t pair_updates = 0;

    std::size_t n_support(std::size_t d) const {
        return d == 0 ? 0 : support.size() / d;
    }
};

struct GmmClassParams {
    std::vector<double> log_weights;  // k
    std::vector<double> means;        // k x d
    std::vector<double> vars;         // k x d (diagonal mode)
    bool full_cov = false;
    std::vector<double> cov;  // d x d when full_cov (k must be 1)
    double final_log_likelihood = 0.0;
};

struct GmmParams {
    GmmClassParams real, fake;
    double log_prior_real = 0.0, log_prior_fake = 0.0;
    std::size_t k = 8;
    int restarts = 3;
};

struct TrainedModel {
    ModelVariant variant;
    std::uint64_t schema_fingerprint = 0;
    std::vector<std::string> feature_names;
    std::uint64_t seed = 0;
    bool converged = true;
    std::variant<LogRegParams, DiscriminantParams, GnbParams, SvmParams,
                 GmmParams>
        params;

    std::string name() const { return model_variant_name(variant); }
};

// Full-batch gradient descent with backtracking line search on the
// class-weighted logistic loss plus (l2/2)*||w||^2 (bias unpenalized),
// run until the gradient infinity norm drops below 1e-6 or 5000
// iterations. Non-convergence flags the model instead of failing it.
TrainedModel train_logreg(const LabeledMatrix& data, double l2 = 1.0,
                          bool class_weighted = true);

// Objective and gradient of the logistic loss at [w, b]; exposed for
// finite-difference verification.
double logreg_objective(const LabeledMatrix& data, double l2,
                        bool class_weighted, const std::vector<double>& wb,
                        std::vector<double>* grad_out = nullptr);

TrainedModel train_lda(const LabeledMatrix& data);
TrainedModel train_qda(const LabeledMatrix& data);
TrainedModel train_gnb(const LabeledMatrix& data);

struct GammaSpec {
    bool scale = true;
    double value = 0.0;

    static GammaSpec from_string(const std::string& text);
    std::string to_string() const;
};

// 1 / (n_cols * mean per-feature variance) of the given matrix.
double resolve_gamma_scale(const LabeledMatrix& data);

struct SvmConfig {
    bool rbf = true;
    GammaSpec gamma;
    double c = 1.0;
    double tolerance = 1e-3;          // maximum KKT violation at exit
    std::uint64_t max_pair_updates = 1000000;
    std::size_t cache_mb = 512;
};

TrainedModel train_svm(const LabeledMatrix& data, const SvmConfig& config);

struct GmmConfig {
    std::size_t components = 8;
    int restarts = 3;
    bool full_covariance = false;  // valid only with components == 1
    int max_iterations = 300;
    double tolerance = 1e-6;  // mean log-likelihood improvement
};

// Per-class diagonal-covariance EM, k-means++ seeded, best of `restarts`.
// Log-likelihood histories are retained on demand for monotonicity checks.
TrainedModel train_gmm_classifier(const LabeledMatrix& data,
                                  const GmmConfig& config, std::uint64_t seed,
                                  std::vector<std::vector<double>>*
                                      loglik_histories = nullptr);

// Variant-appropriate continuous score per row, larger => Fake.
// Throws SchemaMismatch when the fingerprint or width differs.
ScoreSet predict_scores(const TrainedModel& model, const LabeledMatrix& x);

std::string model_to_json(const TrainedModel& model,
                          const std::string& config_hash = "");
TrainedModel model_from_json(const std::string& text,
                             std::string* config_hash_out = nullptr);
void save_model(const TrainedModel& model, const std::string& path,
                const std::string& config_hash = "");
TrainedModel load_model(const std::string& path,
                        std::string* config_hash_out = nullptr);

}  // namespace spoofdet
