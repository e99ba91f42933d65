// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spoofdet/features.hpp"
#include "spoofdet/models.hpp"

namespace spoofdet {

// Every field has a default; a config file and CLI overrides only replace
// what they name. The per-stage hashes let later stages reuse earlier
// artifacts when only downstream parameters changed, while refusing
// artifacts produced under different upstream settings.
struct ExperimentConfig {
    std::string dataset;  // root directory or manifest CSV
    std::string condition = "default";
    std::string out_dir = "runs/default";
    std::uint64_t seed = 42;

    double trim_db = -40.0;
    FramingParams framing;  // 25 ms / 10 ms
    YinParams yin;
    double rolloff_pct = 0.85;
    std::size_t contrast_bands = 6;
    double min_seg_ms = 30.0;

    double alpha = 0.05;

    std::vector<std::string> models = {"logreg",     "lda",     "qda", "gnb",
                                       "linear_svm", "rbf_svm", "gmm"};
    double logreg_l2 = 1.0;
    bool logreg_class_weighted = true;
    double linear_svm_c = 1.0;
    std::vector<double> grid_c = {0.1, 1.0, 10.0, 100.0};
    std::vector<std::string> grid_gamma = {"scale", "0.01", "0.1"};
    int cv_folds = 3;
    std::size_t gmm_components = 8;
    int gmm_restarts = 3;
    double svm_tolerance = 1e-3;
    std::uint64_t svm_max_pair_updates = 1000000;
    std::size_t kernel_cache_mb = 512;

    unsigned threads = 0;  // 0 = hardware concurrency
    double max_skip_fraction = 0.10;

    ExtractParams extract_params() const;

    // canonical JSON of the full effective config
    std::string effective_json() const;

    std::string extract_hash() const;
    std::string analyze_hash() const;
    std::string train_hash() const;
    std::string eval_hash() const;
};

ExperimentConfig load_config_file(const std::string& path);

struct ConfigOverrides {
    std::string dataset;
    std::string out_dir;
    std::string condition;
    std::string models;     // comma-separated
    bool seed_set = false;
    std::uint64_t seed = 0;
    bool threads_set = false;
    unsigned threads = 0;
};

void apply_overrides(ExperimentConfig& config, const ConfigOverrides& ovr);

}  // namespace spoofdet
