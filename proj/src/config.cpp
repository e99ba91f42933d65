// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#include "spoofdet/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "spoofdet/error.hpp"
#include "spoofdet/special.hpp"

#include <json.hpp>

namespace spoofdet {

namespace {

using nlohmann::json;

std::string hash_hex(const std::string& text) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(text)));
    return buf;
}

json extract_subset(const ExperimentConfig& c) {
    return json{{"dataset", c.dataset},
                {"condition", c.condition},
                {"trim_db", c.trim_db},
                {"window_ms", c.framing.window_ms},
                {"hop_ms", c.framing.hop_ms},
                {"yin_fmin", c.yin.fmin_hz},
                {"yin_fmax", c.yin.fmax_hz},
                {"yin_threshold", c.yin.threshold},
                {"yin_window_ms", c.yin.window_ms},
                {"rolloff_pct", c.rolloff_pct},
                {"contrast_bands", c.contrast_bands},
                {"min_seg_ms", c.min_seg_ms}};
}

json analyze_subset(const ExperimentConfig& c) {
    json j = extract_subset(c);
    j["alpha"] = c.alpha;
    return j;
}

json train_subset(const ExperimentConfig& c) {
    json j = analyze_subset(c);
    j["models"] = c.models;
    j["seed"] = c.seed;
    j["logreg_l2"] = c.logreg_l2;
    j["logreg_class_weighted"] = c.logreg_class_weighted;
    j["linear_svm_c"] = c.linear_svm_c;
    j["grid_c"] = c.grid_c;
    j["grid_gamma"] = c.grid_gamma;
    j["cv_folds"] = c.cv_folds;
    j["gmm_components"] = c.gmm_components;
    j["gmm_restarts"] = c.gmm_restarts;
    j["svm_tolerance"] = c.svm_tolerance;
    j["svm_max_pair_updates"] = c.svm_max_pair_updates;
    return j;
}

}  // namespace

ExtractParams ExperimentConfig::extract_params() const {
    ExtractParams p;
    p.trim_db = trim_db;
    p.framing = framing;
    p.yin = yin;
    p.rolloff_pct = rolloff_pct;
    p.contrast_bands = contrast_bands;
    p.min_seg_ms = min_seg_ms;
    return p;
}

std::string ExperimentConfig::effective_json() const {
    json j = train_subset(*this);
    j["out"] = out_dir;
    j["threads"] = threads;
    j["kernel_cache_mb"] = kernel_cache_mb;
    j["max_skip_fraction"] = max_skip_fraction;
    return j.dump(2) + "\n";
}

std::string ExperimentConfig::extract_hash() const {
    return "extract:" + hash_hex(extract_subset(*this).dump());
}

std::string ExperimentConfig::analyze_hash() const {
    return "analyze:" + hash_hex(analyze_subset(*this).dump());
}

std::string ExperimentConfig::train_hash() const {
    return "train:" + hash_hex(train_subset(*this).dump());
}

std::string ExperimentConfig::eval_hash() const {
    return "eval:" + hash_hex(train_subset(*this).dump());
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path);
    json j;
    try {
        j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::BadConfig,
                    std::string("config parse error: ") + e.what());
    }

    ExperimentConfig c;
    try {
        c.dataset = j.value("dataset", c.dataset);
        c.condition = j.value("condition", c.condition);
        c.out_dir = j.value("out", c.out_dir);
        c.seed = j.value("seed", c.seed);
        c.trim_db = j.value("trim_db", c.trim_db);
        if (j.contains("framing")) {
            c.framing.window_ms =
                j["framing"].value("window_ms", c.framing.window_ms);
            c.framing.hop_ms = j["framing"].value("hop_ms", c.framing.hop_ms);
        }
        if (j.contains("yin")) {
            c.yin.fmin_hz = j["yin"].value("fmin", c.yin.fmin_hz);
            c.yin.fmax_hz = j["yin"].value("fmax", c.yin.fmax_hz);
            c.yin.threshold = j["yin"].value("threshold", c.yin.threshold);
            c.yin.window_ms = j["yin"].value("window_ms", c.yin.window_ms);
        }
        c.yin.hop_ms = c.framing.hop_ms;
        c.rolloff_pct = j.value("rolloff_pct", c.rolloff_pct);
        c.contrast_bands = j.value("contrast_bands", c.contrast_bands);
        c.min_seg_ms = j.value("min_seg_ms", c.min_seg_ms);
        c.alpha = j.value("alpha", c.alpha);
        if (j.contains("models"))
            c.models = j["models"].get<std::vector<std::string>>();
        if (j.contains("logreg")) {
            c.logreg_l2 = j["logreg"].value("l2", c.logreg_l2);
            c.logreg_class_weighted =
                j["logreg"].value("class_weighted", c.logreg_class_weighted);
        }
        if (j.contains("svm")) {
            c.linear_svm_c = j["svm"].value("linear_c", c.linear_svm_c);
            c.svm_tolerance = j["svm"].value("tolerance", c.svm_tolerance);
            c.svm_max_pair_updates =
                j["svm"].value("max_pair_updates", c.svm_max_pair_updates);
        }
        if (j.contains("grid")) {
            if (j["grid"].contains("c"))
                c.grid_c = j["grid"]["c"].get<std::vector<double>>();
            if (j["grid"].contains("gamma")) {
                c.grid_gamma.clear();
                for (const auto& g : j["grid"]["gamma"]) {
                    if (g.is_string())
                        c.grid_gamma.push_back(g.get<std::string>());
                    else
                        c.grid_gamma.push_back(json(g).dump());
                }
            }
        }
        c.cv_folds = j.value("cv_folds", c.cv_folds);
        if (j.contains("gmm")) {
            c.gmm_components = j["gmm"].value("components", c.gmm_components);
            c.gmm_restarts = j["gmm"].value("restarts", c.gmm_restarts);
        }
        c.kernel_cache_mb = j.value("kernel_cache_mb", c.kernel_cache_mb);
        c.threads = j.value("threads", c.threads);
        c.max_skip_fraction = j.value("max_skip_fraction", c.max_skip_fraction);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::BadConfig,
                    std::string("config field error: ") + e.what());
    }

    for (const auto& name : c.models) parse_model_variant(name);
    for (const auto& g : c.grid_gamma) GammaSpec::from_string(g);
    return c;
}

void apply_overrides(ExperimentConfig& config, const ConfigOverrides& ovr) {
    if (!ovr.dataset.empty()) config.dataset = ovr.dataset;
    if (!ovr.out_dir.empty()) config.out_dir = ovr.out_dir;
    if (!ovr.condition.empty()) config.condition = ovr.condition;
    if (ovr.seed_set) config.seed = ovr.seed;
    if (ovr.threads_set) config.threads = ovr.threads;
    if (!ovr.models.empty()) {
        config.models.clear();
        std::stringstream ss(ovr.models);
        std::string name;
        while (std::getline(ss, name, ','))
            if (!name.empty()) {
                parse_model_variant(name);
                config.models.push_back(name);
            }
    }
}

}  // namespace spoofdet
