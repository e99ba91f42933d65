// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>

#include "spoofdet/error.hpp"
#include "spoofdet/models.hpp"

#include <json.hpp>

namespace spoofdet {

namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "spoofdet-model-v1";

json params_to_json(const TrainedModel& model) {
    json j;
    if (const auto* p = std::get_if<LogRegParams>(&model.params)) {
        j["weights"] = p->weights;
        j["bias"] = p->bias;
        j["l2"] = p->l2;
        j["class_weighted"] = p->class_weighted;
        j["iterations"] = p->iterations;
        j["final_grad_norm"] = p->final_grad_norm;
    } else if (const auto* p =
                   std::get_if<DiscriminantParams>(&model.params)) {
        j["mean_real"] = p->mean_real;
        j["mean_fake"] = p->mean_fake;
        j["cov_real"] = p->cov_real;
        j["cov_fake"] = p->cov_fake;
        j["log_prior_real"] = p->log_prior_real;
        j["log_prior_fake"] = p->log_prior_fake;
        j["shared_covariance"] = p->shared_covariance;
    } else if (const auto* p = std::get_if<GnbParams>(&model.params)) {
        j["mean_real"] = p->mean_real;
        j["mean_fake"] = p->mean_fake;
        j["var_real"] = p->var_real;
        j["var_fake"] = p->var_fake;
        j["log_prior_real"] = p->log_prior_real;
        j["log_prior_fake"] = p->log_prior_fake;
    } else if (const auto* p = std::get_if<SvmParams>(&model.params)) {
        j["rbf"] = p->rbf;
        j["gamma"] = p->gamma;
        j["c"] = p->c;
        j["support"] = p->support;
        j["coeff"] = p->coeff;
        j["bias"] = p->bias;
        j["final_kkt_violation"] = p->final_kkt_violation;
        j["pair_updates"] = p->pair_updates;
    } else {
        const auto& g = std::get<GmmParams>(model.params);
        auto class_json = [](const GmmClassParams& c) {
            json cj;
            cj["log_weights"] = c.log_weights;
            cj["means"] = c.means;
            cj["vars"] = c.vars;
            cj["full_cov"] = c.full_cov;
            cj["cov"] = c.cov;
            cj["final_log_likelihood"] = c.final_log_likelihood;
            return cj;
        };
        j["real"] = class_json(g.real);
        j["fake"] = class_json(g.fake);
        j["log_prior_real"] = g.log_prior_real;
        j["log_prior_fake"] = g.log_prior_fake;
        j["k"] = g.k;
        j["restarts"] = g.restarts;
    }
    return j;
}

void params_from_json(const json& j, TrainedModel& model) {
    switch (model.variant) {
        case ModelVariant::LogReg: {
            LogRegParams p;
            p.weights = j.at("weights").get<std::vector<double>>();
            p.bias = j.at("bias").get<double>();
            p.l2 = j.at("l2").get<double>();
            p.class_weighted = j.at("class_weighted").get<bool>();
            p.iterations = j.at("iterations").get<int>();
            p.final_grad_norm = j.at("final_grad_norm").get<double>();
            model.params = std::move(p);
            break;
        }
        case ModelVariant::Lda:
        case ModelVariant::Qda: {
            DiscriminantParams p;
            p.mean_real = j.at("mean_real").get<std::vector<double>>();
            p.mean_fake = j.at("mean_fake").get<std::vector<double>>();
            p.cov_real = j.at("cov_real").get<std::vector<double>>();
            p.cov_fake = j.at("cov_fake").get<std::vector<double>>();
            p.log_prior_real = j.at("log_prior_real").get<double>();
            p.log_prior_fake = j.at("log_prior_fake").get<double>();
            p.shared_covariance = j.at("shared_covariance").get<bool>();
            model.params = std::move(p);
            break;
        }
        case ModelVariant::Gnb: {
            GnbParams p;
            p.mean_real = j.at("mean_real").get<std::vector<double>>();
            p.mean_fake = j.at("mean_fake").get<std::vector<double>>();
            p.var_real = j.at("var_real").get<std::vector<double>>();
            p.var_fake = j.at("var_fake").get<std::vector<double>>();
            p.log_prior_real = j.at("log_prior_real").get<double>();
            p.log_prior_fake = j.at("log_prior_fake").get<double>();
            model.params = std::move(p);
            break;
        }
        case ModelVariant::LinearSvm:
        case ModelVariant::RbfSvm: {
            SvmParams p;
            p.rbf = j.at("rbf").get<bool>();
            p.gamma = j.at("gamma").get<double>();
            p.c = j.at("c").get<double>();
            p.support = j.at("support").get<std::vector<double>>();
            p.coeff = j.at("coeff").get<std::vector<double>>();
            p.bias = j.at("bias").get<double>();
            p.final_kkt_violation = j.at("final_kkt_violation").get<double>();
            p.pair_updates = j.at("pair_updates").get<std::uint64_t>();
            model.params = std::move(p);
            break;
        }
        case ModelVariant::Gmm: {
            GmmParams p;
            auto class_from = [](const json& cj) {
                GmmClassParams c;
                c.log_weights = cj.at("log_weights").get<std::vector<double>>();
                c.means = cj.at("means").get<std::vector<double>>();
                c.vars = cj.at("vars").get<std::vector<double>>();
                c.full_cov = cj.at("full_cov").get<bool>();
                c.cov = cj.at("cov").get<std::vector<double>>();
                c.final_log_likelihood =
                    cj.at("final_log_likelihood").get<double>();
                return c;
            };
            p.real = class_from(j.at("real"));
            p.fake = class_from(j.at("fake"));
            p.log_prior_real = j.at("log_prior_real").get<double>();
            p.log_prior_fake = j.at("log_prior_fake").get<double>();
            p.k = j.at("k").get<std::size_t>();
            p.restarts = j.at("restarts").get<int>();
            model.params = std::move(p);
            break;
        }
    }
}

std::string fingerprint_hex(std::uint64_t fp) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fp));
    return buf;
}

std::uint64_t fingerprint_from_hex(const std::string& hex) {
    return std::strtoull(hex.c_str(), nullptr, 16);
}

}  // namespace

std::string model_to_json(const TrainedModel& model,
                          const std::string& config_hash) {
    json j;
    j["format"] = kFormatTag;
    if (!config_hash.empty()) j["config_hash"] = config_hash;
    j["variant"] = model.name();
    j["seed"] = model.seed;
    j["converged"] = model.converged;
    j["schema"] = {{"fingerprint", fingerprint_hex(model.schema_fingerprint)},
                   {"features", model.feature_names}};
    j["params"] = params_to_json(model);
    return j.dump(2) + "\n";
}

TrainedModel model_from_json(const std::string& text,
                             std::string* config_hash_out) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::IoError,
                    std::string("bad model JSON: ") + e.what());
    }
    if (j.value("format", "") != kFormatTag)
        throw Error(ErrorCode::IoError, "not a spoofdet model file");

    TrainedModel model;
    model.variant = parse_model_variant(j.at("variant").get<std::string>());
    model.seed = j.value("seed", std::uint64_t{0});
    model.converged = j.value("converged", true);
    model.schema_fingerprint = fingerprint_from_hex(
        j.at("schema").at("fingerprint").get<std::string>());
    model.feature_names =
        j.at("schema").at("features").get<std::vector<std::string>>();
    if (config_hash_out) *config_hash_out = j.value("config_hash", "");
    params_from_json(j.at("params"), model);
    return model;
}

void save_model(const TrainedModel& model, const std::string& path,
                const std::string& config_hash) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out << model_to_json(model, config_hash);
}

TrainedModel load_model(const std::string& path,
                        std::string* config_hash_out) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return model_from_json(text, config_hash_out);
}

}  // namespace spoofdet
