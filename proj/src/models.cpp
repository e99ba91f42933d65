// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#include "spoofdet/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "spoofdet/error.hpp"
#include "spoofdet/gmm.hpp"
#include "spoofdet/linalg.hpp"
#include "spoofdet/smo.hpp"

#include <json.hpp>

namespace spoofdet {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

std::vector<double> signed_labels(const LabeledMatrix& data) {
    std::vector<double> y(data.n_rows);
    for (std::size_t i = 0; i < data.n_rows; ++i)
        y[i] = data.labels[i] == ClipLabel::Fake ? 1.0 : -1.0;
    return y;
}

void require_both_classes(const LabeledMatrix& data) {
    bool real = false, fake = false;
    for (ClipLabel l : data.labels)
        (l == ClipLabel::Fake ? fake : real) = true;
    if (!real || !fake)
        throw Error(ErrorCode::SingleClass, "training needs both classes");
}

struct ClassView {
    std::vector<double> x;  // row-major copy of one class
    std::size_t n_rows = 0;
};

ClassView class_view(const LabeledMatrix& data, ClipLabel label) {
    ClassView view;
    for (std::size_t r = 0; r < data.n_rows; ++r) {
        if (data.labels[r] != label) continue;
        view.x.insert(view.x.end(), data.row(r), data.row(r) + data.n_cols);
        ++view.n_rows;
    }
    return view;
}

// MLE mean and covariance, ridged with 1e-6 * trace / d
void fit_gaussian(const ClassView& view, std::size_t d,
                  std::vector<double>& mean, std::vector<double>& cov) {
    mean.assign(d, 0.0);
    for (std::size_t r = 0; r < view.n_rows; ++r)
        for (std::size_t j = 0; j < d; ++j) mean[j] += view.x[r * d + j];
    for (std::size_t j = 0; j < d; ++j)
        mean[j] /= static_cast<double>(view.n_rows);

    cov.assign(d * d, 0.0);
    for (std::size_t r = 0; r < view.n_rows; ++r)
        for (std::size_t a = 0; a < d; ++a) {
            const double da = view.x[r * d + a] - mean[a];
            for (std::size_t b = a; b < d; ++b)
                cov[a * d + b] += da * (view.x[r * d + b] - mean[b]);
        }
    double trace = 0.0;
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a; b < d; ++b) {
            double v = cov[a * d + b] / static_cast<double>(view.n_rows);
            cov[a * d + b] = v;
            cov[b * d + a] = v;
            if (a == b) trace += v;
        }
    const double ridge = 1e-6 * trace / static_cast<double>(d);
    for (std::size_t a = 0; a < d; ++a) cov[a * d + a] += ridge;
}

double gaussian_log_density(const std::vector<double>& chol, double log_det,
                            const std::vector<double>& mean, const double* x,
                            std::size_t d, std::vector<double>& diff,
                            std::vector<double>& y) {
    for (std::size_t j = 0; j < d; ++j) diff[j] = x[j] - mean[j];
    forward_solve(chol, d, diff.data(), y.data());
    double quad = 0.0;
    for (std::size_t j = 0; j < d; ++j) quad += y[j] * y[j];
    return -0.5 * (static_cast<double>(d) * kLog2Pi + log_det + quad);
}

TrainedModel train_discriminant(const LabeledMatrix& data, bool shared) {
    require_both_classes(data);
    const std::size_t d = data.n_cols;
    const ClassView real = class_view(data, ClipLabel::Real);
    const ClassView fake = class_view(data, ClipLabel::Fake);
    if (real.n_rows < 2 || fake.n_rows < 2)
        throw Error(ErrorCode::ClassTooSmall,
                    "need at least two rows per class");

    DiscriminantParams p;
    p.shared_covariance = shared;
    fit_gaussian(real, d, p.mean_real, p.cov_real);
    fit_gaussian(fake, d, p.mean_fake, p.cov_fake);

    if (shared) {
        // pool the raw within-class scatter, then apply a single ridge
        std::vector<double> pooled(d * d, 0.0);
        const auto nr = static_cast<double>(real.n_rows);
        const auto nf = static_cast<double>(fake.n_rows);
        const std::vector<double>& mean_r = p.mean_real;
        const std::vector<double>& mean_f = p.mean_fake;
        std::vector<double> scatter(d * d, 0.0);
        for (std::size_t r = 0; r < real.n_rows; ++r)
            for (std::size_t a = 0; a < d; ++a) {
                const double da = real.x[r * d + a] - mean_r[a];
                for (std::size_t b = a; b < d; ++b)
                    scatter[a * d + b] += da * (real.x[r * d + b] - mean_r[b]);
            }
        for (std::size_t r = 0; r < fake.n_rows; ++r)
            for (std::size_t a = 0; a < d; ++a) {
                const double da = fake.x[r * d + a] - mean_f[a];
                for (std::size_t b = a; b < d; ++b)
                    scatter[a * d + b] += da * (fake.x[r * d + b] - mean_f[b]);
            }
        double trace = 0.0;
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = a; b < d; ++b) {
                double v = scatter[a * d + b] / (nr + nf);
                pooled[a * d + b] = v;
                pooled[b * d + a] = v;
                if (a == b) trace += v;
            }
        const double ridge = 1e-6 * trace / static_cast<double>(d);
        for (std::size_t a = 0; a < d; ++a) pooled[a * d + a] += ridge;
        p.cov_real = pooled;
        p.cov_fake = std::move(pooled);
    }

    const double n_total = static_cast<double>(real.n_rows + fake.n_rows);
    p.log_prior_real = std::log(static_cast<double>(real.n_rows) / n_total);
    p.log_prior_fake = std::log(static_cast<double>(fake.n_rows) / n_total);

    // fail fast when regularization still leaves a singular covariance
    std::vector<double> probe = p.cov_real;
    if (!cholesky_lower(probe, d))
        throw Error(ErrorCode::SingularCovariance, "real-class covariance");
    probe = p.cov_fake;
    if (!cholesky_lower(probe, d))
        throw Error(ErrorCode::SingularCovariance, "fake-class covariance");

    TrainedModel model;
    model.variant = shared ? ModelVariant::Lda : ModelVariant::Qda;
    model.schema_fingerprint = data.schema_fingerprint;
    model.params = std::move(p);
    return model;
}

}  // namespace

std::vector<ClipLabel> ScoreSet::predictions() const {
    std::vector<ClipLabel> out(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
        out[i] = scores[i] > threshold ? ClipLabel::Fake : ClipLabel::Real;
    return out;
}

const char* model_variant_name(ModelVariant variant) {
    switch (variant) {
        case ModelVariant::LogReg: return "logreg";
        case ModelVariant::Lda: return "lda";
        case ModelVariant::Qda: return "qda";
        case ModelVariant::Gnb: return "gnb";
        case ModelVariant::LinearSvm: return "linear_svm";
        case ModelVariant::RbfSvm: return "rbf_svm";
        case ModelVariant::Gmm: return "gmm";
    }
    return "unknown";
}

ModelVariant parse_model_variant(const std::string& name) {
    for (ModelVariant v :
         {ModelVariant::LogReg, ModelVariant::Lda, ModelVariant::Qda,
          ModelVariant::Gnb, ModelVariant::LinearSvm, ModelVariant::RbfSvm,
          ModelVariant::Gmm})
        if (name == model_variant_name(v)) return v;
    throw Error(ErrorCode::BadConfig, "unknown model '" + name + "'");
}

double logreg_objective(const LabeledMatrix& data, double l2,
                        bool class_weighted, const std::vector<double>& wb,
                        std::vector<double>* grad_out) {
    const std::size_t d = data.n_cols;
    if (wb.size() != d + 1)
        throw Error(ErrorCode::LengthMismatch, "parameter vector must be d+1");

    std::size_t n_fake = 0;
    for (ClipLabel l : data.labels)
        if (l == ClipLabel::Fake) ++n_fake;
    const std::size_t n_real = data.n_rows - n_fake;
    const double w_fake =
        class_weighted ? static_cast<double>(data.n_rows) /
                             (2.0 * static_cast<double>(n_fake))
                       : 1.0;
    const double w_real =
        class_weighted ? static_cast<double>(data.n_rows) /
                             (2.0 * static_cast<double>(n_real))
                       : 1.0;

    if (grad_out) grad_out->assign(d + 1, 0.0);
    double obj = 0.0;
    for (std::size_t i = 0; i < data.n_rows; ++i) {
        const double* x = data.row(i);
        const double z = data.labels[i] == ClipLabel::Fake ? 1.0 : -1.0;
        const double cw = z > 0 ? w_fake : w_real;
        double f = wb[d];
        for (std::size_t j = 0; j < d; ++j) f += wb[j] * x[j];
        const double t = z * f;
        // log(1 + exp(-t)) without overflow
        obj += cw * (t < 0.0 ? -t + std::log1p(std::exp(t))
                             : std::log1p(std::exp(-t)));
        if (grad_out) {
            const double sig = 1.0 / (1.0 + std::exp(t));  // sigma(-t)
            const double g = -cw * z * sig;
            for (std::size_t j = 0; j < d; ++j) (*grad_out)[j] += g * x[j];
            (*grad_out)[d] += g;
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        obj += 0.5 * l2 * wb[j] * wb[j];
        if (grad_out) (*grad_out)[j] += l2 * wb[j];
    }
    return obj;
}

TrainedModel train_logreg(const LabeledMatrix& data, double l2,
                          bool class_weighted) {
    require_both_classes(data);
    const std::size_t d = data.n_cols;

    std::vector<double> wb(d + 1, 0.0);
    std::vector<double> grad, trial_grad;
    double obj = logreg_objective(data, l2, class_weighted, wb, &grad);

    constexpr int kMaxIter = 5000;
    constexpr double kGradTol = 1e-6;
    constexpr double kArmijo = 1e-4;
    double step = 1.0;
    int iter = 0;
    double grad_inf = 0.0;
    for (double g : grad) grad_inf = std::max(grad_inf, std::abs(g));

    std::vector<double> trial(d + 1);
    for (; iter < kMaxIter && grad_inf >= kGradTol; ++iter) {
        double grad_sq = 0.0;
        for (double g : grad) grad_sq += g * g;

        step = std::min(step * 2.0, 1e6);
        double trial_obj = 0.0;
        for (;;) {
            for (std::size_t j = 0; j <= d; ++j)
                trial[j] = wb[j] - step * grad[j];
            trial_obj = logreg_objective(data, l2, class_weighted, trial,
                                         nullptr);
            if (trial_obj <= obj - kArmijo * step * grad_sq) break;
            step *= 0.5;
            if (step < 1e-18) break;
        }
        if (step < 1e-18) break;  // no descent direction progress left
        wb.swap(trial);
        obj = logreg_objective(data, l2, class_weighted, wb, &grad);
        grad_inf = 0.0;
        for (double g : grad) grad_inf = std::max(grad_inf, std::abs(g));
    }

    LogRegParams p;
    p.weights.assign(wb.begin(), wb.begin() + static_cast<std::ptrdiff_t>(d));
    p.bias = wb[d];
    p.l2 = l2;
    p.class_weighted = class_weighted;
    p.iterations = iter;
    p.final_grad_norm = grad_inf;

    TrainedModel model;
    model.variant = ModelVariant::LogReg;
    model.schema_fingerprint = data.schema_fingerprint;
    model.converged = grad_inf < kGradTol;
    model.params = std::move(p);
    return model;
}

TrainedModel train_lda(const LabeledMatrix& data) {
    return train_discriminant(data, true);
}

TrainedModel train_qda(const LabeledMatrix& data) {
    return train_discriminant(data, false);
}

TrainedModel train_gnb(const LabeledMatrix& data) {
    require_both_classes(data);
    const std::size_t d = data.n_cols;
    const ClassView real = class_view(data, ClipLabel::Real);
    const ClassView fake = class_view(data, ClipLabel::Fake);
    if (real.n_rows < 2 || fake.n_rows < 2)
        throw Error(ErrorCode::ClassTooSmall,
                    "need at least two rows per class");

    auto moments = [&](const ClassView& view, std::vector<double>& mean,
                       std::vector<double>& var) {
        mean.assign(d, 0.0);
        var.assign(d, 0.0);
        for (std::size_t r = 0; r < view.n_rows; ++r)
            for (std::size_t j = 0; j < d; ++j) mean[j] += view.x[r * d + j];
        for (std::size_t j = 0; j < d; ++j)
            mean[j] /= static_cast<double>(view.n_rows);
        for (std::size_t r = 0; r < view.n_rows; ++r)
            for (std::size_t j = 0; j < d; ++j) {
                const double diff = view.x[r * d + j] - mean[j];
                var[j] += diff * diff;
            }
        for (std::size_t j = 0; j < d; ++j)
            var[j] /= static_cast<double>(view.n_rows);
    };

    GnbParams p;
    moments(real, p.mean_real, p.var_real);
    moments(fake, p.mean_fake, p.var_fake);

    // floor at 1e-9 of the largest overall feature variance
    std::vector<double> overall_mean(d, 0.0), overall_var(d, 0.0);
    for (std::size_t r = 0; r < data.n_rows; ++r)
        for (std::size_t j = 0; j < d; ++j) overall_mean[j] += data.at(r, j);
    for (std::size_t j = 0; j < d; ++j)
        overall_mean[j] /= static_cast<double>(data.n_rows);
    double max_var = 0.0;
    for (std::size_t r = 0; r < data.n_rows; ++r)
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = data.at(r, j) - overall_mean[j];
            overall_var[j] += diff * diff;
        }
    for (std::size_t j = 0; j < d; ++j)
        max_var = std::max(max_var, overall_var[j] /
                                        static_cast<double>(data.n_rows));
    const double floor = 1e-9 * max_var;
    for (std::size_t j = 0; j < d; ++j) {
        p.var_real[j] = std::max(p.var_real[j], floor);
        p.var_fake[j] = std::max(p.var_fake[j], floor);
    }

    const double n_total = static_cast<double>(data.n_rows);
    p.log_prior_real =
        std::log(static_cast<double>(real.n_rows) / n_total);
    p.log_prior_fake =
        std::log(static_cast<double>(fake.n_rows) / n_total);

    TrainedModel model;
    model.variant = ModelVariant::Gnb;
    model.schema_fingerprint = data.schema_fingerprint;
    model.params = std::move(p);
    return model;
}

GammaSpec GammaSpec::from_string(const std::string& text) {
    GammaSpec g;
    if (text == "scale") {
        g.scale = true;
        return g;
    }
    g.scale = false;
    char* end = nullptr;
    g.value = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || g.value <= 0.0)
        throw Error(ErrorCode::BadConfig, "bad gamma '" + text + "'");
    return g;
}

std::string GammaSpec::to_string() const {
    if (scale) return "scale";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", value);
    return buf;
}

double resolve_gamma_scale(const LabeledMatrix& data) {
    const std::size_t d = data.n_cols;
    std::vector<double> mean(d, 0.0);
    for (std::size_t r = 0; r < data.n_rows; ++r)
        for (std::size_t j = 0; j < d; ++j) mean[j] += data.at(r, j);
    for (std::size_t j = 0; j < d; ++j)
        mean[j] /= static_cast<double>(data.n_rows);
    double var_sum = 0.0;
    for (std::size_t r = 0; r < data.n_rows; ++r)
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = data.at(r, j) - mean[j];
            var_sum += diff * diff;
        }
    const double mean_var =
        var_sum / static_cast<double>(data.n_rows) / static_cast<double>(d);
    if (mean_var <= 0.0) return 1.0;
    return 1.0 / (static_cast<double>(d) * mean_var);
}

TrainedModel train_svm(const LabeledMatrix& data, const SvmConfig& config) {
    require_both_classes(data);
    const double gamma =
        config.gamma.scale ? resolve_gamma_scale(data) : config.gamma.value;
    KernelFunction kernel{config.rbf, gamma};
    const std::vector<double> y = signed_labels(data);

    SmoResult solution =
        smo_solve(data, y, config.c, kernel, config.tolerance,
                  config.max_pair_updates, config.cache_mb);

    SvmParams p;
    p.rbf = config.rbf;
    p.gamma = gamma;
    p.c = config.c;
    p.bias = solution.bias;
    p.final_kkt_violation = solution.final_violation;
    p.pair_updates = solution.pair_updates;
    for (std::size_t i = 0; i < data.n_rows; ++i) {
        if (solution.alpha[i] <= 0.0) continue;
        p.support.insert(p.support.end(), data.row(i),
                         data.row(i) + data.n_cols);
        p.coeff.push_back(solution.alpha[i] * y[i]);
    }

    TrainedModel model;
    model.variant = config.rbf ? ModelVariant::RbfSvm : ModelVariant::LinearSvm;
    model.schema_fingerprint = data.schema_fingerprint;
    model.converged = solution.converged;
    model.params = std::move(p);
    return model;
}

TrainedModel train_gmm_classifier(
    const LabeledMatrix& data, const GmmConfig& config, std::uint64_t seed,
    std::vector<std::vector<double>>* loglik_histories) {
    require_both_classes(data);
    const std::size_t d = data.n_cols;
    const ClassView real = class_view(data, ClipLabel::Real);
    const ClassView fake = class_view(data, ClipLabel::Fake);
    const std::size_t need = config.components * (d + 1);
    if (real.n_rows < need || fake.n_rows < need)
        throw Error(ErrorCode::ClassTooSmall,
                    "need at least k*(d+1) rows per class");

    // the same seed for both classes keeps label-swapped training mirrored
    GmmFit fit_real = fit_gmm(real.x, real.n_rows, d, config, seed);
    GmmFit fit_fake = fit_gmm(fake.x, fake.n_rows, d, config, seed);
    if (loglik_histories) {
        loglik_histories->clear();
        loglik_histories->push_back(fit_real.loglik_history);
        loglik_histories->push_back(fit_fake.loglik_history);
    }

    GmmParams p;
    p.real = std::move(fit_real.params);
    p.fake = std::move(fit_fake.params);
    p.k = config.components;
    p.restarts = config.restarts;
    const double n_total = static_cast<double>(data.n_rows);
    p.log_prior_real =
        std::log(static_cast<double>(real.n_rows) / n_total);
    p.log_prior_fake =
        std::log(static_cast<double>(fake.n_rows) / n_total);

    TrainedModel model;
    model.variant = ModelVariant::Gmm;
    model.schema_fingerprint = data.schema_fingerprint;
    model.seed = seed;
    model.params = std::move(p);
    return model;
}

ScoreSet predict_scores(const TrainedModel& model, const LabeledMatrix& x) {
    if (model.schema_fingerprint != x.schema_fingerprint)
        throw Error(ErrorCode::SchemaMismatch,
                    "matrix was built under a different feature schema");
    const std::size_t d = x.n_cols;
    ScoreSet out;
    out.scores.resize(x.n_rows);

    if (const auto* p = std::get_if<LogRegParams>(&model.params)) {
        if (p->weights.size() != d)
            throw Error(ErrorCode::SchemaMismatch, "weight width mismatch");
        for (std::size_t r = 0; r < x.n_rows; ++r) {
            double f = p->bias;
            const double* row = x.row(r);
            for (std::size_t j = 0; j < d; ++j) f += p->weights[j] * row[j];
            out.scores[r] = f;
        }
        return out;
    }
    if (const auto* p = std::get_if<DiscriminantParams>(&model.params)) {
        std::vector<double> chol_real = p->cov_real;
        std::vector<double> chol_fake = p->cov_fake;
        if (!cholesky_lower(chol_real, d) || !cholesky_lower(chol_fake, d))
            throw Error(ErrorCode::SingularCovariance, "stored covariance");
        const double logdet_real = cholesky_log_det(chol_real, d);
        const double logdet_fake = cholesky_log_det(chol_fake, d);
        std::vector<double> diff(d), tmp(d);
        for (std::size_t r = 0; r < x.n_rows; ++r) {
            const double lr = gaussian_log_density(chol_real, logdet_real,
                                                   p->mean_real, x.row(r), d,
                                                   diff, tmp) +
                              p->log_prior_real;
            const double lf = gaussian_log_density(chol_fake, logdet_fake,
                                                   p->mean_fake, x.row(r), d,
                                                   diff, tmp) +
                              p->log_prior_fake;
            out.scores[r] = lf - lr;
        }
        return out;
    }
    if (const auto* p = std::get_if<GnbParams>(&model.params)) {
        for (std::size_t r = 0; r < x.n_rows; ++r) {
            const double* row = x.row(r);
            double lr = p->log_prior_real, lf = p->log_prior_fake;
            for (std::size_t j = 0; j < d; ++j) {
                double diff = row[j] - p->mean_real[j];
                lr -= 0.5 * (kLog2Pi + std::log(p->var_real[j]) +
                             diff * diff / p->var_real[j]);
                diff = row[j] - p->mean_fake[j];
                lf -= 0.5 * (kLog2Pi + std::log(p->var_fake[j]) +
                             diff * diff / p->var_fake[j]);
            }
            out.scores[r] = lf - lr;
        }
        return out;
    }
    if (const auto* p = std::get_if<SvmParams>(&model.params)) {
        const std::size_t n_sv = p->n_support(d);
        if (n_sv * d != p->support.size())
            throw Error(ErrorCode::SchemaMismatch, "support vector width");
        KernelFunction kernel{p->rbf, p->gamma};
        for (std::size_t r = 0; r < x.n_rows; ++r) {
            double f = p->bias;
            const double* row = x.row(r);
            for (std::size_t s = 0; s < n_sv; ++s)
                f += p->coeff[s] * kernel(p->support.data() + s * d, row, d);
            out.scores[r] = f;
        }
        return out;
    }
    const auto& p = std::get<GmmParams>(model.params);
    for (std::size_t r = 0; r < x.n_rows; ++r) {
        const double lf =
            gmm_log_density(p.fake, d, x.row(r)) + p.log_prior_fake;
        const double lr =
            gmm_log_density(p.real, d, x.row(r)) + p.log_prior_real;
        out.scores[r] = lf - lr;
    }
    return out;
}

}  // namespace spoofdet
