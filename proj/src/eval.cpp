// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#include "spoofdet/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "spoofdet/error.hpp"
#include "spoofdet/special.hpp"

namespace spoofdet {

namespace {

void require_both(const std::vector<ClipLabel>& labels) {
    bool real = false, fake = false;
    for (ClipLabel l : labels) (l == ClipLabel::Fake ? fake : real) = true;
    if (!real || !fake)
        throw Error(ErrorCode::SingleClass, "need both labels present");
}

struct RateSweep {
    std::vector<double> thresholds;  // distinct scores ascending
    std::vector<double> far;         // fraction of Real > t
    std::vector<double> frr;         // fraction of Fake <= t
};

RateSweep sweep_rates(const ScoreSet& scores,
                      const std::vector<ClipLabel>& labels) {
    if (scores.scores.size() != labels.size())
        throw Error(ErrorCode::LengthMismatch, "scores vs labels");
    require_both(labels);

    std::vector<std::pair<double, ClipLabel>> sorted;
    sorted.reserve(labels.size());
    std::size_t n_real = 0, n_fake = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        sorted.emplace_back(scores.scores[i], labels[i]);
        (labels[i] == ClipLabel::Fake ? n_fake : n_real) += 1;
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    RateSweep sweep;
    std::size_t real_at_or_below = 0, fake_at_or_below = 0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        const double value = sorted[i].first;
        while (i < sorted.size() && sorted[i].first == value) {
            (sorted[i].second == ClipLabel::Fake ? fake_at_or_below
                                                 : real_at_or_below) += 1;
            ++i;
        }
        sweep.thresholds.push_back(value);
        sweep.far.push_back(static_cast<double>(n_real - real_at_or_below) /
                            static_cast<double>(n_real));
        sweep.frr.push_back(static_cast<double>(fake_at_or_below) /
                            static_cast<double>(n_fake));
    }
    return sweep;
}

}  // namespace

RocCurve roc_and_auc(const ScoreSet& scores,
                     const std::vector<ClipLabel>& labels) {
    if (scores.scores.size() != labels.size())
        throw Error(ErrorCode::LengthMismatch, "scores vs labels");
    require_both(labels);

    std::vector<std::pair<double, ClipLabel>> sorted;
    sorted.reserve(labels.size());
    std::size_t n_real = 0, n_fake = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        sorted.emplace_back(scores.scores[i], labels[i]);
        (labels[i] == ClipLabel::Fake ? n_fake : n_real) += 1;
    }
    // descending: predict Fake at score >= threshold
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    RocCurve curve;
    curve.points.push_back({0.0, 0.0});
    std::size_t tp = 0, fp = 0;
    double auc = 0.0;
    double prev_fpr = 0.0, prev_tpr = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        const double value = sorted[i].first;
        while (i < sorted.size() && sorted[i].first == value) {
            (sorted[i].second == ClipLabel::Fake ? tp : fp) += 1;
            ++i;
        }
        const double fpr = static_cast<double>(fp) / static_cast<double>(n_real);
        const double tpr = static_cast<double>(tp) / static_cast<double>(n_fake);
        auc += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
        curve.points.push_back({fpr, tpr});
        prev_fpr = fpr;
        prev_tpr = tpr;
    }
    curve.auc = auc;
    return curve;
}

double equal_error_rate(const ScoreSet& scores,
                        const std::vector<ClipLabel>& labels) {
    const RateSweep sweep = sweep_rates(scores, labels);

    // virtual threshold below every score: FAR 1, FRR 0
    double prev_far = 1.0, prev_frr = 0.0;
    for (std::size_t i = 0; i < sweep.thresholds.size(); ++i) {
        const double far = sweep.far[i];
        const double frr = sweep.frr[i];
        const double diff = far - frr;
        if (diff == 0.0) return (far + frr) / 2.0;
        if (diff < 0.0) {
            // crossed between the previous threshold and this one
            const double prev_diff = prev_far - prev_frr;
            const double s = prev_diff / (prev_diff - diff);
            return prev_far + s * (far - prev_far);
        }
        prev_far = far;
        prev_frr = frr;
    }
    // FAR stayed above FRR through the last threshold (FAR there is 0 only
    // when every Real ties the max); treat the endpoint as the crossing
    return (sweep.far.back() + sweep.frr.back()) / 2.0;
}

DetCurve det_curve(const ScoreSet& scores,
                   const std::vector<ClipLabel>& labels) {
    const RateSweep sweep = sweep_rates(scores, labels);

    DetCurve curve;
    curve.eer = equal_error_rate(scores, labels);
    auto probit = [](double rate) {
        return inverse_normal_cdf(std::clamp(rate, 1e-4, 1.0 - 1e-4));
    };
    for (std::size_t i = 0; i < sweep.thresholds.size(); ++i)
        curve.points.push_back({sweep.thresholds[i], sweep.far[i],
                                sweep.frr[i], probit(sweep.far[i]),
                                probit(sweep.frr[i])});
    return curve;
}

McNemarResult mcnemar(const std::vector<ClipLabel>& preds_a,
                      const std::vector<ClipLabel>& preds_b,
                      const std::vector<ClipLabel>& labels) {
    if (preds_a.size() != labels.size() || preds_b.size() != labels.size())
        throw Error(ErrorCode::LengthMismatch,
                    "prediction vectors must match label count");

    McNemarResult result;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool a_right = preds_a[i] == labels[i];
        const bool b_right = preds_b[i] == labels[i];
        if (a_right && !b_right) ++result.b;
        if (!a_right && b_right) ++result.c;
    }

    const std::size_t n = result.b + result.c;
    if (n == 0) {
        result.chi2_cc = 0.0;
        result.p_asymptotic = 1.0;
        result.p_exact = 1.0;
        return result;
    }
    const double diff =
        std::abs(static_cast<double>(result.b) - static_cast<double>(result.c));
    const double corrected = diff - 1.0;  // may be negative at b == c
    result.chi2_cc = corrected * corrected / static_cast<double>(n);
    result.p_asymptotic = chi2_1_sf(result.chi2_cc);

    const int lo = static_cast<int>(std::min(result.b, result.c));
    const int hi = static_cast<int>(std::max(result.b, result.c));
    const double tail_low = binomial_half_cdf(lo, static_cast<int>(n));
    // P[X >= hi] = P[X <= n - hi] by symmetry of Bin(n, 1/2)
    const double tail_high =
        binomial_half_cdf(static_cast<int>(n) - hi, static_cast<int>(n));
    result.p_exact = std::min(1.0, 2.0 * std::min(tail_low, tail_high));
    return result;
}

EvalReport evaluate(const TrainedModel& model, const LabeledMatrix& data,
                    SplitTag split) {
    EvalReport report;
    report.model = model.name();
    report.split = split;

    const ScoreSet scores = predict_scores(model, data);
    const auto preds = scores.predictions();
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const bool is_fake = data.labels[i] == ClipLabel::Fake;
        const bool said_fake = preds[i] == ClipLabel::Fake;
        if (is_fake && said_fake) ++report.confusion.tp;
        else if (is_fake) ++report.confusion.fn;
        else if (said_fake) ++report.confusion.fp;
        else ++report.confusion.tn;
    }
    report.accuracy =
        static_cast<double>(report.confusion.tp + report.confusion.tn) /
        static_cast<double>(report.confusion.total());
    report.roc = roc_and_auc(scores, data.labels);
    report.auc = report.roc.auc;
    report.det = det_curve(scores, data.labels);
    report.eer = report.det.eer;
    return report;
}

ModelComparison compare_all(const std::vector<TrainedModel>& models,
                            const LabeledMatrix& data, double alpha) {
    ModelComparison cmp;
    const std::size_t m = models.size();
    cmp.pairwise.resize(m * m);

    std::vector<std::vector<ClipLabel>> preds;
    for (const TrainedModel& model : models) {
        cmp.names.push_back(model.name());
        const ScoreSet scores = predict_scores(model, data);
        preds.push_back(scores.predictions());
        std::size_t correct = 0;
        for (std::size_t i = 0; i < data.n_rows; ++i)
            if (preds.back()[i] == data.labels[i]) ++correct;
        cmp.accuracy.push_back(static_cast<double>(correct) /
                               static_cast<double>(data.n_rows));
    }

    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            cmp.pairwise[i * m + j] = mcnemar(preds[i], preds[j], data.labels);

    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            if (cmp.at(i, j).p_exact < alpha &&
                cmp.accuracy[i] > cmp.accuracy[j])
                cmp.ranking_edges.emplace_back(i, j);
        }
    return cmp;
}

void write_eval_csv(const std::vector<EvalReport>& train_reports,
                    const std::vector<EvalReport>& test_reports,
                    const std::string& path,
                    const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    out << "model,train_acc,train_auc,test_acc,test_auc,test_eer\n";
    char buf[192];
    for (const EvalReport& test : test_reports) {
        const EvalReport* train = nullptr;
        for (const EvalReport& t : train_reports)
            if (t.model == test.model) train = &t;
        if (train)
            std::snprintf(buf, sizeof(buf), "%s,%.4f,%.4f,%.4f,%.4f,%.2f\n",
                          test.model.c_str(), train->accuracy, train->auc,
                          test.accuracy, test.auc, 100.0 * test.eer);
        else
            std::snprintf(buf, sizeof(buf), "%s,,,%.4f,%.4f,%.2f\n",
                          test.model.c_str(), test.accuracy, test.auc,
                          100.0 * test.eer);
        out << buf;
    }
}

void write_roc_csv(const RocCurve& curve, const std::string& path,
                   const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    out << "fpr,tpr\n";
    char buf[80];
    for (const RocPoint& p : curve.points) {
        std::snprintf(buf, sizeof(buf), "%.10g,%.10g\n", p.fpr, p.tpr);
        out << buf;
    }
}

void write_det_csv(const DetCurve& curve, const std::string& path,
                   const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    out << "threshold,far,frr\n";
    char buf[120];
    for (const DetPoint& p : curve.points) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.10g,%.10g\n", p.threshold,
                      p.far, p.frr);
        out << buf;
    }
}

void write_mcnemar_csv(const ModelComparison& comparison,
                       const std::string& path,
                       const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    out << "model";
    for (const auto& name : comparison.names) out << ',' << name;
    out << '\n';
    char buf[64];
    const std::size_t m = comparison.names.size();
    for (std::size_t i = 0; i < m; ++i) {
        out << comparison.names[i];
        for (std::size_t j = 0; j < m; ++j) {
            std::snprintf(buf, sizeof(buf), ",%.10g",
                          comparison.at(i, j).p_exact);
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace spoofdet
