// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "spoofdet/models.hpp"

namespace spoofdet {

struct RocPoint {
    double fpr;
    double tpr;
};

struct RocCurve {
    std::vector<RocPoint> points;  // (0,0) .. (1,1), FPR/TPR non-decreasing
    double auc = 0.0;
};

struct DetPoint {
    double threshold;
    double far;  // fraction of Real scored above the threshold
    double frr;  // fraction of Fake scored at or below it
    double far_probit;
    double frr_probit;
};

struct DetCurve {
    std::vector<DetPoint> points;
    double eer = 0.0;
};

struct ConfusionCounts {
    std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
    std::size_t total() const { return tp + tn + fp + fn; }
};

struct EvalReport {
    std::string model;
    SplitTag split = SplitTag::Test;
    double accuracy = 0.0;
    double auc = 0.0;
    double eer = 0.0;
    ConfusionCounts confusion;
    RocCurve roc;
    DetCurve det;
};

struct McNemarResult {
    std::size_t b = 0;  // A right, B wrong
    std::size_t c = 0;  // A wrong, B right
    double chi2_cc = 0.0;
    double p_asymptotic = 1.0;
    double p_exact = 1.0;
};

// Thresholds sweep the distinct scores descending; tied scores share one
// vertex; AUC by trapezoid. Fake is the positive class. Throws SingleClass.
RocCurve roc_and_auc(const ScoreSet& scores,
                     const std::vector<ClipLabel>& labels);

// Crossing of the FAR/FRR step functions, linearly interpolated between
// the bracketing thresholds; a shared flat stretch yields its midpoint.
double equal_error_rate(const ScoreSet& scores,
                        const std::vector<ClipLabel>& labels);

// (FAR, FRR) at each distinct threshold plus probit-scaled coordinates
// (rates clamped to [1e-4, 1 - 1e-4] before the transform).
DetCurve det_curve(const ScoreSet& scores,
                   const std::vector<ClipLabel>& labels);

// Continuity-corrected chi-square plus the exact two-sided binomial test
// on the disagreement counts. Throws LengthMismatch.
McNemarResult mcnemar(const std::vector<ClipLabel>& preds_a,
                      const std::vector<ClipLabel>& preds_b,
                      const std::vector<ClipLabel>& labels);

EvalReport evaluate(const TrainedModel& model, const LabeledMatrix& data,
                    SplitTag split);

struct ModelComparison {
    std::vector<std::string> names;
    std::vector<McNemarResult> pairwise;  // row-major [n x n]
    std::vector<double> accuracy;
    // i beats j at alpha: significant disagreement and higher accuracy
    std::vector<std::pair<std::size_t, std::size_t>> ranking_edges;

    const McNemarResult& at(std::size_t i, std::size_t j) const {
        return pairwise[i * names.size() + j];
    }
};

ModelComparison compare_all(const std::vector<TrainedModel>& models,
                            const LabeledMatrix& data, double alpha = 0.05);

void write_eval_csv(const std::vector<EvalReport>& train_reports,
                    const std::vector<EvalReport>& test_reports,
                    const std::string& path,
                    const std::string& header_comment = "");
void write_roc_csv(const RocCurve& curve, const std::string& path,
                   const std::string& header_comment = "");
void write_det_csv(const DetCurve& curve, const std::string& path,
                   const std::string& header_comment = "");
void write_mcnemar_csv(const ModelComparison& comparison,
                       const std::string& path,
                       const std::string& header_comment = "");

}  // namespace spoofdet
