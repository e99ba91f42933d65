// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#include "spoofdet/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "spoofdet/error.hpp"
#include "spoofdet/parallel.hpp"
#include "spoofdet/rng.hpp"

namespace spoofdet {

FoldPlan stratified_kfold(const std::vector<ClipLabel>& labels, int k,
                          std::uint64_t seed) {
    if (k < 2) throw Error(ErrorCode::BadConfig, "need at least two folds");

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignments.assign(labels.size(), -1);

    Rng rng(seed);
    for (ClipLabel label : {ClipLabel::Real, ClipLabel::Fake}) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) idx.push_back(i);
        if (idx.size() < static_cast<std::size_t>(k))
            throw Error(ErrorCode::ClassTooSmall,
                        std::string("class ") + label_name(label) +
                            " has fewer rows than folds");
        rng.shuffle(idx);
        for (std::size_t i = 0; i < idx.size(); ++i)
            plan.assignments[idx[i]] = static_cast<int>(i % k);
    }
    return plan;
}

GridSearchResult grid_search(const LabeledMatrix& data,
                             const std::vector<double>& c_values,
                             const std::vector<GammaSpec>& gamma_values,
                             const FoldPlan& plan, const SvmConfig& base,
                             unsigned n_threads) {
    if (c_values.empty() || gamma_values.empty())
        throw Error(ErrorCode::BadConfig, "empty hyperparameter grid");
    if (plan.assignments.size() != data.n_rows)
        throw Error(ErrorCode::LengthMismatch, "fold plan does not match data");

    GridSearchResult result;
    for (double c : c_values)
        for (const GammaSpec& gamma : gamma_values) {
            GridCell cell;
            cell.c = c;
            cell.gamma = gamma;
            cell.gamma_resolved =
                gamma.scale ? resolve_gamma_scale(data) : gamma.value;
            result.cells.push_back(cell);
        }

    std::vector<std::vector<std::size_t>> train_rows(plan.k), val_rows(plan.k);
    for (std::size_t r = 0; r < data.n_rows; ++r)
        for (int f = 0; f < plan.k; ++f)
            (plan.assignments[r] == f ? val_rows[f] : train_rows[f]).push_back(r);

    parallel_for(
        result.cells.size(),
        [&](std::size_t ci) {
            GridCell& cell = result.cells[ci];
            try {
                for (int f = 0; f < plan.k; ++f) {
                    LabeledMatrix fit = data.select_rows(train_rows[f]);
                    LabeledMatrix val = data.select_rows(val_rows[f]);
                    SvmConfig config = base;
                    config.c = cell.c;
                    config.gamma = cell.gamma;
                    TrainedModel model = train_svm(fit, config);
                    ScoreSet scores = predict_scores(model, val);
                    std::size_t correct = 0;
                    const auto preds = scores.predictions();
                    for (std::size_t i = 0; i < preds.size(); ++i)
                        if (preds[i] == val.labels[i]) ++correct;
                    cell.fold_accuracy.push_back(
                        static_cast<double>(correct) /
                        static_cast<double>(val.n_rows));
                }
                double acc = 0.0;
                for (double a : cell.fold_accuracy) acc += a;
                cell.mean_accuracy =
                    acc / static_cast<double>(cell.fold_accuracy.size());
            } catch (const Error& e) {
                cell.failed = true;
                cell.failure = e.what();
            }
        },
        n_threads);

    bool found = false;
    for (std::size_t i = 0; i < result.cells.size(); ++i) {
        const GridCell& cell = result.cells[i];
        if (cell.failed) continue;
        if (!found) {
            result.best_index = i;
            found = true;
            continue;
        }
        const GridCell& best = result.cells[result.best_index];
        const auto key = [](const GridCell& g) {
            return std::make_tuple(-g.mean_accuracy, g.c, g.gamma_resolved);
        };
        if (key(cell) < key(best)) result.best_index = i;
    }
    if (!found)
        throw Error(ErrorCode::TrainingFailed,
                    "every grid cell failed to train");
    return result;
}

void write_grid_csv(const GridSearchResult& result, const std::string& path,
                    const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    out << "c,gamma,gamma_resolved,mean_val_accuracy,status,best\n";
    char buf[160];
    for (std::size_t i = 0; i < result.cells.size(); ++i) {
        const GridCell& cell = result.cells[i];
        std::snprintf(buf, sizeof(buf), "%g,%s,%.10g,%.10g,%s,%d\n", cell.c,
                      cell.gamma.to_string().c_str(), cell.gamma_resolved,
                      cell.failed ? 0.0 : cell.mean_accuracy,
                      cell.failed ? "failed" : "ok",
                      i == result.best_index ? 1 : 0);
        out << buf;
    }
}

}  // namespace spoofdet
