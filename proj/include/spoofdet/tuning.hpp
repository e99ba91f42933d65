// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spoofdet/models.hpp"

namespace spoofdet {

struct FoldPlan {
    int k = 3;
    std::vector<int> assignments;  // per-row fold index
    std::uint64_t seed = 0;
};

// Deterministic stratified assignment: per-fold class counts differ from
// exact proportionality by at most one. Throws ClassTooSmall.
FoldPlan stratified_kfold(const std::vector<ClipLabel>& labels, int k,
                          std::uint64_t seed);

struct GridCell {
    double c;
    GammaSpec gamma;
    double gamma_resolved = 0.0;  // on the full training matrix
    std::vector<double> fold_accuracy;
    double mean_accuracy = 0.0;
    bool failed = false;
    std::string failure;
};

struct GridSearchResult {
    std::vector<GridCell> cells;
    std::size_t best_index = 0;

    const GridCell& best() const { return cells[best_index]; }
};

// Mean validation accuracy per (C, gamma) cell under the fold plan; best
// cell by accuracy with ties broken by smaller C, then smaller resolved
// gamma. Failed cells are kept in the table but excluded from the argmax.
GridSearchResult grid_search(const LabeledMatrix& data,
                             const std::vector<double>& c_values,
                             const std::vector<GammaSpec>& gamma_values,
                             const FoldPlan& plan, const SvmConfig& base,
                             unsigned n_threads = 1);

void write_grid_csv(const GridSearchResult& result, const std::string& path,
                    const std::string& header_comment = "");

}  // namespace spoofdet
