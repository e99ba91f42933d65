// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spoofdet/features.hpp"

namespace spoofdet {

// Rows share one schema; a column dropped by cleaning disappears from
// `names` for every row at once.
struct FeatureTable {
    std::vector<std::string> names;
    std::vector<FeatureVector> rows;  // values indexed like `names`

    std::size_t n_features() const { return names.size(); }
    std::vector<std::size_t> split_rows(SplitTag split) const;
    std::vector<std::size_t> class_rows(ClipLabel label,
                                        std::optional<SplitTag> split = {}) const;
};

FeatureTable make_feature_table(std::vector<FeatureVector> rows);

// CSV header `clip,label,split,<feature names>`; missing cells are empty.
// header_comment, when nonempty, is written first as `# <comment>`.
void write_feature_csv(const FeatureTable& table, const std::string& path,
                       const std::string& header_comment = "");

// Returns the table plus the comment line (without "# ") if one was present.
FeatureTable read_feature_csv(const std::string& path,
                              std::string* comment_out = nullptr);

}  // namespace spoofdet
