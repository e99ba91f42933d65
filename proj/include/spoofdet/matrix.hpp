// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spoofdet/audio.hpp"

namespace spoofdet {

// Standardized, fully-imputed model input. The fingerprint identifies the
// kept-feature schema the values were produced under.
struct LabeledMatrix {
    std::vector<double> x;  // row-major [n_rows x n_cols]
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<ClipLabel> labels;
    std::vector<std::string> clip_refs;
    std::uint64_t schema_fingerprint = 0;

    double at(std::size_t r, std::size_t c) const { return x[r * n_cols + c]; }
    const double* row(std::size_t r) const { return x.data() + r * n_cols; }

    LabeledMatrix select_rows(const std::vector<std::size_t>& idx) const {
        LabeledMatrix out;
        out.n_rows = idx.size();
        out.n_cols = n_cols;
        out.schema_fingerprint = schema_fingerprint;
        out.x.reserve(idx.size() * n_cols);
        for (std::size_t r : idx) {
            out.x.insert(out.x.end(), row(r), row(r) + n_cols);
            out.labels.push_back(labels[r]);
            if (!clip_refs.empty()) out.clip_refs.push_back(clip_refs[r]);
        }
        return out;
    }
};

}  // namespace spoofdet
