// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "spoofdet/matrix.hpp"
#include "spoofdet/table.hpp"

namespace spoofdet {

struct CleanReport {
    std::vector<std::string> dropped;  // columns missing in every train row
    std::size_t infinities_replaced = 0;
};

// Replaces non-finite cells with missing and drops columns that have no
// value in any training row. Throws AllFeaturesDropped.
FeatureTable clean(const FeatureTable& table, CleanReport* report = nullptr);

// One-way F test for two groups; p from the F(1, N-2) upper tail.
// Zero within-group variance: equal means give (0, 1), unequal give
// (+inf, 0).
std::pair<double, double> anova_oneway(const std::vector<double>& values_real,
                                       const std::vector<double>& values_fake);

struct AnovaRow {
    std::string feature;
    double f_statistic;
    double p_value;
    bool kept;
    double mean_real;
    double mean_fake;
};

struct AnovaReport {
    std::vector<AnovaRow> rows;
    double alpha;
    std::vector<std::string> kept_names() const;
};

// Keep feature iff p < alpha on training rows (missing values excluded per
// feature; a feature without two values per class is dropped). Throws
// NoFeatureSurvives.
AnovaReport select_features(const FeatureTable& table, double alpha = 0.05);

void write_anova_csv(const AnovaReport& report, const std::string& path,
                     const std::string& header_comment = "");

// Training-set medians for imputation and mean/std for z-scoring, fitted
// once over the kept columns and frozen. apply() consumes an unscaled
// FeatureTable and produces the model-ready matrix, so a table can never
// be scaled twice.
class Preprocessor {
public:
    Preprocessor() = default;

    static Preprocessor fit(const FeatureTable& table,
                            const std::vector<std::string>& kept);

    LabeledMatrix apply(const FeatureTable& table, SplitTag split) const;
    LabeledMatrix apply_rows(const FeatureTable& table,
                             const std::vector<std::size_t>& row_idx) const;

    bool fitted() const { return fitted_; }
    const std::vector<std::string>& feature_names() const { return names_; }
    std::uint64_t schema_fingerprint() const;
    const std::vector<double>& medians() const { return median_; }
    const std::vector<double>& means() const { return mean_; }
    const std::vector<double>& stds() const { return std_; }

    void save(const std::string& path,
              const std::string& header_comment = "") const;
    static Preprocessor load(const std::string& path,
                             std::string* comment_out = nullptr);

private:
    std::vector<std::string> names_;
    std::vector<double> median_;
    std::vector<double> mean_;
    std::vector<double> std_;
    bool fitted_ = false;
};

std::uint64_t schema_fingerprint_of(const std::vector<std::string>& names);

struct CorrelationMatrix {
    std::vector<std::string> names;
    std::vector<double> r;  // row-major, symmetric, unit diagonal
    ClipLabel label;
    std::vector<std::string> constant_features;  // flagged, r set to 0

    double at(std::size_t i, std::size_t j) const {
        return r[i * names.size() + j];
    }
};

// Pearson r per feature pair over rows of one class, pairwise-complete.
// Throws TooFewRows below three rows.
CorrelationMatrix correlation_matrix(const FeatureTable& table,
                                     ClipLabel label,
                                     const std::vector<std::string>& features);

void write_correlation_csv(const CorrelationMatrix& matrix,
                           const std::string& path,
                           const std::string& header_comment = "");

}  // namespace spoofdet
