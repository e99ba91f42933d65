// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#include "spoofdet/select.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "spoofdet/special.hpp"

namespace spoofdet {

namespace {

std::vector<std::size_t> name_indices(const FeatureTable& table,
                                      const std::vector<std::string>& names) {
    std::vector<std::size_t> idx;
    idx.reserve(names.size());
    for (const auto& name : names) {
        auto it = std::find(table.names.begin(), table.names.end(), name);
        if (it == table.names.end())
            throw Error(ErrorCode::SchemaMismatch,
                        "feature " + name + " not in table");
        idx.push_back(static_cast<std::size_t>(it - table.names.begin()));
    }
    return idx;
}

double median_of(std::vector<double> v) { return percentile(std::move(v), 0.5); }

}  // namespace

FeatureTable clean(const FeatureTable& table, CleanReport* report) {
    FeatureTable out = table;
    CleanReport local;

    for (auto& row : out.rows)
        for (double& v : row.values)
            if (std::isinf(v)) {
                v = kMissing;
                ++local.infinities_replaced;
            }

    const auto train = out.split_rows(SplitTag::Train);
    std::vector<bool> keep(out.names.size(), false);
    for (std::size_t c = 0; c < out.names.size(); ++c)
        for (std::size_t r : train)
            if (!is_missing(out.rows[r].values[c])) {
                keep[c] = true;
                break;
            }

    if (std::none_of(keep.begin(), keep.end(), [](bool k) { return k; }))
        throw Error(ErrorCode::AllFeaturesDropped,
                    "every column is missing on the training rows");

    if (std::find(keep.begin(), keep.end(), false) != keep.end()) {
        std::vector<std::string> names;
        for (std::size_t c = 0; c < out.names.size(); ++c) {
            if (keep[c])
                names.push_back(out.names[c]);
            else
                local.dropped.push_back(out.names[c]);
        }
        for (auto& row : out.rows) {
            std::vector<double> values;
            values.reserve(names.size());
            for (std::size_t c = 0; c < out.names.size(); ++c)
                if (keep[c]) values.push_back(row.values[c]);
            row.values = std::move(values);
        }
        out.names = std::move(names);
    }

    if (report) *report = std::move(local);
    return out;
}

std::pair<double, double> anova_oneway(const std::vector<double>& values_real,
                                       const std::vector<double>& values_fake) {
    const auto n1 = static_cast<double>(values_real.size());
    const auto n2 = static_cast<double>(values_fake.size());
    if (values_real.size() < 2 || values_fake.size() < 2)
        throw Error(ErrorCode::ClassTooSmall,
                    "each group needs at least two values");

    double m1 = 0.0, m2 = 0.0;
    for (double v : values_real) m1 += v;
    for (double v : values_fake) m2 += v;
    m1 /= n1;
    m2 /= n2;
    const double grand = (n1 * m1 + n2 * m2) / (n1 + n2);

    double ss_within = 0.0;
    for (double v : values_real) ss_within += (v - m1) * (v - m1);
    for (double v : values_fake) ss_within += (v - m2) * (v - m2);
    const double ss_between =
        n1 * (m1 - grand) * (m1 - grand) + n2 * (m2 - grand) * (m2 - grand);

    const double df_within = n1 + n2 - 2.0;
    if (ss_within <= 0.0) {
        if (ss_between <= 0.0) return {0.0, 1.0};
        return {std::numeric_limits<double>::infinity(), 0.0};
    }
    const double f = ss_between / (ss_within / df_within);
    return {f, f_distribution_sf(f, 1.0, df_within)};
}

std::vector<std::string> AnovaReport::kept_names() const {
    std::vector<std::string> names;
    for (const auto& row : rows)
        if (row.kept) names.push_back(row.feature);
    return names;
}

AnovaReport select_features(const FeatureTable& table, double alpha) {
    AnovaReport report;
    report.alpha = alpha;
    const auto train_real = table.class_rows(ClipLabel::Real, SplitTag::Train);
    const auto train_fake = table.class_rows(ClipLabel::Fake, SplitTag::Train);
    if (train_real.empty() || train_fake.empty())
        throw Error(ErrorCode::SingleClass,
                    "both labels required on the training split");

    for (std::size_t c = 0; c < table.names.size(); ++c) {
        std::vector<double> real, fake;
        for (std::size_t r : train_real) {
            double v = table.rows[r].values[c];
            if (!is_missing(v)) real.push_back(v);
        }
        for (std::size_t r : train_fake) {
            double v = table.rows[r].values[c];
            if (!is_missing(v)) fake.push_back(v);
        }

        AnovaRow row;
        row.feature = table.names[c];
        if (real.size() < 2 || fake.size() < 2) {
            row.f_statistic = kMissing;
            row.p_value = kMissing;
            row.kept = false;
            row.mean_real = kMissing;
            row.mean_fake = kMissing;
        } else {
            auto [f, p] = anova_oneway(real, fake);
            row.f_statistic = f;
            row.p_value = p;
            row.kept = p < alpha;
            double s = 0.0;
            for (double v : real) s += v;
            row.mean_real = s / static_cast<double>(real.size());
            s = 0.0;
            for (double v : fake) s += v;
            row.mean_fake = s / static_cast<double>(fake.size());
        }
        report.rows.push_back(std::move(row));
    }

    if (report.kept_names().empty())
        throw Error(ErrorCode::NoFeatureSurvives,
                    "no feature passed the ANOVA screen");
    return report;
}

void write_anova_csv(const AnovaReport& report, const std::string& path,
                     const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    out << "feature,F,p,kept\n";
    char buf[96];
    for (const auto& row : report.rows) {
        if (is_missing(row.f_statistic))
            std::snprintf(buf, sizeof(buf), ",,%d", row.kept ? 1 : 0);
        else
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d", row.f_statistic,
                          row.p_value, row.kept ? 1 : 0);
        out << row.feature << ',' << buf << '\n';
    }
}

Preprocessor Preprocessor::fit(const FeatureTable& table,
                               const std::vector<std::string>& kept) {
    const auto idx = name_indices(table, kept);
    const auto train = table.split_rows(SplitTag::Train);
    if (train.empty())
        throw Error(ErrorCode::ClassTooSmall, "no training rows to fit on");

    Preprocessor pre;
    pre.names_ = kept;
    pre.median_.resize(kept.size());
    pre.mean_.resize(kept.size());
    pre.std_.resize(kept.size());

    for (std::size_t c = 0; c < idx.size(); ++c) {
        std::vector<double> values;
        for (std::size_t r : train) {
            double v = table.rows[r].values[idx[c]];
            if (!is_missing(v)) values.push_back(v);
        }
        if (values.empty())
            throw Error(ErrorCode::EmptySeries,
                        "feature " + kept[c] + " missing in every train row");
        pre.median_[c] = median_of(values);

        // post-imputation moments: missing cells count as the median
        double sum = 0.0;
        for (std::size_t r : train) {
            double v = table.rows[r].values[idx[c]];
            sum += is_missing(v) ? pre.median_[c] : v;
        }
        const auto n = static_cast<double>(train.size());
        pre.mean_[c] = sum / n;
        double ss = 0.0;
        for (std::size_t r : train) {
            double v = table.rows[r].values[idx[c]];
            if (is_missing(v)) v = pre.median_[c];
            ss += (v - pre.mean_[c]) * (v - pre.mean_[c]);
        }
        pre.std_[c] = std::max(std::sqrt(ss / n), 1e-12);
    }
    pre.fitted_ = true;
    return pre;
}

LabeledMatrix Preprocessor::apply_rows(
    const FeatureTable& table, const std::vector<std::size_t>& row_idx) const {
    if (!fitted_) throw Error(ErrorCode::NotFitted, "preprocessor not fitted");
    const auto idx = name_indices(table, names_);

    LabeledMatrix m;
    m.n_rows = row_idx.size();
    m.n_cols = names_.size();
    m.schema_fingerprint = schema_fingerprint();
    m.x.resize(m.n_rows * m.n_cols);
    m.labels.reserve(m.n_rows);
    m.clip_refs.reserve(m.n_rows);
    for (std::size_t i = 0; i < row_idx.size(); ++i) {
        const FeatureVector& row = table.rows[row_idx[i]];
        m.labels.push_back(row.label);
        m.clip_refs.push_back(row.clip_ref);
        for (std::size_t c = 0; c < idx.size(); ++c) {
            double v = row.values[idx[c]];
            if (is_missing(v)) v = median_[c];
            m.x[i * m.n_cols + c] = (v - mean_[c]) / std_[c];
        }
    }
    return m;
}

LabeledMatrix Preprocessor::apply(const FeatureTable& table,
                                  SplitTag split) const {
    return apply_rows(table, table.split_rows(split));
}

std::uint64_t Preprocessor::schema_fingerprint() const {
    return schema_fingerprint_of(names_);
}

std::uint64_t schema_fingerprint_of(const std::vector<std::string>& names) {
    std::string joined;
    for (const auto& name : names) {
        joined += name;
        joined += '\n';
    }
    return fnv1a64(joined);
}

void Preprocessor::save(const std::string& path,
                        const std::string& header_comment) const {
    if (!fitted_) throw Error(ErrorCode::NotFitted, "preprocessor not fitted");
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    out << "feature,median,mean,std\n";
    char buf[160];
    for (std::size_t c = 0; c < names_.size(); ++c) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g\n",
                      names_[c].c_str(), median_[c], mean_[c], std_[c]);
        out << buf;
    }
}

Preprocessor Preprocessor::load(const std::string& path,
                                std::string* comment_out) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    Preprocessor pre;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (comment_out && !header_seen)
                *comment_out = line.size() > 2 ? line.substr(2) : "";
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        std::stringstream ss(line);
        std::string name, med, mean, std_s;
        std::getline(ss, name, ',');
        std::getline(ss, med, ',');
        std::getline(ss, mean, ',');
        std::getline(ss, std_s, ',');
        pre.names_.push_back(name);
        pre.median_.push_back(std::strtod(med.c_str(), nullptr));
        pre.mean_.push_back(std::strtod(mean.c_str(), nullptr));
        pre.std_.push_back(std::strtod(std_s.c_str(), nullptr));
    }
    if (pre.names_.empty())
        throw Error(ErrorCode::IoError, "empty preprocessor file " + path);
    pre.fitted_ = true;
    return pre;
}

CorrelationMatrix correlation_matrix(const FeatureTable& table,
                                     ClipLabel label,
                                     const std::vector<std::string>& features) {
    const auto rows = table.class_rows(label);
    if (rows.size() < 3)
        throw Error(ErrorCode::TooFewRows,
                    "need at least three rows of the class");
    const auto idx = name_indices(table, features);
    const std::size_t d = features.size();

    CorrelationMatrix cm;
    cm.names = features;
    cm.label = label;
    cm.r.assign(d * d, 0.0);

    std::vector<bool> constant(d, false);
    for (std::size_t a = 0; a < d; ++a) {
        double first = kMissing;
        bool varies = false;
        for (std::size_t r : rows) {
            double v = table.rows[r].values[idx[a]];
            if (is_missing(v)) continue;
            if (is_missing(first))
                first = v;
            else if (v != first)
                varies = true;
        }
        constant[a] = !varies;
        if (constant[a]) cm.constant_features.push_back(features[a]);
    }

    for (std::size_t a = 0; a < d; ++a) {
        cm.r[a * d + a] = 1.0;
        for (std::size_t b = a + 1; b < d; ++b) {
            if (constant[a] || constant[b]) continue;  // leave r = 0, flagged
            // pairwise-complete observations
            double sx = 0.0, sy = 0.0;
            std::size_t n = 0;
            for (std::size_t r : rows) {
                double x = table.rows[r].values[idx[a]];
                double y = table.rows[r].values[idx[b]];
                if (is_missing(x) || is_missing(y)) continue;
                sx += x;
                sy += y;
                ++n;
            }
            if (n < 3) continue;
            const double mx = sx / static_cast<double>(n);
            const double my = sy / static_cast<double>(n);
            double sxx = 0.0, syy = 0.0, sxy = 0.0;
            for (std::size_t r : rows) {
                double x = table.rows[r].values[idx[a]];
                double y = table.rows[r].values[idx[b]];
                if (is_missing(x) || is_missing(y)) continue;
                sxy += (x - mx) * (y - my);
                sxx += (x - mx) * (x - mx);
                syy += (y - my) * (y - my);
            }
            if (sxx <= 0.0 || syy <= 0.0) continue;
            double r_ab = sxy / std::sqrt(sxx * syy);
            r_ab = std::clamp(r_ab, -1.0, 1.0);
            cm.r[a * d + b] = r_ab;
            cm.r[b * d + a] = r_ab;
        }
    }
    return cm;
}

void write_correlation_csv(const CorrelationMatrix& matrix,
                           const std::string& path,
                           const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    out << "feature";
    for (const auto& name : matrix.names) out << ',' << name;
    out << '\n';
    char buf[64];
    const std::size_t d = matrix.names.size();
    for (std::size_t a = 0; a < d; ++a) {
        out << matrix.names[a];
        for (std::size_t b = 0; b < d; ++b) {
            std::snprintf(buf, sizeof(buf), ",%.10g", matrix.at(a, b));
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace spoofdet
