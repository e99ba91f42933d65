// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <doctest.h>

#include "spoofdet/rng.hpp"
#include "spoofdet/select.hpp"
#include "spoofdet/special.hpp"
#include "support/oracles.hpp"
#include "support/synth.hpp"

using namespace spoofdet;

namespace {

// tiny tables with a custom schema, independent of the canonical 32
FeatureTable tiny_table(std::vector<std::string> names,
                        const std::vector<std::vector<double>>& train_real,
                        const std::vector<std::vector<double>>& train_fake,
                        const std::vector<std::vector<double>>& test_rows = {}) {
    FeatureTable table;
    table.names = std::move(names);
    int id = 0;
    auto add = [&](const std::vector<double>& values, ClipLabel label,
                   SplitTag split) {
        FeatureVector row;
        row.values = values;
        row.label = label;
        row.split = split;
        row.clip_ref = "row" + std::to_string(id++);
        table.rows.push_back(std::move(row));
    };
    for (const auto& v : train_real) add(v, ClipLabel::Real, SplitTag::Train);
    for (const auto& v : train_fake) add(v, ClipLabel::Fake, SplitTag::Train);
    for (std::size_t i = 0; i < test_rows.size(); ++i)
        add(test_rows[i], i % 2 ? ClipLabel::Fake : ClipLabel::Real,
            SplitTag::Test);
    return table;
}

}  // namespace

TEST_CASE("clean replaces infinities and drops dead columns") {
    const double inf = std::numeric_limits<double>::infinity();
    SUBCASE("single infinity becomes missing, schema unchanged") {
        FeatureTable t = tiny_table({"a", "b"}, {{1.0, inf}, {2.0, 3.0}},
                                    {{0.5, 1.5}, {0.6, 1.6}});
        CleanReport report;
        FeatureTable out = clean(t, &report);
        CHECK(out.names == t.names);
        CHECK(report.infinities_replaced == 1);
        CHECK(is_missing(out.rows[0].values[1]));
        CHECK(out.rows[1].values[1] == 3.0);
    }
    SUBCASE("all-missing training column is dropped and reported") {
        FeatureTable t = tiny_table({"a", "dead", "c"},
                                    {{1.0, kMissing, 2.0}, {1.1, kMissing, 2.1}},
                                    {{0.9, kMissing, 1.9}, {0.8, kMissing, 1.8}});
        CleanReport report;
        FeatureTable out = clean(t, &report);
        REQUIRE(out.names == std::vector<std::string>{"a", "c"});
        REQUIRE(report.dropped == std::vector<std::string>{"dead"});
        for (const auto& row : out.rows) REQUIRE(row.values.size() == 2);
    }
    SUBCASE("clean table passes through unchanged") {
        FeatureTable t = tiny_table({"a"}, {{1.0}, {2.0}}, {{3.0}, {4.0}});
        FeatureTable out = clean(t);
        CHECK(out.names == t.names);
        for (std::size_t r = 0; r < t.rows.size(); ++r)
            CHECK(out.rows[r].values == t.rows[r].values);
    }
    SUBCASE("everything missing fails") {
        FeatureTable t = tiny_table({"a"}, {{kMissing}, {kMissing}},
                                    {{kMissing}, {kMissing}});
        CHECK_THROWS_AS(clean(t), Error);
    }
}

TEST_CASE("anova basics") {
    SUBCASE("identical groups") {
        auto [f, p] = anova_oneway({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0});
        CHECK(f == 0.0);
        CHECK(p == 1.0);
    }
    SUBCASE("well separated groups") {
        std::vector<double> lo, hi;
        Rng rng(83);
        for (int i = 0; i < 20; ++i) {
            lo.push_back(rng.uniform(0.0, 1.0));
            hi.push_back(rng.uniform(10.0, 11.0));
        }
        auto [f, p] = anova_oneway(lo, hi);
        CHECK(f > 100.0);
        CHECK(p < 1e-6);
    }
    SUBCASE("degenerate groups") {
        auto [f_eq, p_eq] = anova_oneway({2.0, 2.0}, {2.0, 2.0});
        CHECK(f_eq == 0.0);
        CHECK(p_eq == 1.0);
        auto [f_ne, p_ne] = anova_oneway({2.0, 2.0}, {3.0, 3.0});
        CHECK(std::isinf(f_ne));
        CHECK(p_ne == 0.0);
    }
}

TEST_CASE("anova F equals the squared pooled t statistic") {
    Rng rng(89);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> a, b;
        const int n1 = 2 + static_cast<int>(rng.uniform() * 30);
        const int n2 = 2 + static_cast<int>(rng.uniform() * 30);
        const double shift = rng.uniform(-1.0, 1.0);
        for (int i = 0; i < n1; ++i) a.push_back(rng.normal());
        for (int i = 0; i < n2; ++i) b.push_back(rng.normal() + shift);
        auto [f, p] = anova_oneway(a, b);
        const double t2 = oracles::pooled_t_squared(a, b);
        REQUIRE(std::abs(f - t2) <= 1e-10 * std::max(1.0, std::abs(t2)));
        REQUIRE(p >= 0.0);
        REQUIRE(p <= 1.0);
    }
}

TEST_CASE("anova p-value matches the F(1,10) 95th percentile") {
    // classic table anchor: F(1, 10) upper 5% point is 4.9646
    const double p = f_distribution_sf(4.964603, 1.0, 10.0);
    CHECK(p == doctest::Approx(0.05).epsilon(1e-4));
}

TEST_CASE("anova is invariant under affine feature maps") {
    Rng rng(97);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> a, b, a2, b2;
        const double scale = rng.uniform(0.1, 10.0);
        const double shift = rng.uniform(-5.0, 5.0);
        for (int i = 0; i < 15; ++i) {
            a.push_back(rng.normal());
            b.push_back(rng.normal() + 0.4);
        }
        for (double v : a) a2.push_back(scale * v + shift);
        for (double v : b) b2.push_back(scale * v + shift);
        auto [f1, p1] = anova_oneway(a, b);
        auto [f2, p2] = anova_oneway(a2, b2);
        REQUIRE(std::abs(f1 - f2) <= 1e-10 * std::max(1.0, std::abs(f1)));
        REQUIRE(std::abs(p1 - p2) <= 1e-10);
    }
}

TEST_CASE("select_features keeps signal and drops noise") {
    Rng rng(101);
    std::vector<std::vector<double>> real_rows, fake_rows;
    for (int i = 0; i < 40; ++i) {
        // col0: constant across classes; col1: label + noise
        real_rows.push_back({3.0, 0.0 + 0.1 * rng.normal()});
        fake_rows.push_back({3.0, 1.0 + 0.1 * rng.normal()});
    }
    FeatureTable t = tiny_table({"flat", "signal"}, real_rows, fake_rows);
    AnovaReport report = select_features(t, 0.05);
    REQUIRE(report.rows.size() == 2);
    CHECK_FALSE(report.rows[0].kept);
    CHECK(report.rows[1].kept);
    CHECK(report.rows[1].p_value < 1e-10);
    CHECK(report.kept_names() == std::vector<std::string>{"signal"});
}

TEST_CASE("selection ignores test rows entirely") {
    Rng rng(103);
    std::vector<std::vector<double>> real_rows, fake_rows, test_a, test_b;
    for (int i = 0; i < 20; ++i) {
        real_rows.push_back({rng.normal()});
        fake_rows.push_back({rng.normal() + 2.0});
        test_a.push_back({rng.uniform(-100.0, 100.0)});
        test_b.push_back({rng.uniform(-100.0, 100.0)});
    }
    FeatureTable t1 = tiny_table({"x"}, real_rows, fake_rows, test_a);
    FeatureTable t2 = tiny_table({"x"}, real_rows, fake_rows, test_b);
    AnovaReport r1 = select_features(t1);
    AnovaReport r2 = select_features(t2);
    REQUIRE(r1.rows[0].f_statistic == r2.rows[0].f_statistic);
    REQUIRE(r1.rows[0].p_value == r2.rows[0].p_value);
}

TEST_CASE("no surviving feature is an error") {
    FeatureTable t = tiny_table({"flat"}, {{1.0}, {1.0}, {1.0}},
                                {{1.0}, {1.0}, {1.0}});
    CHECK_THROWS_AS(select_features(t), Error);
}

TEST_CASE("preprocessor z-scores the training split") {
    Rng rng(107);
    std::vector<std::vector<double>> real_rows, fake_rows;
    for (int i = 0; i < 25; ++i) {
        real_rows.push_back({rng.uniform(5.0, 9.0), rng.normal(100.0, 20.0)});
        fake_rows.push_back({rng.uniform(6.0, 10.0), rng.normal(90.0, 15.0)});
    }
    FeatureTable t = tiny_table({"a", "b"}, real_rows, fake_rows);
    Preprocessor pre = Preprocessor::fit(t, {"a", "b"});
    LabeledMatrix m = pre.apply(t, SplitTag::Train);
    REQUIRE(m.n_rows == 50);
    REQUIRE(m.n_cols == 2);
    for (std::size_t c = 0; c < 2; ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < m.n_rows; ++r) mean += m.at(r, c);
        mean /= static_cast<double>(m.n_rows);
        double var = 0.0;
        for (std::size_t r = 0; r < m.n_rows; ++r)
            var += (m.at(r, c) - mean) * (m.at(r, c) - mean);
        var /= static_cast<double>(m.n_rows);
        REQUIRE(std::abs(mean) < 1e-9);
        REQUIRE(std::abs(var - 1.0) < 1e-9);
    }
}

TEST_CASE("preprocessor imputes test cells with the train median") {
    FeatureTable t = tiny_table(
        {"a"}, {{1.0}, {2.0}, {3.0}}, {{4.0}, {5.0}}, {{kMissing}});
    Preprocessor pre = Preprocessor::fit(t, {"a"});
    REQUIRE(pre.medians()[0] == 3.0);
    LabeledMatrix test = pre.apply(t, SplitTag::Test);
    REQUIRE(test.n_rows == 1);
    const double expected = (3.0 - pre.means()[0]) / pre.stds()[0];
    REQUIRE(test.at(0, 0) == expected);
}

TEST_CASE("constant training column scales to zero, never infinity") {
    FeatureTable t =
        tiny_table({"c"}, {{7.0}, {7.0}, {7.0}}, {{7.0}, {7.0}});
    Preprocessor pre = Preprocessor::fit(t, {"c"});
    LabeledMatrix m = pre.apply(t, SplitTag::Train);
    for (std::size_t r = 0; r < m.n_rows; ++r) {
        REQUIRE(m.at(r, 0) == 0.0);
        REQUIRE(std::isfinite(m.at(r, 0)));
    }
}

TEST_CASE("unfitted preprocessor refuses to apply") {
    Preprocessor pre;
    FeatureTable t = tiny_table({"a"}, {{1.0}, {2.0}}, {{3.0}, {4.0}});
    CHECK_THROWS_AS(pre.apply(t, SplitTag::Train), Error);
}

TEST_CASE("preprocessor persists and reloads") {
    FeatureTable t = tiny_table({"a", "b"}, {{1.0, 10.0}, {2.0, 20.0}},
                                {{3.0, 30.0}, {4.0, 40.0}});
    Preprocessor pre = Preprocessor::fit(t, {"a", "b"});
    const std::string path = "/tmp/spoofdet_pre_test.csv";
    pre.save(path, "hashvalue");
    std::string comment;
    Preprocessor back = Preprocessor::load(path, &comment);
    CHECK(comment == "hashvalue");
    REQUIRE(back.feature_names() == pre.feature_names());
    LabeledMatrix a = pre.apply(t, SplitTag::Train);
    LabeledMatrix b = back.apply(t, SplitTag::Train);
    REQUIRE(a.x == b.x);
    REQUIRE(a.schema_fingerprint == b.schema_fingerprint);
}

TEST_CASE("correlation matrix properties") {
    Rng rng(109);
    std::vector<std::vector<double>> real_rows, fake_rows;
    for (int i = 0; i < 30; ++i) {
        const double x = rng.normal();
        real_rows.push_back({x, -x, rng.normal(), 5.0});
        fake_rows.push_back(
            {rng.normal(), rng.normal(), rng.normal(), rng.normal()});
    }
    FeatureTable t =
        tiny_table({"x", "negx", "noise", "const"}, real_rows, fake_rows);
    CorrelationMatrix cm =
        correlation_matrix(t, ClipLabel::Real, {"x", "negx", "noise", "const"});

    const std::size_t d = 4;
    for (std::size_t i = 0; i < d; ++i) REQUIRE(cm.at(i, i) == 1.0);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            REQUIRE(std::abs(cm.at(i, j) - cm.at(j, i)) <= 1e-12);
            REQUIRE(std::abs(cm.at(i, j)) <= 1.0);
        }
    CHECK(cm.at(0, 1) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::abs(cm.at(0, 2)) < 0.5);
    // constant column flagged and zeroed off-diagonal
    REQUIRE(cm.constant_features == std::vector<std::string>{"const"});
    CHECK(cm.at(0, 3) == 0.0);
}

TEST_CASE("correlation needs three rows of the class") {
    FeatureTable t = tiny_table({"a"}, {{1.0}, {2.0}}, {{3.0}, {4.0}, {5.0}});
    CHECK_THROWS_AS(correlation_matrix(t, ClipLabel::Real, {"a"}), Error);
    CHECK_NOTHROW(correlation_matrix(t, ClipLabel::Fake, {"a"}));
}

TEST_CASE("centroid and rolloff correlate on broadband voices") {
    // clips whose lowpass cutoff varies drive both descriptors together
    Rng rng(113);
    std::vector<FeatureVector> rows;
    for (int i = 0; i < 24; ++i) {
        synth::VoiceSpec spec;
        spec.base_f0 = rng.uniform(110.0, 230.0);
        spec.vibrato_depth = 0.04;
        spec.harmonic_cutoff_hz = rng.uniform(1500.0, 7400.0);
        spec.noise_amp = rng.uniform(0.004, 0.03);
        spec.amplitude = 0.3;
        AudioClip clip = synth::make_clip(
            synth::synth_voice(spec, 16000, 1.0, rng), 16000);
        clip.source_path = "c" + std::to_string(i);
        clip.label = ClipLabel::Real;
        clip.split = SplitTag::Train;
        FeatureVector row = extract_clip_features(clip);
        rows.push_back(std::move(row));
    }
    FeatureTable table = make_feature_table(std::move(rows));
    CorrelationMatrix cm = correlation_matrix(
        table, ClipLabel::Real, {"spec_centroid_mean", "spec_rolloff_mean"});
    CHECK(cm.at(0, 1) > 0.5);
}
