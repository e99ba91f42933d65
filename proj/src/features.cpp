// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#include "spoofdet/features.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace spoofdet {

const std::vector<std::string>& canonical_feature_names() {
    static const std::vector<std::string> names = {
        "f0_mean_v",          "f0_std_v",
        "f0_range_v",         "f0_iqr_v",
        "f0_cv_v",            "f0_p10_v",
        "f0_p90_v",           "dur_s",
        "voice_pct",          "n_voiced_seg_per_s",
        "mean_voiced_seg_ms", "pause_ratio",
        "f0_slope_hz_per_s",  "jitter_local",
        "shimmer_local",      "rms_mean",
        "rms_std",            "rms_range",
        "rms_iqr",            "rms_cv",
        "spec_centroid_mean", "spec_centroid_std",
        "spec_centroid_iqr",  "spec_bandwidth_mean",
        "spec_bandwidth_std", "spec_bandwidth_iqr",
        "spec_rolloff_mean",  "spec_rolloff_std",
        "spec_rolloff_iqr",   "spec_contrast_mean",
        "spec_contrast_std",  "spec_contrast_iqr",
    };
    return names;
}

std::size_t feature_index(const std::string& name) {
    static const std::unordered_map<std::string, std::size_t> index = [] {
        std::unordered_map<std::string, std::size_t> m;
        const auto& names = canonical_feature_names();
        for (std::size_t i = 0; i < names.size(); ++i) m[names[i]] = i;
        return m;
    }();
    auto it = index.find(name);
    if (it == index.end())
        throw Error(ErrorCode::SchemaMismatch, "unknown feature " + name);
    return it->second;
}

FeatureVector make_empty_feature_vector() {
    FeatureVector v;
    v.values.assign(canonical_feature_names().size(), kMissing);
    return v;
}

double percentile(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n == 1) return values[0];
    double rank = p * static_cast<double>(n - 1);
    auto lo = static_cast<std::size_t>(std::floor(rank));
    auto hi = std::min(lo + 1, n - 1);
    double frac = rank - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

SummaryStats summarize(const std::vector<double>& values) {
    std::vector<double> v;
    v.reserve(values.size());
    for (double x : values)
        if (!is_missing(x)) v.push_back(x);
    if (v.empty())
        throw Error(ErrorCode::EmptySeries, "no non-missing values");

    SummaryStats s;
    const auto n = static_cast<double>(v.size());
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / n;

    auto [min_it, max_it] = std::minmax_element(v.begin(), v.end());
    s.range = *max_it - *min_it;
    s.p10 = percentile(v, 0.10);
    s.p90 = percentile(v, 0.90);
    s.iqr = percentile(v, 0.75) - percentile(v, 0.25);

    if (v.size() >= 2) {
        double ss = 0.0;
        for (double x : v) {
            double d = x - s.mean;
            ss += d * d;
        }
        s.stddev = std::sqrt(ss / n);
        if (std::abs(s.mean) >= 1e-12) s.cv = s.stddev / s.mean;
    }
    return s;
}

void prosodic_features(const PitchTrack& track, const VoicedSegments& segs,
                       double dur_s, FeatureVector& out) {
    if (dur_s <= 0.0)
        throw Error(ErrorCode::BadConfig, "nonpositive clip duration");

    out.at("dur_s") = dur_s;
    out.at("voice_pct") = segs.total_voiced_s / dur_s;
    out.at("n_voiced_seg_per_s") =
        static_cast<double>(segs.segments.size()) / dur_s;
    if (!segs.segments.empty()) {
        double total = 0.0;
        for (const auto& seg : segs.segments) total += seg.duration_s();
        out.at("mean_voiced_seg_ms") =
            1000.0 * total / static_cast<double>(segs.segments.size());
    }
    if (segs.total_voiced_s > 0.0)
        out.at("pause_ratio") = segs.total_unvoiced_s / segs.total_voiced_s;

    std::vector<double> f0;
    std::vector<double> t_s;
    const double hop_s = track.framing.hop_seconds();
    for (std::size_t t = 0; t < track.size(); ++t) {
        if (!track.voiced[t]) continue;
        f0.push_back(track.f0_hz[t]);
        t_s.push_back(static_cast<double>(t) * hop_s);
    }
    if (f0.empty()) return;

    SummaryStats s = summarize(f0);
    out.at("f0_mean_v") = s.mean;
    out.at("f0_std_v") = s.stddev;
    out.at("f0_range_v") = s.range;
    out.at("f0_iqr_v") = s.iqr;
    out.at("f0_cv_v") = s.cv;
    out.at("f0_p10_v") = s.p10;
    out.at("f0_p90_v") = s.p90;

    if (f0.size() >= 2) {
        double mean_t = 0.0, mean_f = 0.0;
        for (std::size_t i = 0; i < f0.size(); ++i) {
            mean_t += t_s[i];
            mean_f += f0[i];
        }
        mean_t /= static_cast<double>(f0.size());
        mean_f /= static_cast<double>(f0.size());
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < f0.size(); ++i) {
            double dt = t_s[i] - mean_t;
            sxx += dt * dt;
            sxy += dt * (f0[i] - mean_f);
        }
        if (sxx > 0.0) out.at("f0_slope_hz_per_s") = sxy / sxx;
    }
}

std::pair<double, double> voice_quality_features(const CycleMarks& marks) {
    const std::size_t n = marks.periods_s.size();
    if (n < 2)
        throw Error(ErrorCode::TooFewCycles, "need at least two cycles");

    auto boundary = [&](std::size_t i) {
        return std::find(marks.run_starts.begin(), marks.run_starts.end(),
                         i + 1) != marks.run_starts.end();
    };

    double period_sum = 0.0, amp_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        period_sum += marks.periods_s[i];
        amp_sum += marks.peak_amps[i];
    }
    const double mean_period = period_sum / static_cast<double>(n);
    const double mean_amp = amp_sum / static_cast<double>(n);

    double dp = 0.0, da = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (boundary(i)) continue;  // runs contribute independently
        dp += std::abs(marks.periods_s[i + 1] - marks.periods_s[i]);
        da += std::abs(marks.peak_amps[i + 1] - marks.peak_amps[i]);
        ++pairs;
    }
    if (pairs == 0)
        throw Error(ErrorCode::TooFewCycles, "no consecutive cycle pairs");

    double jitter = dp / static_cast<double>(pairs) / mean_period;
    double shimmer = da / static_cast<double>(pairs) / mean_amp;
    return {jitter, shimmer};
}

namespace {

void write_summary(FeatureVector& out, const std::string& prefix,
                   const FrameSeries& series, bool with_cv) {
    SummaryStats s;
    try {
        s = summarize(series.values);
    } catch (const Error&) {
        return;  // all frames missing; slots stay missing
    }
    out.at(prefix + "_mean") = s.mean;
    out.at(prefix + "_std") = s.stddev;
    out.at(prefix + "_iqr") = s.iqr;
    if (with_cv) {
        out.at(prefix + "_range") = s.range;
        out.at(prefix + "_cv") = s.cv;
    }
}

}  // namespace

void spectral_features(const FrameSeries& centroid,
                       const FrameSeries& bandwidth,
                       const FrameSeries& rolloff,
                       const FrameSeries& contrast, const FrameSeries& rms,
                       FeatureVector& out) {
    write_summary(out, "rms", rms, true);
    write_summary(out, "spec_centroid", centroid, false);
    write_summary(out, "spec_bandwidth", bandwidth, false);
    write_summary(out, "spec_rolloff", rolloff, false);
    write_summary(out, "spec_contrast", contrast, false);
}

FeatureVector extract_clip_features(const AudioClip& clip,
                                    const ExtractParams& params) {
    AudioClip trimmed = trim_silence(clip, params.trim_db, params.framing);

    FeatureVector out = make_empty_feature_vector();
    out.clip_ref = clip.source_path;
    out.label = clip.label;
    out.split = clip.split;

    Spectrogram spec = stft(trimmed, params.framing);
    FrameSeries rms = rms_track(trimmed, params.framing);
    FrameSeries centroid = spectral_centroid(spec);
    FrameSeries bandwidth = spectral_bandwidth(spec);
    FrameSeries rolloff = spectral_rolloff(spec, params.rolloff_pct);
    FrameSeries contrast =
        contrast_band_mean(spectral_contrast(spec, params.contrast_bands));
    spectral_features(centroid, bandwidth, rolloff, contrast, rms, out);

    PitchTrack track = yin_f0(trimmed, params.yin);
    VoicedSegments segs = segment_voicing(track, params.min_seg_ms);
    prosodic_features(track, segs, trimmed.duration_s(), out);

    // jitter/shimmer stay missing for clips without stable voicing
    try {
        CycleMarks marks = mark_cycles(trimmed, track, params.min_seg_ms);
        auto [jitter, shimmer] = voice_quality_features(marks);
        out.at("jitter_local") = jitter;
        out.at("shimmer_local") = shimmer;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoVoicedContent &&
            e.code() != ErrorCode::TooFewCycles)
            throw;
    }
    return out;
}

}  // namespace spoofdet
