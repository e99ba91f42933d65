// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "spoofdet/audio.hpp"
#include "spoofdet/dsp.hpp"
#include "spoofdet/pitch.hpp"

namespace spoofdet {

// The fixed clip-level schema. Order is part of the contract: feature
// tables, masks, and model fingerprints all index into it.
const std::vector<std::string>& canonical_feature_names();
std::size_t feature_index(const std::string& name);

struct FeatureVector {
    std::vector<double> values;  // one slot per schema name, NaN = missing
    std::string clip_ref;
    ClipLabel label = ClipLabel::Real;
    SplitTag split = SplitTag::Train;

    double& at(const std::string& name) { return values[feature_index(name)]; }
    double at(const std::string& name) const {
        return values[feature_index(name)];
    }
};

FeatureVector make_empty_feature_vector();

struct SummaryStats {
    double mean = kMissing;
    double stddev = kMissing;  // population, n divisor
    double range = kMissing;   // max - min
    double iqr = kMissing;     // p75 - p25
    double cv = kMissing;      // stddev / mean
    double p10 = kMissing;
    double p90 = kMissing;
};

// Percentile by sorted linear interpolation at rank p*(n-1).
double percentile(std::vector<double> sorted_or_not, double p);

// Statistics over the non-missing entries. Throws EmptySeries when there
// are none; stddev-derived stats need two values, cv a nonzero mean.
SummaryStats summarize(const std::vector<double>& values);

struct ExtractParams {
    double trim_db = -40.0;
    FramingParams framing;  // 25 ms / 10 ms STFT grid
    YinParams yin;
    double rolloff_pct = 0.85;
    std::size_t contrast_bands = 6;
    double min_seg_ms = 30.0;
};

// f0_*, voice_pct, n_voiced_seg_per_s, mean_voiced_seg_ms, pause_ratio,
// f0_slope_hz_per_s written into `out`. Fully unvoiced tracks leave all
// of them missing except the segment-timing zeros.
void prosodic_features(const PitchTrack& track, const VoicedSegments& segs,
                       double dur_s, FeatureVector& out);

// (jitter_local, shimmer_local); consecutive pairs within a run only.
// Throws TooFewCycles when no consecutive pair exists.
std::pair<double, double> voice_quality_features(const CycleMarks& marks);

void spectral_features(const FrameSeries& centroid,
                       const FrameSeries& bandwidth,
                       const FrameSeries& rolloff,
                       const FrameSeries& contrast, const FrameSeries& rms,
                       FeatureVector& out);

// Full per-clip pipeline: trim -> STFT/RMS descriptors -> YIN ->
// segmentation -> cycle marks -> merged 32-slot vector. dur_s comes from
// the trimmed clip. Errors from mandatory stages propagate; absent voicing
// only leaves the affected slots missing.
FeatureVector extract_clip_features(const AudioClip& clip,
                                    const ExtractParams& params = {});

}  // namespace spoofdet
