// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "spoofdet/audio.hpp"
#include "spoofdet/framing.hpp"

namespace spoofdet {

struct YinParams {
    double fmin_hz = 65.0;
    double fmax_hz = 500.0;
    double threshold = 0.15;  // cumulative-mean-normalized difference cutoff
    double window_ms = 50.0;  // analysis window; lags search half of it
    double hop_ms = 10.0;
};

struct PitchTrack {
    std::vector<double> f0_hz;        // NaN when unvoiced
    std::vector<double> aperiodicity; // minimum normalized difference per frame
    std::vector<bool> voiced;
    FramingParams framing;  // window = YIN window, hop = YIN hop
    YinParams params;

    std::size_t size() const { return f0_hz.size(); }
    std::size_t voiced_count() const;
};

struct VoicedSegment {
    double start_s;
    double end_s;
    double duration_s() const { return end_s - start_s; }
};

struct VoicedSegments {
    std::vector<VoicedSegment> segments;
    double total_voiced_s = 0.0;
    double total_unvoiced_s = 0.0;
};

struct CycleMarks {
    std::vector<double> periods_s;
    std::vector<double> peak_amps;
    // index into periods_s where each voiced segment's run begins;
    // consecutive-pair statistics must not straddle these boundaries
    std::vector<std::size_t> run_starts;
};

// Difference function over lags [rate/fmax, rate/fmin], cumulative-mean
// normalization, absolute threshold with local-minimum walk, parabolic
// refinement. Voiced iff the minimum normalized difference clears the
// threshold; f0 clamped to [fmin, fmax]. Throws ClipTooShort.
PitchTrack yin_f0(const AudioClip& clip, const YinParams& params = {});

// Maximal voiced runs as time intervals; runs shorter than min_seg_ms are
// folded back into unvoiced time.
VoicedSegments segment_voicing(const PitchTrack& track,
                               double min_seg_ms = 30.0);

// Peak-to-peak waveform walk inside each voiced segment, guided by the
// local f0: the next cycle peak is the signal maximum within
// [0.8, 1.25] periods of the previous one. Throws NoVoicedContent.
CycleMarks mark_cycles(const AudioClip& clip, const PitchTrack& track,
                       double min_seg_ms = 30.0);

void write_pitch_csv(const PitchTrack& track, const std::string& path);

}  // namespace spoofdet
