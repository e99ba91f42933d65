// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#include "spoofdet/pitch.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "spoofdet/dsp.hpp"

namespace spoofdet {

namespace {

struct FrameRun {
    std::size_t first;
    std::size_t last;  // inclusive
};

std::vector<FrameRun> voiced_runs(const PitchTrack& track, double min_seg_ms) {
    const std::size_t min_frames = static_cast<std::size_t>(
        std::ceil(min_seg_ms / track.framing.hop_ms));
    std::vector<FrameRun> runs;
    std::size_t t = 0;
    const std::size_t n = track.size();
    while (t < n) {
        if (!track.voiced[t]) {
            ++t;
            continue;
        }
        std::size_t start = t;
        while (t < n && track.voiced[t]) ++t;
        if (t - start >= std::max<std::size_t>(1, min_frames))
            runs.push_back({start, t - 1});
    }
    return runs;
}

}  // namespace

std::size_t PitchTrack::voiced_count() const {
    std::size_t n = 0;
    for (bool v : voiced)
        if (v) ++n;
    return n;
}

PitchTrack yin_f0(const AudioClip& clip, const YinParams& params) {
    FramingParams framing;
    framing.window_ms = params.window_ms;
    framing.hop_ms = params.hop_ms;

    const int rate = clip.sample_rate;
    const std::size_t win = framing.window_samples(rate);
    const std::size_t hop = framing.hop_samples(rate);
    const std::size_t half = win / 2;

    const std::size_t tau_min = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::ceil(rate / params.fmax_hz)));
    const std::size_t tau_max = static_cast<std::size_t>(
        std::floor(rate / params.fmin_hz));
    if (tau_max + 1 > half || tau_min >= tau_max)
        throw Error(ErrorCode::BadConfig,
                    "YIN window too short for the requested pitch range");

    const std::size_t n_frames = framing.frame_count(clip.samples.size(), rate);

    PitchTrack track;
    track.framing = framing;
    track.params = params;
    track.f0_hz.assign(n_frames, kMissing);
    track.aperiodicity.assign(n_frames, 1.0);
    track.voiced.assign(n_frames, false);

    std::vector<double> diff(tau_max + 1);
    std::vector<double> dprime(tau_max + 1);

    for (std::size_t t = 0; t < n_frames; ++t) {
        const double* x = clip.samples.data() + t * hop;

        diff[0] = 0.0;
        for (std::size_t tau = 1; tau <= tau_max; ++tau) {
            double acc = 0.0;
            for (std::size_t j = 0; j < half; ++j) {
                double d = x[j] - x[j + tau];
                acc += d * d;
            }
            diff[tau] = acc;
        }

        dprime[0] = 1.0;
        double running = 0.0;
        for (std::size_t tau = 1; tau <= tau_max; ++tau) {
            running += diff[tau];
            dprime[tau] = running > 0.0
                              ? diff[tau] * static_cast<double>(tau) / running
                              : 1.0;
        }

        // first lag under threshold, walked to its local minimum
        std::size_t picked = 0;
        for (std::size_t tau = tau_min; tau <= tau_max; ++tau) {
            if (dprime[tau] < params.threshold) {
                while (tau + 1 <= tau_max && dprime[tau + 1] < dprime[tau]) ++tau;
                picked = tau;
                break;
            }
        }

        double min_dprime = dprime[tau_min];
        std::size_t argmin = tau_min;
        for (std::size_t tau = tau_min + 1; tau <= tau_max; ++tau) {
            if (dprime[tau] < min_dprime) {
                min_dprime = dprime[tau];
                argmin = tau;
            }
        }
        track.aperiodicity[t] = min_dprime;

        const bool voiced = min_dprime < params.threshold;
        track.voiced[t] = voiced;
        if (!voiced) continue;
        if (picked == 0) picked = argmin;

        double tau_refined = static_cast<double>(picked);
        if (picked > 1 && picked < tau_max) {
            const double s0 = dprime[picked - 1];
            const double s1 = dprime[picked];
            const double s2 = dprime[picked + 1];
            const double denom = 2.0 * (2.0 * s1 - s2 - s0);
            if (denom != 0.0) {
                double shift = (s2 - s0) / denom;
                if (std::abs(shift) <= 1.0) tau_refined += shift;
            }
        }

        double f0 = static_cast<double>(rate) / tau_refined;
        track.f0_hz[t] = std::clamp(f0, params.fmin_hz, params.fmax_hz);
    }
    return track;
}

VoicedSegments segment_voicing(const PitchTrack& track, double min_seg_ms) {
    if (track.size() == 0)
        throw Error(ErrorCode::EmptySeries, "empty pitch track");

    const double hop_s = track.framing.hop_seconds();
    VoicedSegments out;
    for (const FrameRun& run : voiced_runs(track, min_seg_ms)) {
        double start_s = static_cast<double>(run.first) * hop_s;
        double end_s = static_cast<double>(run.last + 1) * hop_s;
        out.segments.push_back({start_s, end_s});
        out.total_voiced_s += end_s - start_s;
    }
    out.total_unvoiced_s =
        static_cast<double>(track.size()) * hop_s - out.total_voiced_s;
    return out;
}

CycleMarks mark_cycles(const AudioClip& clip, const PitchTrack& track,
                       double min_seg_ms) {
    if (track.voiced_count() < 2)
        throw Error(ErrorCode::NoVoicedContent,
                    "need at least two voiced frames: " + clip.source_path);

    const int rate = clip.sample_rate;
    const std::size_t hop = track.framing.hop_samples(rate);
    const std::size_t n_samples = clip.samples.size();
    const double period_lo = 1.0 / track.params.fmax_hz;
    const double period_hi = 1.0 / track.params.fmin_hz;

    auto local_f0 = [&](std::size_t sample, const FrameRun& run) {
        std::size_t frame = std::min(sample / hop, track.size() - 1);
        frame = std::clamp(frame, run.first, run.last);
        if (track.voiced[frame]) return track.f0_hz[frame];
        // nearest voiced frame inside the run
        for (std::size_t d = 1; d <= run.last - run.first; ++d) {
            if (frame >= d && frame - d >= run.first && track.voiced[frame - d])
                return track.f0_hz[frame - d];
            if (frame + d <= run.last && track.voiced[frame + d])
                return track.f0_hz[frame + d];
        }
        return kMissing;
    };

    auto argmax_in = [&](std::size_t lo, std::size_t hi) {
        std::size_t best = lo;
        for (std::size_t i = lo + 1; i < hi; ++i)
            if (clip.samples[i] > clip.samples[best]) best = i;
        return best;
    };

    CycleMarks marks;
    for (const FrameRun& run : voiced_runs(track, min_seg_ms)) {
        const std::size_t run_begin = run.first * hop;
        const std::size_t run_end = std::min(n_samples, (run.last + 1) * hop);
        if (run_end <= run_begin) continue;

        double f0 = local_f0(run_begin, run);
        if (is_missing(f0)) continue;
        std::size_t first_hi = std::min(
            run_end, run_begin + static_cast<std::size_t>(
                                     std::llround(rate / f0)) + 1);
        std::size_t anchor = argmax_in(run_begin, first_hi);

        bool fresh_run = true;
        for (;;) {
            f0 = local_f0(anchor, run);
            if (is_missing(f0)) break;
            const double period = rate / f0;
            const std::size_t lo =
                anchor + std::max<std::size_t>(
                             1, static_cast<std::size_t>(std::llround(0.8 * period)));
            const std::size_t hi =
                anchor + static_cast<std::size_t>(std::llround(1.25 * period)) + 1;
            if (hi > run_end) break;
            const std::size_t next = argmax_in(lo, hi);
            const double period_s =
                static_cast<double>(next - anchor) / static_cast<double>(rate);
            const double amp = std::abs(clip.samples[next]);

            if (period_s < period_lo || period_s > period_hi || amp <= 0.0) {
                anchor = next;
                fresh_run = true;
                continue;
            }
            if (fresh_run) {
                marks.run_starts.push_back(marks.periods_s.size());
                fresh_run = false;
            }
            marks.periods_s.push_back(period_s);
            marks.peak_amps.push_back(amp);
            anchor = next;
        }
    }

    if (marks.periods_s.empty())
        throw Error(ErrorCode::NoVoicedContent,
                    "no usable glottal cycles: " + clip.source_path);
    return marks;
}

void write_pitch_csv(const PitchTrack& track, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out << "t_s,f0_hz,dprime,voiced\n";
    char buf[128];
    const double hop_s = track.framing.hop_seconds();
    for (std::size_t t = 0; t < track.size(); ++t) {
        if (track.voiced[t])
            std::snprintf(buf, sizeof(buf), "%.4f,%.6g,%.6g,1\n",
                          static_cast<double>(t) * hop_s, track.f0_hz[t],
                          track.aperiodicity[t]);
        else
            std::snprintf(buf, sizeof(buf), "%.4f,,%.6g,0\n",
                          static_cast<double>(t) * hop_s,
                          track.aperiodicity[t]);
        out << buf;
    }
}

}  // namespace spoofdet
