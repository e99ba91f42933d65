// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#include "spoofdet/audio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace spoofdet {

namespace {

std::string lowercase(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

struct TrimRange {
    std::size_t begin;
    std::size_t end;
    bool changed;
};

// One edge-trim pass over [begin, end). Frames below cutoff at either edge
// are dropped; the kept range is [first*hop, (last+1)*hop) relative to begin.
TrimRange trim_pass(const std::vector<double>& samples, std::size_t begin,
                    std::size_t end, std::size_t win, std::size_t hop,
                    double threshold_db, const std::string& path) {
    const std::size_t len = end - begin;
    if (len < win)
        throw Error(ErrorCode::AllSilent, "clip shorter than one frame: " + path);
    const std::size_t n_frames = (len - win) / hop + 1;

    std::vector<double> rms(n_frames);
    double peak = 0.0;
    for (std::size_t t = 0; t < n_frames; ++t) {
        double acc = 0.0;
        const double* x = samples.data() + begin + t * hop;
        for (std::size_t i = 0; i < win; ++i) acc += x[i] * x[i];
        rms[t] = std::sqrt(acc / static_cast<double>(win));
        peak = std::max(peak, rms[t]);
    }

    if (peak <= 0.0)
        throw Error(ErrorCode::AllSilent, "clip is digital silence: " + path);

    const double cutoff = peak * std::pow(10.0, threshold_db / 20.0);
    std::size_t first = 0;
    while (first < n_frames && rms[first] < cutoff) ++first;
    if (first == n_frames)
        throw Error(ErrorCode::AllSilent,
                    "every frame below trim threshold: " + path);
    std::size_t last = n_frames - 1;
    while (last > first && rms[last] < cutoff) --last;

    if (last - first + 1 < 3)
        throw Error(ErrorCode::AllSilent,
                    "fewer than three frames survive trimming: " + path);

    if (first == 0 && last == n_frames - 1) return {begin, end, false};
    return {begin + first * hop, std::min(end, begin + (last + 1) * hop), true};
}

}  // namespace

const char* label_name(ClipLabel label) {
    return label == ClipLabel::Real ? "real" : "fake";
}

const char* split_name(SplitTag split) {
    return split == SplitTag::Train ? "train" : "test";
}

ClipLabel parse_label(const std::string& text) {
    std::string t = lowercase(text);
    if (t == "real") return ClipLabel::Real;
    if (t == "fake") return ClipLabel::Fake;
    throw Error(ErrorCode::BadConfig, "unknown label '" + text + "'");
}

SplitTag parse_split(const std::string& text) {
    std::string t = lowercase(text);
    if (t == "train" || t == "training") return SplitTag::Train;
    if (t == "test" || t == "testing") return SplitTag::Test;
    throw Error(ErrorCode::BadConfig, "unknown split '" + text + "'");
}

AudioClip trim_silence(const AudioClip& clip, double threshold_db,
                       const FramingParams& params) {
    if (threshold_db >= 0.0)
        throw Error(ErrorCode::BadConfig, "trim threshold must be negative dB");

    const std::size_t win = params.window_samples(clip.sample_rate);
    const std::size_t hop = params.hop_samples(clip.sample_rate);

    // Cutting at hop boundaries re-frames the tail, which can expose new
    // sub-threshold edge frames; iterate to the fixed point so a second
    // trim_silence call is always a no-op.
    std::size_t begin = 0;
    std::size_t end = clip.samples.size();
    for (;;) {
        TrimRange r = trim_pass(clip.samples, begin, end, win, hop,
                                threshold_db, clip.source_path);
        begin = r.begin;
        end = r.end;
        if (!r.changed) break;
    }

    if (begin == 0 && end == clip.samples.size()) return clip;

    AudioClip out = clip;
    out.samples.assign(clip.samples.begin() + static_cast<std::ptrdiff_t>(begin),
                       clip.samples.begin() + static_cast<std::ptrdiff_t>(end));
    return out;
}

}  // namespace spoofdet
