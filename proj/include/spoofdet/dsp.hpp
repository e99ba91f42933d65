// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "spoofdet/audio.hpp"
#include "spoofdet/framing.hpp"

namespace spoofdet {

// Frames that cannot be measured (e.g. silent) carry NaN.
constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

struct FrameSeries {
    std::vector<double> values;
    std::string name;
    FramingParams framing;

    std::size_t size() const { return values.size(); }
};

struct Spectrogram {
    // row-major [n_frames x n_bins], nonnegative magnitudes
    std::vector<double> magnitudes;
    std::size_t n_frames = 0;
    std::size_t n_bins = 0;
    std::vector<double> bin_freqs;
    FramingParams framing;
    int sample_rate = 0;
    std::size_t fft_size = 0;

    double mag(std::size_t frame, std::size_t bin) const {
        return magnitudes[frame * n_bins + bin];
    }
    double nyquist() const { return sample_rate / 2.0; }
};

// Hann-windowed magnitude STFT; FFT size is the next power of two at or
// above the window length. Throws ClipTooShort.
Spectrogram stft(const AudioClip& clip, const FramingParams& params = {});

// Per-frame RMS over unwindowed samples.
FrameSeries rms_track(const AudioClip& clip, const FramingParams& params = {});

// Magnitude-weighted mean frequency; silent frames marked missing.
FrameSeries spectral_centroid(const Spectrogram& spec);

// Magnitude-weighted standard deviation around the per-frame centroid.
FrameSeries spectral_bandwidth(const Spectrogram& spec);

// Smallest frequency below which `pct` of the frame's squared-magnitude
// energy lies. Requires 0 < pct < 1.
FrameSeries spectral_rolloff(const Spectrogram& spec, double pct = 0.85);

// Octave-spaced bands from 200 Hz, capped at Nyquist; per band,
// log(top-quintile mean) - log(bottom-quintile mean) of the magnitudes.
std::vector<FrameSeries> spectral_contrast(const Spectrogram& spec,
                                           std::size_t n_bands = 6);

// Across-band mean per frame, the form aggregated into clip statistics.
FrameSeries contrast_band_mean(const std::vector<FrameSeries>& bands);

void write_spectrogram_csv(const Spectrogram& spec, const std::string& path);

}  // namespace spoofdet
