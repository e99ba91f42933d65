// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#include "spoofdet/dsp.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "spoofdet/fft.hpp"

namespace spoofdet {

namespace {

constexpr double kSilenceFloor = 1e-10;
constexpr double kContrastEps = 1e-10;

std::vector<double> hann_window(std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) /
                                    static_cast<double>(n));
    return w;
}

}  // namespace

Spectrogram stft(const AudioClip& clip, const FramingParams& params) {
    const std::size_t win = params.window_samples(clip.sample_rate);
    const std::size_t hop = params.hop_samples(clip.sample_rate);
    const std::size_t n_frames = params.frame_count(clip.samples.size(),
                                                    clip.sample_rate);
    const std::size_t fft_size = next_pow2(win);
    const std::size_t n_bins = fft_size / 2 + 1;
    const std::vector<double> window = hann_window(win);

    Spectrogram spec;
    spec.n_frames = n_frames;
    spec.n_bins = n_bins;
    spec.framing = params;
    spec.sample_rate = clip.sample_rate;
    spec.fft_size = fft_size;
    spec.magnitudes.resize(n_frames * n_bins);
    spec.bin_freqs.resize(n_bins);
    for (std::size_t k = 0; k < n_bins; ++k)
        spec.bin_freqs[k] = static_cast<double>(k) * clip.sample_rate /
                            static_cast<double>(fft_size);

    std::vector<std::complex<double>> buf(fft_size);
    for (std::size_t t = 0; t < n_frames; ++t) {
        std::fill(buf.begin(), buf.end(), std::complex<double>(0.0, 0.0));
        const double* x = clip.samples.data() + t * hop;
        for (std::size_t i = 0; i < win; ++i) buf[i] = {x[i] * window[i], 0.0};
        fft_inplace(buf);
        double* out = spec.magnitudes.data() + t * n_bins;
        for (std::size_t k = 0; k < n_bins; ++k) out[k] = std::abs(buf[k]);
    }
    return spec;
}

FrameSeries rms_track(const AudioClip& clip, const FramingParams& params) {
    const std::size_t win = params.window_samples(clip.sample_rate);
    const std::size_t hop = params.hop_samples(clip.sample_rate);
    const std::size_t n_frames = params.frame_count(clip.samples.size(),
                                                    clip.sample_rate);
    FrameSeries series{std::vector<double>(n_frames), "rms", params};
    for (std::size_t t = 0; t < n_frames; ++t) {
        double acc = 0.0;
        const double* x = clip.samples.data() + t * hop;
        for (std::size_t i = 0; i < win; ++i) acc += x[i] * x[i];
        series.values[t] = std::sqrt(acc / static_cast<double>(win));
    }
    return series;
}

FrameSeries spectral_centroid(const Spectrogram& spec) {
    FrameSeries series{std::vector<double>(spec.n_frames), "spec_centroid",
                       spec.framing};
    for (std::size_t t = 0; t < spec.n_frames; ++t) {
        const double* m = spec.magnitudes.data() + t * spec.n_bins;
        double total = 0.0, weighted = 0.0;
        for (std::size_t k = 0; k < spec.n_bins; ++k) {
            total += m[k];
            weighted += m[k] * spec.bin_freqs[k];
        }
        series.values[t] = total < kSilenceFloor ? kMissing : weighted / total;
    }
    return series;
}

FrameSeries spectral_bandwidth(const Spectrogram& spec) {
    FrameSeries series{std::vector<double>(spec.n_frames), "spec_bandwidth",
                       spec.framing};
    for (std::size_t t = 0; t < spec.n_frames; ++t) {
        const double* m = spec.magnitudes.data() + t * spec.n_bins;
        double total = 0.0, weighted = 0.0;
        for (std::size_t k = 0; k < spec.n_bins; ++k) {
            total += m[k];
            weighted += m[k] * spec.bin_freqs[k];
        }
        if (total < kSilenceFloor) {
            series.values[t] = kMissing;
            continue;
        }
        const double centroid = weighted / total;
        double spread = 0.0;
        for (std::size_t k = 0; k < spec.n_bins; ++k) {
            double d = spec.bin_freqs[k] - centroid;
            spread += m[k] * d * d;
        }
        series.values[t] = std::sqrt(spread / total);
    }
    return series;
}

FrameSeries spectral_rolloff(const Spectrogram& spec, double pct) {
    if (!(pct > 0.0 && pct < 1.0))
        throw Error(ErrorCode::BadConfig, "rolloff fraction must be in (0, 1)");
    FrameSeries series{std::vector<double>(spec.n_frames), "spec_rolloff",
                       spec.framing};
    for (std::size_t t = 0; t < spec.n_frames; ++t) {
        const double* m = spec.magnitudes.data() + t * spec.n_bins;
        double total = 0.0;
        for (std::size_t k = 0; k < spec.n_bins; ++k) total += m[k] * m[k];
        if (total < kSilenceFloor * kSilenceFloor) {
            series.values[t] = kMissing;
            continue;
        }
        const double target = pct * total;
        double cum = 0.0;
        double rolloff = spec.bin_freqs.back();
        for (std::size_t k = 0; k < spec.n_bins; ++k) {
            cum += m[k] * m[k];
            if (cum >= target) {
                rolloff = spec.bin_freqs[k];
                break;
            }
        }
        series.values[t] = rolloff;
    }
    return series;
}

std::vector<FrameSeries> spectral_contrast(const Spectrogram& spec,
                                           std::size_t n_bands) {
    if (n_bands < 1)
        throw Error(ErrorCode::BadConfig, "need at least one contrast band");

    // bin index ranges per octave band [200*2^b, 200*2^(b+1)), capped
    struct Band {
        std::size_t lo, hi;  // [lo, hi)
    };
    std::vector<Band> bands;
    const double bin_hz = spec.bin_freqs.size() > 1 ? spec.bin_freqs[1] : 0.0;
    if (bin_hz <= 0.0) throw Error(ErrorCode::TooFewBins, "degenerate spectrum");
    for (std::size_t b = 0; b < n_bands; ++b) {
        double f_lo = 200.0 * std::pow(2.0, static_cast<double>(b));
        double f_hi = std::min(200.0 * std::pow(2.0, static_cast<double>(b) + 1.0),
                               spec.nyquist());
        auto lo = static_cast<std::size_t>(std::ceil(f_lo / bin_hz));
        auto hi = static_cast<std::size_t>(std::ceil(f_hi / bin_hz));
        hi = std::min(hi, spec.n_bins);
        if (lo >= hi)
            throw Error(ErrorCode::TooFewBins,
                        "octave band " + std::to_string(b) +
                            " has no bins at this resolution");
        bands.push_back({lo, hi});
    }

    std::vector<FrameSeries> out;
    out.reserve(n_bands);
    for (std::size_t b = 0; b < n_bands; ++b)
        out.push_back({std::vector<double>(spec.n_frames),
                       "spec_contrast_b" + std::to_string(b), spec.framing});

    std::vector<double> scratch;
    for (std::size_t t = 0; t < spec.n_frames; ++t) {
        const double* m = spec.magnitudes.data() + t * spec.n_bins;
        double total = std::accumulate(m, m + spec.n_bins, 0.0);
        for (std::size_t b = 0; b < n_bands; ++b) {
            if (total < kSilenceFloor) {
                out[b].values[t] = kMissing;
                continue;
            }
            const Band& band = bands[b];
            scratch.assign(m + band.lo, m + band.hi);
            std::sort(scratch.begin(), scratch.end());
            const std::size_t q = std::max<std::size_t>(1, scratch.size() / 5);
            double valley = 0.0, peak = 0.0;
            for (std::size_t i = 0; i < q; ++i) {
                valley += scratch[i];
                peak += scratch[scratch.size() - 1 - i];
            }
            valley /= static_cast<double>(q);
            peak /= static_cast<double>(q);
            out[b].values[t] =
                std::log(peak + kContrastEps) - std::log(valley + kContrastEps);
        }
    }
    return out;
}

FrameSeries contrast_band_mean(const std::vector<FrameSeries>& bands) {
    FrameSeries series{std::vector<double>(bands.at(0).size()), "spec_contrast",
                       bands[0].framing};
    for (std::size_t t = 0; t < series.size(); ++t) {
        double acc = 0.0;
        std::size_t n = 0;
        for (const auto& band : bands) {
            if (is_missing(band.values[t])) continue;
            acc += band.values[t];
            ++n;
        }
        series.values[t] = n == 0 ? kMissing : acc / static_cast<double>(n);
    }
    return series;
}

void write_spectrogram_csv(const Spectrogram& spec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out << "frame";
    char buf[64];
    for (std::size_t k = 0; k < spec.n_bins; ++k) {
        std::snprintf(buf, sizeof(buf), ",%.6g", spec.bin_freqs[k]);
        out << buf;
    }
    out << '\n';
    for (std::size_t t = 0; t < spec.n_frames; ++t) {
        out << t;
        for (std::size_t k = 0; k < spec.n_bins; ++k) {
            std::snprintf(buf, sizeof(buf), ",%.9g", spec.mag(t, k));
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace spoofdet
