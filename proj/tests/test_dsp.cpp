// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numeric>

#include <doctest.h>

#include "spoofdet/dsp.hpp"
#include "spoofdet/rng.hpp"
#include "support/synth.hpp"

using namespace spoofdet;

namespace {

// spectrogram fabricated from explicit bin values, one frame per row
Spectrogram fabricate(std::vector<std::vector<double>> frames, double bin_hz,
                      int sample_rate) {
    Spectrogram spec;
    spec.n_frames = frames.size();
    spec.n_bins = frames.at(0).size();
    spec.sample_rate = sample_rate;
    spec.fft_size = static_cast<std::size_t>(sample_rate / bin_hz);
    for (std::size_t k = 0; k < spec.n_bins; ++k)
        spec.bin_freqs.push_back(bin_hz * static_cast<double>(k));
    for (const auto& frame : frames)
        spec.magnitudes.insert(spec.magnitudes.end(), frame.begin(),
                               frame.end());
    return spec;
}

double hann(std::size_t i, std::size_t n) {
    return 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) /
                                static_cast<double>(n));
}

}  // namespace

TEST_CASE("stft of DC concentrates in bin zero") {
    // 32 ms window at 16 kHz = 512 samples = the FFT size, so the Hann
    // transform has support exactly on bins 0 and 1
    FramingParams params;
    params.window_ms = 32.0;
    AudioClip clip =
        synth::make_clip(std::vector<double>(16000, 0.25), 16000);
    Spectrogram spec = stft(clip, params);
    REQUIRE(spec.fft_size == 512);
    for (std::size_t t = 0; t < spec.n_frames; ++t) {
        const double bin0 = spec.mag(t, 0);
        REQUIRE(bin0 > 0.0);
        for (std::size_t k = 2; k < spec.n_bins; ++k)
            REQUIRE(spec.mag(t, k) <= 1e-6 * bin0);
    }
}

TEST_CASE("stft of a 1 kHz tone peaks at the right bin") {
    AudioClip clip =
        synth::make_clip(synth::sine(1000.0, 44100, 44100, 0.5), 44100);
    Spectrogram spec = stft(clip);
    REQUIRE(spec.fft_size == 2048);
    const double bin_hz = spec.bin_freqs[1];
    for (std::size_t t = 0; t < spec.n_frames; ++t) {
        std::size_t argmax = 0;
        for (std::size_t k = 1; k < spec.n_bins; ++k)
            if (spec.mag(t, k) > spec.mag(t, argmax)) argmax = k;
        REQUIRE(std::abs(spec.bin_freqs[argmax] - 1000.0) <= bin_hz);
    }
}

TEST_CASE("stft satisfies Parseval per frame") {
    Rng rng(5);
    AudioClip clip =
        synth::make_clip(synth::white_noise(rng, 16000, 0.3), 16000);
    FramingParams params;
    Spectrogram spec = stft(clip, params);
    const std::size_t win = params.window_samples(16000);
    const std::size_t hop = params.hop_samples(16000);

    for (std::size_t t = 0; t < spec.n_frames; ++t) {
        double time_energy = 0.0;
        for (std::size_t i = 0; i < win; ++i) {
            const double v = clip.samples[t * hop + i] * hann(i, win);
            time_energy += v * v;
        }
        double freq_energy = spec.mag(t, 0) * spec.mag(t, 0) +
                             spec.mag(t, spec.n_bins - 1) *
                                 spec.mag(t, spec.n_bins - 1);
        for (std::size_t k = 1; k + 1 < spec.n_bins; ++k)
            freq_energy += 2.0 * spec.mag(t, k) * spec.mag(t, k);
        freq_energy /= static_cast<double>(spec.fft_size);
        REQUIRE(std::abs(time_energy - freq_energy) <=
                1e-9 * std::max(time_energy, 1e-30));
    }
}

TEST_CASE("stft rejects clips shorter than a window") {
    AudioClip clip = synth::make_clip(std::vector<double>(100, 0.1), 16000);
    try {
        stft(clip);
        FAIL("expected ClipTooShort");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ClipTooShort);
    }
}

TEST_CASE("rms of simple signals") {
    SUBCASE("constant 0.5") {
        AudioClip clip =
            synth::make_clip(std::vector<double>(8000, 0.5), 16000);
        FrameSeries rms = rms_track(clip);
        for (double v : rms.values) REQUIRE(v == doctest::Approx(0.5));
    }
    SUBCASE("zeros") {
        AudioClip clip = synth::make_clip(std::vector<double>(8000, 0.0), 16000);
        for (double v : rms_track(clip).values) REQUIRE(v == 0.0);
    }
    SUBCASE("full-scale sine near 1/sqrt(2)") {
        AudioClip clip =
            synth::make_clip(synth::sine(1000.0, 44100, 44100, 1.0), 44100);
        for (double v : rms_track(clip).values)
            REQUIRE(std::abs(v - 1.0 / std::sqrt(2.0)) < 1e-3);
    }
}

TEST_CASE("spectral centroid") {
    SUBCASE("single tone within one bin") {
        AudioClip clip =
            synth::make_clip(synth::sine(1000.0, 44100, 44100, 0.5), 44100);
        Spectrogram spec = stft(clip);
        FrameSeries c = spectral_centroid(spec);
        for (double v : c.values) {
            REQUIRE_FALSE(is_missing(v));
            // windowing smears symmetrically; stay within one bin width
            REQUIRE(std::abs(v - 1000.0) <= spec.bin_freqs[1]);
        }
    }
    SUBCASE("two equal tones average") {
        auto samples = synth::sine(500.0, 44100, 44100, 0.4);
        auto other = synth::sine(1500.0, 44100, 44100, 0.4);
        for (std::size_t i = 0; i < samples.size(); ++i)
            samples[i] += other[i];
        AudioClip clip = synth::make_clip(samples, 44100);
        Spectrogram spec = stft(clip);
        for (double v : spectral_centroid(spec).values)
            REQUIRE(std::abs(v - 1000.0) <= spec.bin_freqs[1]);
    }
    SUBCASE("hand-evaluated weighted mean") {
        Spectrogram spec = fabricate({{0.0, 1.0, 2.0, 1.0}}, 100.0, 16000);
        FrameSeries c = spectral_centroid(spec);
        REQUIRE(c.values[0] == doctest::Approx(200.0).epsilon(1e-12));
    }
    SUBCASE("silent frame marked missing") {
        Spectrogram spec = fabricate({{0.0, 0.0, 0.0, 0.0}}, 100.0, 16000);
        CHECK(is_missing(spectral_centroid(spec).values[0]));
    }
}

TEST_CASE("spectral bandwidth") {
    SUBCASE("true point mass has zero spread") {
        Spectrogram spec = fabricate({{0.0, 0.0, 5.0, 0.0}}, 100.0, 16000);
        REQUIRE(spectral_bandwidth(spec).values[0] <= 100.0);
        REQUIRE(spectral_bandwidth(spec).values[0] ==
                doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("windowed tone stays within the mainlobe smear") {
        AudioClip clip =
            synth::make_clip(synth::sine(1000.0, 44100, 44100, 0.5), 44100);
        Spectrogram spec = stft(clip);
        for (double v : spectral_bandwidth(spec).values)
            REQUIRE(v <= 4.0 * spec.bin_freqs[1]);
    }
    SUBCASE("two equal tones spread") {
        auto samples = synth::sine(500.0, 44100, 44100, 0.4);
        auto other = synth::sine(1500.0, 44100, 44100, 0.4);
        for (std::size_t i = 0; i < samples.size(); ++i)
            samples[i] += other[i];
        AudioClip clip = synth::make_clip(samples, 44100);
        Spectrogram spec = stft(clip);
        for (double v : spectral_bandwidth(spec).values)
            REQUIRE(std::abs(v - 500.0) <= 2.0 * spec.bin_freqs[1]);
    }
    SUBCASE("hand-evaluated weighted spread") {
        Spectrogram spec = fabricate({{0.0, 1.0, 2.0, 1.0}}, 100.0, 16000);
        REQUIRE(spectral_bandwidth(spec).values[0] ==
                doctest::Approx(std::sqrt(5000.0)).epsilon(1e-12));
    }
}

TEST_CASE("spectral rolloff") {
    SUBCASE("true point mass lands on its own bin") {
        Spectrogram spec = fabricate({{0.0, 0.0, 5.0, 0.0}}, 100.0, 16000);
        REQUIRE(spectral_rolloff(spec).values[0] == 200.0);
    }
    SUBCASE("windowed tone within the mainlobe smear") {
        AudioClip clip =
            synth::make_clip(synth::sine(1000.0, 44100, 44100, 0.5), 44100);
        Spectrogram spec = stft(clip);
        for (double v : spectral_rolloff(spec).values)
            REQUIRE(std::abs(v - 1000.0) <= 2.0 * spec.bin_freqs[1]);
    }
    SUBCASE("flat spectrum lands on the cumulative-count bin") {
        const std::size_t n_bins = 20;
        std::vector<double> flat(n_bins, 1.0);
        Spectrogram spec = fabricate({flat}, 50.0, 16000);
        // k+1 >= 0.85 * 20 -> k = 16
        const std::size_t expect =
            static_cast<std::size_t>(std::ceil(0.85 * n_bins)) - 1;
        REQUIRE(expect == 16);
        REQUIRE(spectral_rolloff(spec).values[0] ==
                doctest::Approx(spec.bin_freqs[expect]));
    }
    SUBCASE("pct at the boundary is rejected") {
        Spectrogram spec = fabricate({{1.0, 1.0}}, 100.0, 16000);
        CHECK_THROWS_AS(spectral_rolloff(spec, 1.0), Error);
        CHECK_THROWS_AS(spectral_rolloff(spec, 0.0), Error);
    }
}

TEST_CASE("spectral contrast") {
    const double bin_hz = 20.0;  // band 0 = [200, 400) -> bins 10..19
    const std::size_t n_bins = 512;

    SUBCASE("flat spectrum has zero contrast") {
        std::vector<double> flat(n_bins, 2.0);
        Spectrogram spec = fabricate({flat}, bin_hz, 16000);
        auto bands = spectral_contrast(spec, 4);
        for (const auto& band : bands)
            REQUIRE(band.values[0] == doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("hand-evaluated quintile contrast") {
        std::vector<double> frame(n_bins, 5.0);
        for (std::size_t i = 0; i < 10; ++i)
            frame[10 + i] = static_cast<double>(i + 1);
        Spectrogram spec = fabricate({frame}, bin_hz, 16000);
        auto bands = spectral_contrast(spec, 4);
        // top quintile (9+10)/2, bottom (1+2)/2
        const double expect = std::log(9.5 + 1e-10) - std::log(1.5 + 1e-10);
        REQUIRE(bands[0].values[0] == doctest::Approx(expect).epsilon(1e-12));
        REQUIRE(bands[0].values[0] == doctest::Approx(1.8458).epsilon(1e-3));
    }
    SUBCASE("dominant bin contrast grows with its magnitude") {
        std::vector<double> frame(n_bins, 1e-3);
        frame[12] = 1.0;
        Spectrogram spec1 = fabricate({frame}, bin_hz, 16000);
        frame[12] = 10.0;
        Spectrogram spec2 = fabricate({frame}, bin_hz, 16000);
        auto c1 = spectral_contrast(spec1, 4)[0].values[0];
        auto c2 = spectral_contrast(spec2, 4)[0].values[0];
        REQUIRE(c1 > 1.0);
        REQUIRE(c2 > c1);
    }
    SUBCASE("too few bins for the requested bands") {
        Spectrogram spec = fabricate({{1.0, 1.0, 1.0}}, 50.0, 300);
        CHECK_THROWS_AS(spectral_contrast(spec, 6), Error);
    }
}

TEST_CASE("descriptors are amplitude invariant, rms scales") {
    Rng rng(17);
    auto samples = synth::synth_voice(
        [] {
            synth::VoiceSpec spec;
            spec.base_f0 = 150.0;
            spec.noise_amp = 0.02;
            spec.amplitude = 0.3;
            return spec;
        }(),
        16000, 1.0, rng);
    AudioClip clip = synth::make_clip(samples, 16000);
    AudioClip doubled = clip;
    for (double& v : doubled.samples) v *= 2.0;

    Spectrogram s1 = stft(clip), s2 = stft(doubled);
    auto check_equal = [](const FrameSeries& a, const FrameSeries& b,
                          double tol) {
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (is_missing(a.values[i])) {
                REQUIRE(is_missing(b.values[i]));
                continue;
            }
            REQUIRE(std::abs(a.values[i] - b.values[i]) <= tol);
        }
    };
    check_equal(spectral_centroid(s1), spectral_centroid(s2), 1e-9);
    check_equal(spectral_bandwidth(s1), spectral_bandwidth(s2), 1e-9);
    check_equal(spectral_rolloff(s1), spectral_rolloff(s2), 0.0);
    check_equal(contrast_band_mean(spectral_contrast(s1, 6)),
                contrast_band_mean(spectral_contrast(s2, 6)), 1e-9);

    FrameSeries r1 = rms_track(clip), r2 = rms_track(doubled);
    for (std::size_t i = 0; i < r1.size(); ++i)
        REQUIRE(r2.values[i] == doctest::Approx(2.0 * r1.values[i]));
}

TEST_CASE("descriptor ranges and determinism") {
    Rng rng(19);
    AudioClip clip =
        synth::make_clip(synth::white_noise(rng, 16000, 0.2), 16000);
    Spectrogram spec = stft(clip);
    const double nyquist = spec.nyquist();

    FrameSeries c = spectral_centroid(spec);
    FrameSeries b = spectral_bandwidth(spec);
    FrameSeries r = spectral_rolloff(spec);
    REQUIRE(c.size() == spec.n_frames);
    REQUIRE(b.size() == spec.n_frames);
    REQUIRE(r.size() == spec.n_frames);
    for (std::size_t t = 0; t < spec.n_frames; ++t) {
        REQUIRE(c.values[t] >= 0.0);
        REQUIRE(c.values[t] <= nyquist);
        REQUIRE(b.values[t] >= 0.0);
        REQUIRE(b.values[t] <= nyquist);
        REQUIRE(r.values[t] >= 0.0);
        REQUIRE(r.values[t] <= nyquist);
    }

    Spectrogram again = stft(clip);
    REQUIRE(again.magnitudes == spec.magnitudes);
}
