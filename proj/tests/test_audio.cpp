// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "spoofdet/manifest.hpp"
#include "spoofdet/rng.hpp"
#include "spoofdet/wav.hpp"
#include "support/synth.hpp"

using namespace spoofdet;
namespace fs = std::filesystem;

namespace {

std::vector<double> concat(std::initializer_list<std::vector<double>> parts) {
    std::vector<double> out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

fs::path temp_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("spoofdet_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("trim removes silence around a tone") {
    const int rate = 16000;
    auto signal = concat({std::vector<double>(rate / 2, 0.0),
                          synth::sine(440.0, rate, rate, 0.5),
                          std::vector<double>(rate / 2, 0.0)});
    AudioClip clip = synth::make_clip(signal, rate);
    AudioClip trimmed = trim_silence(clip);
    // frames at 10 ms hops: edge frames overlapping any of the tone stay
    CHECK(trimmed.duration_s() >= 0.99);
    CHECK(trimmed.duration_s() <= 1.03);
}

TEST_CASE("trim duration for a noise burst between silences") {
    // 0.5 s digital silence + 1 s noise at -10 dBFS + 0.5 s silence;
    // by the frame arithmetic the kept range is [0.48 s, 1.50 s) = 1.02 s
    const int rate = 16000;
    Rng rng(11);
    auto noise = synth::white_noise(rng, rate, 0.316);  // ~-10 dBFS RMS
    auto signal = concat({std::vector<double>(rate / 2, 0.0), noise,
                          std::vector<double>(rate / 2, 0.0)});
    AudioClip clip = synth::make_clip(signal, rate);
    AudioClip trimmed = trim_silence(clip, -40.0);
    CHECK(trimmed.duration_s() >= 0.99);
    CHECK(trimmed.duration_s() <= 1.03);
    CHECK(trimmed.duration_s() == doctest::Approx(1.02).epsilon(1e-12));
}

TEST_CASE("trim is the identity without sub-threshold edges") {
    const int rate = 16000;
    AudioClip clip = synth::make_clip(synth::sine(300.0, rate, rate, 0.4), rate);
    AudioClip trimmed = trim_silence(clip);
    CHECK(trimmed.samples == clip.samples);
}

TEST_CASE("trim rejects silent and too-short clips") {
    const int rate = 16000;
    SUBCASE("all zeros") {
        AudioClip clip = synth::make_clip(std::vector<double>(rate, 0.0), rate);
        try {
            trim_silence(clip);
            FAIL("expected AllSilent");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::AllSilent);
        }
    }
    SUBCASE("fewer than three loud frames") {
        auto signal = concat({std::vector<double>(rate, 0.0),
                              synth::sine(440.0, rate, rate / 50, 0.5),
                              std::vector<double>(rate, 0.0)});
        AudioClip clip = synth::make_clip(signal, rate);
        try {
            trim_silence(clip);
            FAIL("expected AllSilent");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::AllSilent);
        }
    }
}

TEST_CASE("trim is idempotent on bursty signals") {
    const int rate = 16000;
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        // random silence / burst / silence / burst / silence layout
        std::vector<double> signal(static_cast<std::size_t>(rng.uniform(
            rate * 0.5, rate * 2.0)), 0.0);
        const std::size_t n = signal.size();
        for (int burst = 0; burst < 3; ++burst) {
            const auto start = static_cast<std::size_t>(
                rng.uniform(0.0, static_cast<double>(n - 400)));
            const auto len = static_cast<std::size_t>(
                rng.uniform(200.0, static_cast<double>(n - start)));
            const double amp = rng.uniform(0.001, 0.9);
            for (std::size_t i = start; i < std::min(n, start + len); ++i)
                signal[i] += amp * std::sin(0.2 * static_cast<double>(i));
        }
        AudioClip clip = synth::make_clip(signal, rate);
        AudioClip once;
        try {
            once = trim_silence(clip);
        } catch (const Error&) {
            continue;  // degenerate draw
        }
        AudioClip twice = trim_silence(once);
        REQUIRE(twice.samples == once.samples);
    }
}

TEST_CASE("manifest csv row parses to a typed entry") {
    fs::path dir = temp_dir("manifest_csv");
    {
        std::ofstream csv(dir / "manifest.csv");
        csv << "path,label,split\n";
        csv << "a.wav,fake,test\n";
        csv << "b.wav,Real,TRAIN\n";
        csv << "c.wav,real,test\n";
        csv << "d.wav,fake,train\n";
        csv << "e.wav,real,train\n";
    }
    DatasetManifest m = scan_dataset((dir / "manifest.csv").string(), "toy");
    REQUIRE(m.entries.size() == 5);
    CHECK(m.condition_name == "toy");
    const auto& a = m.entries[0];
    CHECK(a.source_path == (dir / "a.wav").string());
    CHECK(a.label == ClipLabel::Fake);
    CHECK(a.split == SplitTag::Test);
}

TEST_CASE("manifest order is independent of listing order") {
    fs::path dir = temp_dir("manifest_order");
    {
        std::ofstream csv(dir / "shuffled.csv");
        csv << "path,label,split\n";
        csv << "z.wav,fake,test\nb.wav,real,train\nq.wav,fake,train\n"
               "a.wav,real,test\n";
    }
    {
        std::ofstream csv(dir / "sorted.csv");
        csv << "path,label,split\n";
        csv << "a.wav,real,test\nb.wav,real,train\nq.wav,fake,train\n"
               "z.wav,fake,test\n";
    }
    DatasetManifest m1 = scan_dataset((dir / "shuffled.csv").string());
    DatasetManifest m2 = scan_dataset((dir / "sorted.csv").string());
    REQUIRE(m1.entries.size() == m2.entries.size());
    for (std::size_t i = 0; i < m1.entries.size(); ++i)
        CHECK(m1.entries[i].source_path == m2.entries[i].source_path);
}

TEST_CASE("manifest rejects an empty class cell") {
    fs::path dir = temp_dir("manifest_empty");
    std::ofstream csv(dir / "m.csv");
    csv << "path,label,split\n";
    csv << "a.wav,real,train\nb.wav,fake,train\nc.wav,real,test\n";
    csv.close();
    try {
        scan_dataset((dir / "m.csv").string());
        FAIL("expected EmptyClass");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyClass);
    }
}

TEST_CASE("manifest rejects duplicate paths") {
    fs::path dir = temp_dir("manifest_dup");
    std::ofstream csv(dir / "m.csv");
    csv << "path,label,split\n";
    csv << "a.wav,real,train\na.wav,fake,train\nb.wav,fake,test\n"
           "c.wav,real,test\nd.wav,fake,train\n";
    csv.close();
    try {
        scan_dataset((dir / "m.csv").string());
        FAIL("expected DuplicatePath");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DuplicatePath);
    }
}

TEST_CASE("directory scan finds the four cells") {
    fs::path dir = temp_dir("manifest_dirscan");
    auto touch_wav = [&](const std::string& rel) {
        fs::path p = dir / rel;
        fs::create_directories(p.parent_path());
        AudioClip clip =
            synth::make_clip(synth::sine(200.0, 16000, 1600, 0.4), 16000);
        encode_wav_file(clip, p.string());
    };
    touch_wav("training/real/r1.wav");
    touch_wav("training/real/r2.wav");
    touch_wav("training/fake/f1.wav");
    touch_wav("training/fake/f2.wav");
    touch_wav("testing/real/r3.wav");
    touch_wav("testing/fake/f3.wav");

    DatasetManifest m = scan_dataset(dir.string(), "dirscan");
    REQUIRE(m.entries.size() == 6);
    auto counts = m.counts();
    CHECK(counts[0][0] == 2);  // real train
    CHECK(counts[1][0] == 2);  // fake train
    CHECK(counts[0][1] == 1);  // real test
    CHECK(counts[1][1] == 1);  // fake test
}
