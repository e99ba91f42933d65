// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "spoofdet/framing.hpp"

namespace spoofdet {

// Fake is the positive detection class everywhere downstream.
enum class ClipLabel { Real, Fake };
enum class SplitTag { Train, Test };

const char* label_name(ClipLabel label);
const char* split_name(SplitTag split);
ClipLabel parse_label(const std::string& text);
SplitTag parse_split(const std::string& text);

struct AudioClip {
    std::vector<double> samples;  // mono, in [-1, 1]
    int sample_rate = 0;
    std::string source_path;
    ClipLabel label = ClipLabel::Real;
    SplitTag split = SplitTag::Train;
    // true when the rate is neither of the two studied conditions
    bool nonstandard_rate = false;

    double duration_s() const {
        return static_cast<double>(samples.size()) / sample_rate;
    }
};

// Removes leading and trailing frames whose RMS falls below the peak frame
// RMS by more than |threshold_db|. Kept range is [first*hop, (last+1)*hop),
// which makes a second trim a no-op. threshold_db must be negative.
// Throws AllSilent when every frame is below threshold or fewer than three
// frames survive.
AudioClip trim_silence(const AudioClip& clip, double threshold_db = -40.0,
                       const FramingParams& params = {});

}  // namespace spoofdet
