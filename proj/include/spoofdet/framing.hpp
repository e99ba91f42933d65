// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>

#include "spoofdet/error.hpp"

namespace spoofdet {

enum class WindowShape { Hann };

// Short-time analysis grid: frame t covers samples [t*hop, t*hop + window).
struct FramingParams {
    double window_ms = 25.0;
    double hop_ms = 10.0;
    WindowShape window_shape = WindowShape::Hann;

    std::size_t window_samples(int sample_rate) const {
        return static_cast<std::size_t>(
            std::llround(window_ms * sample_rate / 1000.0));
    }

    std::size_t hop_samples(int sample_rate) const {
        return static_cast<std::size_t>(
            std::llround(hop_ms * sample_rate / 1000.0));
    }

    double hop_seconds() const { return hop_ms / 1000.0; }

    // Frames fully contained in n samples; throws when not even one fits.
    std::size_t frame_count(std::size_t n_samples, int sample_rate) const {
        std::size_t win = window_samples(sample_rate);
        if (n_samples < win)
            throw Error(ErrorCode::ClipTooShort,
                        "clip shorter than one analysis window");
        return (n_samples - win) / hop_samples(sample_rate) + 1;
    }
};

}  // namespace spoofdet
