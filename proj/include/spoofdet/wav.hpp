// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spoofdet/audio.hpp"

namespace spoofdet {

enum class WavEncoding { Pcm16, Pcm24, Float32 };

// Decodes a RIFF/WAVE container holding PCM 16-bit, PCM 24-bit, or IEEE
// float32 samples in 1 or 2 channels. Multi-channel input is averaged to
// mono; integer samples scale to [-1, 1] by the format's full-scale value.
// Throws MalformedWav / UnsupportedEncoding.
AudioClip decode_wav(const std::vector<std::uint8_t>& bytes);

AudioClip decode_wav_file(const std::string& path);

std::vector<std::uint8_t> encode_wav(const AudioClip& clip,
                                     WavEncoding encoding = WavEncoding::Pcm16);

void encode_wav_file(const AudioClip& clip, const std::string& path,
                     WavEncoding encoding = WavEncoding::Pcm16);

}  // namespace spoofdet
