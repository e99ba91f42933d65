// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#include "spoofdet/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

namespace spoofdet {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;

struct ByteReader {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t pos = 0;

    bool can_read(std::size_t n) const { return pos + n <= size; }

    std::uint32_t u32() {
        std::uint32_t v = static_cast<std::uint32_t>(data[pos]) |
                          static_cast<std::uint32_t>(data[pos + 1]) << 8 |
                          static_cast<std::uint32_t>(data[pos + 2]) << 16 |
                          static_cast<std::uint32_t>(data[pos + 3]) << 24;
        pos += 4;
        return v;
    }

    std::uint16_t u16() {
        std::uint16_t v = static_cast<std::uint16_t>(
            data[pos] | static_cast<std::uint16_t>(data[pos + 1]) << 8);
        pos += 2;
        return v;
    }

    bool tag(const char* expect) {
        bool ok = std::memcmp(data + pos, expect, 4) == 0;
        pos += 4;
        return ok;
    }
};

double sample_at(const std::uint8_t* p, std::uint16_t format,
                 std::uint16_t bits) {
    if (format == kFormatFloat) {
        float f;
        std::memcpy(&f, p, 4);
        return static_cast<double>(f);
    }
    if (bits == 16) {
        std::int16_t v = static_cast<std::int16_t>(p[0] | (p[1] << 8));
        return static_cast<double>(v) / 32768.0;
    }
    // 24-bit little-endian, sign-extended
    std::int32_t v = static_cast<std::int32_t>(
        (static_cast<std::uint32_t>(p[0]) << 8 |
         static_cast<std::uint32_t>(p[1]) << 16 |
         static_cast<std::uint32_t>(p[2]) << 24));
    v >>= 8;
    return static_cast<double>(v) / 8388608.0;
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
    out.insert(out.end(), tag, tag + 4);
}

}  // namespace

AudioClip decode_wav(const std::vector<std::uint8_t>& bytes) {
    ByteReader r{bytes.data(), bytes.size()};
    if (!r.can_read(12) || !r.tag("RIFF"))
        throw Error(ErrorCode::MalformedWav, "missing RIFF header");
    r.u32();  // declared riff size; trust actual chunk walk instead
    if (!r.tag("WAVE"))
        throw Error(ErrorCode::MalformedWav, "missing WAVE form type");

    bool have_fmt = false;
    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    const std::uint8_t* data_ptr = nullptr;
    std::uint32_t data_size = 0;

    while (r.can_read(8)) {
        char id[4];
        std::memcpy(id, r.data + r.pos, 4);
        r.pos += 4;
        std::uint32_t chunk_size = r.u32();
        if (!r.can_read(chunk_size))
            throw Error(ErrorCode::MalformedWav, "truncated chunk");

        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (chunk_size < 16)
                throw Error(ErrorCode::MalformedWav, "fmt chunk too small");
            std::size_t fmt_end = r.pos + chunk_size;
            format = r.u16();
            channels = r.u16();
            rate = r.u32();
            r.u32();  // byte rate
            r.u16();  // block align
            bits = r.u16();
            r.pos = fmt_end;
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            data_ptr = r.data + r.pos;
            data_size = chunk_size;
            r.pos += chunk_size;
        } else {
            r.pos += chunk_size;
        }
        if (chunk_size % 2 == 1 && r.can_read(1)) ++r.pos;  // chunk padding
    }

    if (!have_fmt) throw Error(ErrorCode::MalformedWav, "missing fmt chunk");
    if (data_ptr == nullptr)
        throw Error(ErrorCode::MalformedWav, "missing data chunk");
    if (rate == 0) throw Error(ErrorCode::MalformedWav, "zero sample rate");
    if (channels < 1 || channels > 2)
        throw Error(ErrorCode::UnsupportedEncoding,
                    "only mono or stereo supported");

    const bool pcm16 = format == kFormatPcm && bits == 16;
    const bool pcm24 = format == kFormatPcm && bits == 24;
    const bool f32 = format == kFormatFloat && bits == 32;
    if (!pcm16 && !pcm24 && !f32)
        throw Error(ErrorCode::UnsupportedEncoding,
                    "format tag " + std::to_string(format) + " / " +
                        std::to_string(bits) + " bits");

    const std::size_t bytes_per_sample = bits / 8;
    const std::size_t frame_bytes = bytes_per_sample * channels;
    if (data_size % frame_bytes != 0)
        throw Error(ErrorCode::MalformedWav, "data chunk not frame-aligned");
    const std::size_t n_frames = data_size / frame_bytes;
    if (n_frames == 0) throw Error(ErrorCode::MalformedWav, "empty data chunk");

    AudioClip clip;
    clip.sample_rate = static_cast<int>(rate);
    clip.nonstandard_rate = (rate != 16000 && rate != 44100);
    clip.samples.resize(n_frames);
    for (std::size_t i = 0; i < n_frames; ++i) {
        const std::uint8_t* p = data_ptr + i * frame_bytes;
        double v = sample_at(p, format, bits);
        if (channels == 2)
            v = 0.5 * (v + sample_at(p + bytes_per_sample, format, bits));
        if (!std::isfinite(v))
            throw Error(ErrorCode::MalformedWav, "non-finite sample value");
        clip.samples[i] = v;
    }
    return clip;
}

AudioClip decode_wav_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    AudioClip clip = decode_wav(bytes);
    clip.source_path = path;
    return clip;
}

std::vector<std::uint8_t> encode_wav(const AudioClip& clip,
                                     WavEncoding encoding) {
    const std::size_t n = clip.samples.size();
    std::uint16_t bits =
        encoding == WavEncoding::Pcm16 ? 16 : (encoding == WavEncoding::Pcm24 ? 24 : 32);
    std::uint16_t format =
        encoding == WavEncoding::Float32 ? kFormatFloat : kFormatPcm;
    const std::uint32_t data_size = static_cast<std::uint32_t>(n * bits / 8);

    std::vector<std::uint8_t> out;
    out.reserve(44 + data_size);
    put_tag(out, "RIFF");
    put_u32(out, 36 + data_size);
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put_u32(out, 16);
    put_u16(out, format);
    put_u16(out, 1);  // mono
    put_u32(out, static_cast<std::uint32_t>(clip.sample_rate));
    put_u32(out, static_cast<std::uint32_t>(clip.sample_rate) * bits / 8);
    put_u16(out, static_cast<std::uint16_t>(bits / 8));
    put_u16(out, bits);
    put_tag(out, "data");
    put_u32(out, data_size);

    for (double s : clip.samples) {
        switch (encoding) {
            case WavEncoding::Pcm16: {
                double scaled = std::clamp(s, -1.0, 1.0) * 32768.0;
                auto v = static_cast<std::int32_t>(std::lrint(scaled));
                v = std::clamp(v, -32768, 32767);
                put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
                break;
            }
            case WavEncoding::Pcm24: {
                double scaled = std::clamp(s, -1.0, 1.0) * 8388608.0;
                auto v = static_cast<std::int32_t>(std::lrint(scaled));
                v = std::clamp(v, -8388608, 8388607);
                out.push_back(static_cast<std::uint8_t>(v & 0xff));
                out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
                out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
                break;
            }
            case WavEncoding::Float32: {
                float f = static_cast<float>(s);
                std::uint32_t u;
                std::memcpy(&u, &f, 4);
                put_u32(out, u);
                break;
            }
        }
    }
    return out;
}

void encode_wav_file(const AudioClip& clip, const std::string& path,
                     WavEncoding encoding) {
    std::vector<std::uint8_t> bytes = encode_wav(clip, encoding);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::IoError, "short write to " + path);
}

}  // namespace spoofdet
