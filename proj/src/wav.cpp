// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors

#include "scatter/wav.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace scatter {

namespace {

std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string& s, std::uint32_t v) {
    s.push_back(static_cast<char>(v & 0xff));
    s.push_back(static_cast<char>((v >> 8) & 0xff));
    s.push_back(static_cast<char>((v >> 16) & 0xff));
    s.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u16(std::string& s, std::uint16_t v) {
    s.push_back(static_cast<char>(v & 0xff));
    s.push_back(static_cast<char>((v >> 8) & 0xff));
}

[[noreturn]] void corrupt(const std::string& why) { throw std::runtime_error("wav: " + why); }

}  // namespace

RealSignal read_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) corrupt("cannot open " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::size_t size = bytes.size();

    if (size < 12 || std::memcmp(p, "RIFF", 4) != 0 || std::memcmp(p + 8, "WAVE", 4) != 0) {
        corrupt("not a RIFF/WAVE file");
    }

    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    bool have_fmt = false;
    const unsigned char* data = nullptr;
    std::uint32_t data_size = 0;

    std::size_t pos = 12;
    while (pos + 8 <= size) {
        const std::uint32_t chunk_size = read_u32(p + pos + 4);
        const bool is_fmt = std::memcmp(p + pos, "fmt ", 4) == 0;
        const bool is_data = std::memcmp(p + pos, "data", 4) == 0;
        if (pos + 8 + chunk_size > size) corrupt("truncated chunk");
        if (is_fmt) {
            if (chunk_size < 16) corrupt("fmt chunk too small");
            format = read_u16(p + pos + 8);
            channels = read_u16(p + pos + 10);
            rate = read_u32(p + pos + 12);
            bits = read_u16(p + pos + 22);
            have_fmt = true;
        } else if (is_data) {
            data = p + pos + 8;
            data_size = chunk_size;
        }
        pos += 8 + chunk_size + (chunk_size & 1);
    }

    if (!have_fmt || data == nullptr) corrupt("missing fmt or data chunk");
    if (channels != 1 && channels != 2) corrupt("only mono or stereo is supported");
    if (rate == 0) corrupt("zero sample rate");

    const bool pcm16 = format == 1 && bits == 16;
    const bool float32 = format == 3 && bits == 32;
    if (!pcm16 && !float32) corrupt("unsupported encoding (need 16-bit PCM or 32-bit float)");

    const std::size_t bytes_per_sample = pcm16 ? 2 : 4;
    const std::size_t frame_bytes = bytes_per_sample * channels;
    if (data_size % frame_bytes != 0) corrupt("data size is not a whole number of frames");
    const std::size_t frames = data_size / frame_bytes;
    if (frames == 0) corrupt("empty data chunk");

    RealSignal out;
    out.rate = static_cast<double>(rate);
    out.samples.resize(frames);
    for (std::size_t f = 0; f < frames; ++f) {
        double acc = 0.0;
        for (std::uint16_t c = 0; c < channels; ++c) {
            const unsigned char* sp = data + f * frame_bytes + c * bytes_per_sample;
            if (pcm16) {
                std::int16_t v;
                std::memcpy(&v, sp, 2);
                acc += static_cast<double>(v) / 32768.0;
            } else {
                float v;
                std::memcpy(&v, sp, 4);
                acc += static_cast<double>(v);
            }
        }
        out.samples[f] = acc / static_cast<double>(channels);
    }
    return out;
}

void write_wav(const RealSignal& signal, const std::string& path) {
    if (!(signal.rate > 0.0)) throw std::invalid_argument("signal rate must be positive");
    const auto n = static_cast<std::uint32_t>(signal.size());
    std::string body;
    body.reserve(44 + 4 * n);
    body += "RIFF";
    put_u32(body, 36 + 4 * n);
    body += "WAVEfmt ";
    put_u32(body, 16);
    put_u16(body, 3);  // IEEE float
    put_u16(body, 1);
    const auto rate = static_cast<std::uint32_t>(signal.rate + 0.5);
    put_u32(body, rate);
    put_u32(body, rate * 4);
    put_u16(body, 4);
    put_u16(body, 32);
    body += "data";
    put_u32(body, 4 * n);
    for (double v : signal.samples) {
        const auto f = static_cast<float>(v);
        std::array<char, 4> raw;
        std::memcpy(raw.data(), &f, 4);
        body.append(raw.data(), 4);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("wav: cannot write " + path);
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw std::runtime_error("wav: short write to " + path);
}

}  // namespace scatter
