#include "fagan/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "fagan/errors.hpp"

namespace fagan {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xfffe;

uint32_t read_u32(const uint8_t* p) {
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16(const uint8_t* p) {
    return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v & 0xff));
    out.push_back(static_cast<uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<uint8_t>((v >> 24) & 0xff));
}

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v & 0xff));
    out.push_back(static_cast<uint8_t>((v >> 8) & 0xff));
}

void put_tag(std::vector<uint8_t>& out, const char* tag) {
    out.insert(out.end(), tag, tag + 4);
}

}  // namespace

void validate(const AudioBuffer& buf) {
    if (buf.sample_rate <= 0) {
        throw std::invalid_argument("AudioBuffer: sample_rate must be positive");
    }
    for (double s : buf.samples) {
        if (!std::isfinite(s)) {
            throw std::invalid_argument("AudioBuffer: non-finite sample");
        }
    }
}

AudioBuffer load_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open WAV file: " + path);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
        throw FormatError("malformed WAV header: " + path);
    }

    uint16_t format_tag = 0;
    uint16_t channels = 0;
    uint32_t sample_rate = 0;
    uint16_t bits = 0;
    const uint8_t* data = nullptr;
    uint32_t data_size = 0;
    bool have_fmt = false;

    size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const uint8_t* chunk = bytes.data() + pos;
        uint32_t chunk_size = read_u32(chunk + 4);
        size_t body = pos + 8;
        if (body + chunk_size > bytes.size()) {
            // Tolerate a truncated final data chunk size field; clamp.
            chunk_size = static_cast<uint32_t>(bytes.size() - body);
        }
        if (std::memcmp(chunk, "fmt ", 4) == 0) {
            if (chunk_size < 16) throw FormatError("malformed fmt chunk: " + path);
            format_tag = read_u16(chunk + 8);
            channels = read_u16(chunk + 10);
            sample_rate = read_u32(chunk + 12);
            bits = read_u16(chunk + 22);
            if (format_tag == kFormatExtensible && chunk_size >= 40) {
                format_tag = read_u16(chunk + 8 + 24);  // first two bytes of SubFormat GUID
            }
            have_fmt = true;
        } else if (std::memcmp(chunk, "data", 4) == 0) {
            data = chunk + 8;
            data_size = chunk_size;
        }
        pos = body + chunk_size + (chunk_size & 1);  // chunks are word aligned
    }

    if (!have_fmt || channels == 0 || sample_rate == 0) {
        throw FormatError("malformed WAV file (missing fmt): " + path);
    }
    const bool pcm16 = format_tag == kFormatPcm && bits == 16;
    const bool f32 = format_tag == kFormatFloat && bits == 32;
    if (!pcm16 && !f32) {
        throw FormatError("unsupported WAV codec (want PCM-16 or float-32): " + path);
    }
    if (data == nullptr || data_size == 0) {
        throw FormatError("WAV file has no samples: " + path);
    }

    const uint32_t bytes_per_sample = bits / 8;
    const uint32_t frame_size = bytes_per_sample * channels;
    const uint32_t frames = data_size / frame_size;
    if (frames == 0) throw FormatError("WAV file has no samples: " + path);

    AudioBuffer buf;
    buf.sample_rate = static_cast<int>(sample_rate);
    buf.samples.resize(frames);
    for (uint32_t f = 0; f < frames; ++f) {
        double acc = 0.0;
        for (uint16_t c = 0; c < channels; ++c) {
            const uint8_t* p = data + f * frame_size + c * bytes_per_sample;
            if (pcm16) {
                int16_t v = static_cast<int16_t>(p[0] | (p[1] << 8));
                acc += static_cast<double>(v) / 32768.0;
            } else {
                uint32_t u = read_u32(p);
                float fv;
                std::memcpy(&fv, &u, sizeof(fv));
                acc += static_cast<double>(fv);
            }
        }
        buf.samples[f] = acc / channels;
    }
    return buf;
}

void save_wav(const AudioBuffer& buf, const std::string& path, WavFormat format) {
    validate(buf);
    const bool f32 = format == WavFormat::float32;
    const uint16_t bits = f32 ? 32 : 16;
    const uint32_t n = static_cast<uint32_t>(buf.samples.size());
    const uint32_t data_size = n * (bits / 8);

    std::vector<uint8_t> out;
    out.reserve(60 + data_size);
    put_tag(out, "RIFF");
    // fmt(24) [+ fact(12) for float] + data header(8)
    uint32_t riff_size = 4 + 24 + (f32 ? 12 : 0) + 8 + data_size;
    put_u32(out, riff_size);
    put_tag(out, "WAVE");

    put_tag(out, "fmt ");
    put_u32(out, 16);
    put_u16(out, f32 ? kFormatFloat : kFormatPcm);
    put_u16(out, 1);  // mono
    put_u32(out, static_cast<uint32_t>(buf.sample_rate));
    put_u32(out, static_cast<uint32_t>(buf.sample_rate) * (bits / 8));
    put_u16(out, static_cast<uint16_t>(bits / 8));
    put_u16(out, bits);

    if (f32) {
        put_tag(out, "fact");
        put_u32(out, 4);
        put_u32(out, n);
    }

    put_tag(out, "data");
    put_u32(out, data_size);
    for (double s : buf.samples) {
        if (f32) {
            float fv = static_cast<float>(s);
            uint32_t u;
            std::memcpy(&u, &fv, sizeof(u));
            put_u32(out, u);
        } else {
            double scaled = std::round(s * 32768.0);
            scaled = std::clamp(scaled, -32768.0, 32767.0);
            put_u16(out, static_cast<uint16_t>(static_cast<int16_t>(scaled)));
        }
    }

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw FormatError("cannot write WAV file: " + path);
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!f) throw FormatError("short write on WAV file: " + path);
}

}  // namespace fagan
