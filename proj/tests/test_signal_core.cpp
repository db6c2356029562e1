#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>

#include "fagan/audio.hpp"
#include "fagan/errors.hpp"
#include "fagan/mel.hpp"
#include "fagan/rng.hpp"
#include "fagan/stft.hpp"
#include "test_util.hpp"

using namespace fagan;

namespace {

std::string temp_path(const std::string& name) {
    return std::string("fagan_test_") + name;
}

// Straight-line DFT of one windowed frame, the oracle for stft values.
std::vector<std::complex<double>> naive_frame_dft(const std::vector<double>& frame,
                                                  int fft_size) {
    std::vector<std::complex<double>> out(static_cast<size_t>(fft_size / 2 + 1));
    for (int k = 0; k <= fft_size / 2; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (size_t n = 0; n < frame.size(); ++n) {
            const double phi = -2.0 * M_PI * k * static_cast<double>(n) / fft_size;
            acc += frame[n] * std::complex<double>(std::cos(phi), std::sin(phi));
        }
        out[static_cast<size_t>(k)] = acc;
    }
    return out;
}

}  // namespace

TEST_CASE("wav pcm16 fixed-point mapping") {
    // Hand-built mono PCM-16 file with samples {0, 16384, -32768}.
    const std::string path = temp_path("pcm16.wav");
    {
        AudioBuffer b;
        b.sample_rate = 22050;
        b.samples = {0.0, 16384.0 / 32768.0, -1.0};
        save_wav(b, path, WavFormat::pcm16);
    }
    AudioBuffer r = load_wav(path);
    REQUIRE(r.samples.size() == 3);
    CHECK(r.samples[0] == doctest::Approx(0.0));
    CHECK(r.samples[1] == doctest::Approx(0.5));
    CHECK(r.samples[2] == doctest::Approx(-1.0));
    std::remove(path.c_str());
}

TEST_CASE("wav float32 round trip is exact") {
    AudioBuffer b = testutil::noise(0.05, 22050, 42);
    // Quantize to float-32 values first; those must survive bit-exactly.
    for (double& v : b.samples) v = static_cast<float>(v);
    const std::string path = temp_path("f32.wav");
    save_wav(b, path, WavFormat::float32);
    AudioBuffer r = load_wav(path);
    REQUIRE(r.samples.size() == b.samples.size());
    CHECK(r.sample_rate == b.sample_rate);
    for (size_t i = 0; i < b.samples.size(); ++i) {
        REQUIRE(r.samples[i] == b.samples[i]);
    }
    std::remove(path.c_str());
}

TEST_CASE("wav stereo mixdown averages channels") {
    // Hand-assembled stereo PCM-16 RIFF file.
    const int16_t left[] = {1000, -2000, 3000, 4000};
    const int16_t right[] = {3000, 2000, -3000, 0};
    const uint32_t frames = 4;
    std::vector<uint8_t> bytes;
    auto u32 = [&](uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<uint8_t>(v >> (8 * i)));
    };
    auto u16 = [&](uint16_t v) {
        bytes.push_back(static_cast<uint8_t>(v));
        bytes.push_back(static_cast<uint8_t>(v >> 8));
    };
    auto tag = [&](const char* t) { bytes.insert(bytes.end(), t, t + 4); };
    tag("RIFF");
    u32(36 + frames * 4);
    tag("WAVE");
    tag("fmt ");
    u32(16);
    u16(1);
    u16(2);  // stereo
    u32(44100);
    u32(44100 * 4);
    u16(4);
    u16(16);
    tag("data");
    u32(frames * 4);
    for (uint32_t f = 0; f < frames; ++f) {
        u16(static_cast<uint16_t>(left[f]));
        u16(static_cast<uint16_t>(right[f]));
    }
    const std::string path = temp_path("stereo.wav");
    {
        std::ofstream out(path, std::ios::binary);
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    }
    AudioBuffer r = load_wav(path);
    REQUIRE(r.samples.size() == frames);
    CHECK(r.sample_rate == 44100);
    for (uint32_t f = 0; f < frames; ++f) {
        const double want = (left[f] / 32768.0 + right[f] / 32768.0) / 2.0;
        CHECK(r.samples[f] == doctest::Approx(want).epsilon(1e-12));
    }
    std::remove(path.c_str());
}

TEST_CASE("wav loader rejects malformed input") {
    const std::string path = temp_path("bad.wav");
    {
        std::ofstream out(path, std::ios::binary);
        out << "not a riff file";
    }
    CHECK_THROWS_AS(load_wav(path), FormatError);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_wav("does_not_exist_anywhere.wav"), FormatError);
}

TEST_CASE("stft of zero signal is zero") {
    AudioBuffer b;
    b.sample_rate = 22050;
    b.samples.assign(4096, 0.0);
    StftConfig cfg;
    ComplexSpectrogram s = stft(b, cfg);
    CHECK(s.bins == cfg.fft_size / 2 + 1);
    for (size_t c = 0; c < s.cells(); ++c) {
        REQUIRE(s.real[c] == 0.0);
        REQUIRE(s.imag[c] == 0.0);
    }
}

TEST_CASE("stft frame count and shape contract") {
    StftConfig cfg;
    cfg.fft_size = 512;
    cfg.window_size = 512;
    cfg.hop_size = 128;
    cfg.center_padding = false;
    AudioBuffer b = testutil::noise(0.1, 22050, 3);
    const ComplexSpectrogram s = stft(b, cfg);
    const int expected = 1 + static_cast<int>((b.samples.size() - 512) / 128);
    CHECK(s.frames == expected);
    CHECK(s.bins == 257);

    cfg.center_padding = true;
    const ComplexSpectrogram sc = stft(b, cfg);
    CHECK(sc.frames == 1 + static_cast<int>((b.samples.size() + 512 - 512) / 128));
}

TEST_CASE("stft rejects too-short signals and bad configs") {
    StftConfig cfg;
    cfg.center_padding = false;
    AudioBuffer b = testutil::noise(0.01, 22050, 3);  // 220 samples < 1024
    CHECK_THROWS_AS(stft(b, cfg), std::invalid_argument);

    StftConfig bad;
    bad.hop_size = 0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = StftConfig{};
    bad.window_size = 2048;  // window > fft
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("impulse with rectangular window has flat magnitude") {
    StftConfig cfg;
    cfg.fft_size = 256;
    cfg.window_size = 256;
    cfg.hop_size = 64;
    cfg.window = WindowKind::rectangular;
    cfg.center_padding = false;
    AudioBuffer b;
    b.sample_rate = 22050;
    b.samples.assign(512, 0.0);
    b.samples[128] = 1.0;  // center of frame 1 (starts at 64)

    const ComplexSpectrogram s = stft(b, cfg);
    const int f = 1;
    const double want = 1.0;
    for (int k = 0; k < s.bins; ++k) {
        CHECK(std::hypot(s.re(f, k), s.im(f, k)) == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("tone at a bin center concentrates energy (vs naive DFT oracle)") {
    const int sr = 22050;
    StftConfig cfg;
    cfg.center_padding = false;
    const int k_target = 64;
    const double freq = static_cast<double>(k_target) * sr / cfg.fft_size;
    AudioBuffer b = testutil::tone(freq, 0.2, sr, 0.7);

    const ComplexSpectrogram s = stft(b, cfg);
    const std::vector<double> win = make_window(WindowKind::hann, cfg.window_size);

    // Oracle: straight-line DFT of the same windowed frame.
    const int frame = 2;
    std::vector<double> frame_data(static_cast<size_t>(cfg.window_size));
    for (int n = 0; n < cfg.window_size; ++n) {
        frame_data[static_cast<size_t>(n)] =
            b.samples[static_cast<size_t>(frame * cfg.hop_size + n)] * win[static_cast<size_t>(n)];
    }
    const auto oracle = naive_frame_dft(frame_data, cfg.fft_size);
    for (int k = 0; k < s.bins; ++k) {
        REQUIRE(s.re(frame, k) ==
                doctest::Approx(oracle[static_cast<size_t>(k)].real()).epsilon(1e-8));
        REQUIRE(s.im(frame, k) ==
                doctest::Approx(oracle[static_cast<size_t>(k)].imag()).epsilon(1e-8));
    }

    double total = 0.0, near = 0.0;
    for (int k = 0; k < s.bins; ++k) {
        const double e = s.re(frame, k) * s.re(frame, k) + s.im(frame, k) * s.im(frame, k);
        total += e;
        if (std::abs(k - k_target) <= 1) near += e;
    }
    CHECK(near / total >= 0.99);
}

TEST_CASE("stft is linear") {
    StftConfig cfg;
    AudioBuffer x = testutil::noise(0.1, 22050, 11);
    AudioBuffer y = testutil::noise(0.1, 22050, 12);
    const double a = 1.7, bq = -0.6;
    AudioBuffer mix = x;
    for (size_t i = 0; i < mix.samples.size(); ++i) {
        mix.samples[i] = a * x.samples[i] + bq * y.samples[i];
    }
    const ComplexSpectrogram sx = stft(x, cfg), sy = stft(y, cfg), sm = stft(mix, cfg);
    double num = 0.0, den = 0.0;
    for (size_t c = 0; c < sm.cells(); ++c) {
        const double er = sm.real[c] - (a * sx.real[c] + bq * sy.real[c]);
        const double ei = sm.imag[c] - (a * sx.imag[c] + bq * sy.imag[c]);
        num += er * er + ei * ei;
        den += sm.real[c] * sm.real[c] + sm.imag[c] * sm.imag[c];
    }
    CHECK(std::sqrt(num / den) <= 1e-9);
}

TEST_CASE("parseval consistency for rectangular window, hop = window") {
    StftConfig cfg;
    cfg.fft_size = 256;
    cfg.window_size = 256;
    cfg.hop_size = 256;
    cfg.window = WindowKind::rectangular;
    cfg.center_padding = false;
    AudioBuffer b = testutil::noise(0.1, 22050, 5);
    const ComplexSpectrogram s = stft(b, cfg);
    for (int f = 0; f < s.frames; ++f) {
        double frame_energy = 0.0;
        for (int n = 0; n < 256; ++n) {
            const double v = b.samples[static_cast<size_t>(f * 256 + n)];
            frame_energy += v * v;
        }
        // Onesided sum with Hermitian double-counting of interior bins.
        double spec_energy = 0.0;
        for (int k = 0; k < s.bins; ++k) {
            const double e = s.re(f, k) * s.re(f, k) + s.im(f, k) * s.im(f, k);
            spec_energy += (k == 0 || k == s.bins - 1) ? e : 2.0 * e;
        }
        REQUIRE(spec_energy ==
                doctest::Approx(256.0 * frame_energy).epsilon(1e-9));
    }
}

TEST_CASE("istft round trip") {
    StftConfig cfg;
    AudioBuffer b = testutil::noise(1.0, 22050, 17);
    const ComplexSpectrogram s = stft(b, cfg);
    const AudioBuffer r = istft(s);
    REQUIRE(r.samples.size() == b.samples.size());
    CHECK(testutil::rel_l2_error(b.samples, r.samples) <= 1e-6);

    double max_abs = 0.0;
    for (size_t i = 0; i < b.samples.size(); ++i) {
        max_abs = std::max(max_abs, std::fabs(b.samples[i] - r.samples[i]));
    }
    CHECK(max_abs <= 1e-6);
}

TEST_CASE("istft of zero spectrogram is zero; non-COLA rejected") {
    StftConfig cfg;
    ComplexSpectrogram s;
    s.frames = 8;
    s.bins = cfg.fft_size / 2 + 1;
    s.config = cfg;
    s.sample_rate = 22050;
    s.source_len = 1024;
    s.real.assign(s.cells(), 0.0);
    s.imag.assign(s.cells(), 0.0);
    const AudioBuffer r = istft(s);
    for (double v : r.samples) REQUIRE(v == 0.0);

    s.config.hop_size = 1024;  // hann with hop == window violates COLA here
    CHECK_THROWS_AS(istft(s), std::invalid_argument);
}

TEST_CASE("stft_backward is the adjoint of the R/I extraction") {
    StftConfig cfg;
    cfg.fft_size = 128;
    cfg.window_size = 128;
    cfg.hop_size = 32;
    AudioBuffer x = testutil::noise(0.02, 22050, 23);  // 441 samples
    const ComplexSpectrogram s = stft(x, cfg);

    Rng rng(99);
    std::vector<double> gr(s.cells()), gi(s.cells());
    for (double& v : gr) v = rng.uniform(-1.0, 1.0);
    for (double& v : gi) v = rng.uniform(-1.0, 1.0);
    std::vector<double> gx = stft_backward(gr, gi, cfg, x.samples.size());

    // <g, S(v)> must equal <S*(g), v> for a random direction v.
    std::vector<double> v(x.samples.size());
    for (double& w : v) w = rng.uniform(-1.0, 1.0);
    AudioBuffer xv;
    xv.sample_rate = x.sample_rate;
    xv.samples = v;
    const ComplexSpectrogram sv = stft(xv, cfg);
    double lhs = 0.0;
    for (size_t c = 0; c < sv.cells(); ++c) lhs += gr[c] * sv.real[c] + gi[c] * sv.imag[c];
    double rhs = 0.0;
    for (size_t i = 0; i < v.size(); ++i) rhs += gx[i] * v[i];
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("mel zero signal hits the log floor everywhere") {
    AudioBuffer b;
    b.sample_rate = 22050;
    b.samples.assign(4096, 0.0);
    StftConfig cfg;
    const MelSpectrogram m = mel_spectrogram(b, cfg, 80);
    CHECK(m.n_mels == 80);
    for (double v : m.values) REQUIRE(v == doctest::Approx(std::log(1e-5)));
}

TEST_CASE("mel gain shift law") {
    AudioBuffer x = testutil::noise(0.2, 22050, 31, 0.4);
    AudioBuffer gx = x;
    const double g = 3.5;
    for (double& v : gx.samples) v *= g;
    StftConfig cfg;
    const MelSpectrogram a = mel_spectrogram(x, cfg);
    const MelSpectrogram b = mel_spectrogram(gx, cfg);
    const double floor = std::log(1e-5);
    for (size_t i = 0; i < a.values.size(); ++i) {
        if (a.values[i] > floor + 1e-9 && b.values[i] > floor + 1e-9) {
            REQUIRE(b.values[i] - a.values[i] == doctest::Approx(std::log(g)).epsilon(1e-9));
        }
    }
}

TEST_CASE("mel filterbank row properties") {
    const MelFilterbank fb = mel_filterbank(80, 1024, 22050, 0.0, 11025.0);
    for (int m = 0; m < fb.n_mels; ++m) {
        double row_sum = 0.0;
        for (int b = 0; b < fb.bins; ++b) {
            REQUIRE(fb.at(m, b) >= 0.0);
            row_sum += fb.at(m, b);
        }
        REQUIRE(row_sum > 0.0);
    }
    // Adjacent filters overlap: some bin responds to both m and m+1.
    for (int m = 0; m + 1 < fb.n_mels; ++m) {
        bool overlap = false;
        for (int b = 0; b < fb.bins; ++b) {
            if (fb.at(m, b) > 0.0 && fb.at(m + 1, b) > 0.0) {
                overlap = true;
                break;
            }
        }
        REQUIRE(overlap);
    }
    CHECK_THROWS_AS(mel_filterbank(80, 1024, 22050, 8000.0, 4000.0), std::invalid_argument);
}

TEST_CASE("spectrogram csv export is deterministic") {
    AudioBuffer b = testutil::noise(0.05, 22050, 7);
    StftConfig cfg;
    cfg.fft_size = 256;
    cfg.window_size = 256;
    cfg.hop_size = 64;
    const ComplexSpectrogram s = stft(b, cfg);
    const std::string p1 = temp_path("spec1.csv"), p2 = temp_path("spec2.csv");
    write_spectrogram_csv(s, p1);
    write_spectrogram_csv(s, p2);
    std::ifstream f1(p1), f2(p2);
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
    CHECK(!s1.empty());
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}
