#include "fagan/stft.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "fagan/errors.hpp"
#include "fagan/fft.hpp"

namespace fagan {

namespace {

// Reflection without edge duplication: index -1 maps to 1, len maps to len-2.
size_t mirror_index(long long t, size_t len) {
    if (len == 1) return 0;
    const long long period = 2 * (static_cast<long long>(len) - 1);
    long long m = t % period;
    if (m < 0) m += period;
    if (m >= static_cast<long long>(len)) m = period - m;
    return static_cast<size_t>(m);
}

std::vector<double> reflect_pad(const std::vector<double>& x, int pad) {
    std::vector<double> out(x.size() + 2 * static_cast<size_t>(pad));
    for (size_t i = 0; i < out.size(); ++i) {
        out[i] = x[mirror_index(static_cast<long long>(i) - pad, x.size())];
    }
    return out;
}

bool cola_ok(const StftConfig& cfg) {
    if (cfg.window == WindowKind::hann) return cfg.hop_size <= cfg.window_size / 2;
    return cfg.hop_size <= cfg.window_size;  // rectangular
}

}  // namespace

void validate(const StftConfig& cfg) {
    if (cfg.fft_size <= 0 || cfg.window_size <= 0 || cfg.hop_size <= 0) {
        throw std::invalid_argument("StftConfig: sizes must be positive");
    }
    if (cfg.hop_size > cfg.window_size || cfg.window_size > cfg.fft_size) {
        throw std::invalid_argument("StftConfig: need hop <= window <= fft");
    }
}

std::vector<double> make_window(WindowKind kind, int length) {
    std::vector<double> w(static_cast<size_t>(length), 1.0);
    if (kind == WindowKind::hann) {
        for (int n = 0; n < length; ++n) {
            w[n] = 0.5 * (1.0 - std::cos(2.0 * M_PI * n / length));
        }
    }
    return w;
}

int stft_frame_count(size_t signal_len, const StftConfig& cfg) {
    validate(cfg);
    size_t padded = signal_len + (cfg.center_padding ? static_cast<size_t>(cfg.window_size) : 0);
    if (padded < static_cast<size_t>(cfg.window_size)) {
        throw std::invalid_argument("stft: signal too short for window");
    }
    return 1 + static_cast<int>((padded - cfg.window_size) / cfg.hop_size);
}

ComplexSpectrogram stft(const AudioBuffer& x, const StftConfig& cfg) {
    validate(cfg);
    validate(x);
    const int pad = cfg.center_padding ? cfg.window_size / 2 : 0;
    std::vector<double> padded =
        cfg.center_padding ? reflect_pad(x.samples, pad) : x.samples;
    if (padded.size() < static_cast<size_t>(cfg.window_size)) {
        throw std::invalid_argument("stft: signal too short for window");
    }

    const int frames = 1 + static_cast<int>((padded.size() - cfg.window_size) / cfg.hop_size);
    const int bins = cfg.fft_size / 2 + 1;
    ComplexSpectrogram spec;
    spec.frames = frames;
    spec.bins = bins;
    spec.config = cfg;
    spec.sample_rate = x.sample_rate;
    spec.source_len = x.samples.size();
    spec.real.resize(spec.cells());
    spec.imag.resize(spec.cells());

    const std::vector<double> win = make_window(cfg.window, cfg.window_size);
    FftPlan plan(static_cast<size_t>(cfg.fft_size));
    std::vector<std::complex<double>> buf(static_cast<size_t>(cfg.fft_size));

    for (int f = 0; f < frames; ++f) {
        const size_t start = static_cast<size_t>(f) * cfg.hop_size;
        for (int n = 0; n < cfg.window_size; ++n) {
            buf[n] = {padded[start + n] * win[n], 0.0};
        }
        for (int n = cfg.window_size; n < cfg.fft_size; ++n) buf[n] = {0.0, 0.0};
        plan.forward(buf.data());
        for (int b = 0; b < bins; ++b) {
            spec.re(f, b) = buf[b].real();
            spec.im(f, b) = buf[b].imag();
        }
    }
    return spec;
}

AudioBuffer istft(const ComplexSpectrogram& spec) {
    const StftConfig& cfg = spec.config;
    validate(cfg);
    if (!cola_ok(cfg)) {
        throw std::invalid_argument("istft: config does not satisfy COLA");
    }
    if (spec.frames <= 0 || spec.bins != cfg.fft_size / 2 + 1) {
        throw std::invalid_argument("istft: inconsistent spectrogram shape");
    }

    const size_t out_len =
        static_cast<size_t>(spec.frames - 1) * cfg.hop_size + cfg.window_size;
    std::vector<double> acc(out_len, 0.0);
    std::vector<double> env(out_len, 0.0);

    const std::vector<double> win = make_window(cfg.window, cfg.window_size);
    FftPlan plan(static_cast<size_t>(cfg.fft_size));
    std::vector<std::complex<double>> buf(static_cast<size_t>(cfg.fft_size));

    for (int f = 0; f < spec.frames; ++f) {
        buf[0] = {spec.re(f, 0), spec.im(f, 0)};
        for (int b = 1; b < spec.bins - 1; ++b) {
            buf[b] = {spec.re(f, b), spec.im(f, b)};
            buf[cfg.fft_size - b] = std::conj(buf[b]);
        }
        buf[spec.bins - 1] = {spec.re(f, spec.bins - 1), spec.im(f, spec.bins - 1)};
        plan.inverse(buf.data());
        const size_t start = static_cast<size_t>(f) * cfg.hop_size;
        for (int n = 0; n < cfg.window_size; ++n) {
            acc[start + n] += buf[n].real() / cfg.fft_size * win[n];
            env[start + n] += win[n] * win[n];
        }
    }
    for (size_t i = 0; i < out_len; ++i) {
        acc[i] = env[i] > 1e-10 ? acc[i] / env[i] : 0.0;
    }

    const int pad = cfg.center_padding ? cfg.window_size / 2 : 0;
    size_t source_len = spec.source_len;
    if (source_len == 0) source_len = out_len - 2 * static_cast<size_t>(pad);

    AudioBuffer out;
    out.sample_rate = spec.sample_rate > 0 ? spec.sample_rate : 22050;
    out.samples.resize(source_len, 0.0);
    for (size_t i = 0; i < source_len; ++i) {
        size_t j = i + static_cast<size_t>(pad);
        if (j < out_len) out.samples[i] = acc[j];
    }
    return out;
}

std::vector<double> stft_backward(const std::vector<double>& grad_real,
                                  const std::vector<double>& grad_imag,
                                  const StftConfig& cfg, size_t source_len) {
    validate(cfg);
    const int pad = cfg.center_padding ? cfg.window_size / 2 : 0;
    const size_t padded_len = source_len + 2 * static_cast<size_t>(pad);
    if (padded_len < static_cast<size_t>(cfg.window_size)) {
        throw std::invalid_argument("stft_backward: signal too short for window");
    }
    const int frames = 1 + static_cast<int>((padded_len - cfg.window_size) / cfg.hop_size);
    const int bins = cfg.fft_size / 2 + 1;
    if (grad_real.size() != static_cast<size_t>(frames) * bins ||
        grad_imag.size() != grad_real.size()) {
        throw std::invalid_argument("stft_backward: gradient grid does not match framing");
    }

    const std::vector<double> win = make_window(cfg.window, cfg.window_size);
    FftPlan plan(static_cast<size_t>(cfg.fft_size));
    std::vector<std::complex<double>> buf(static_cast<size_t>(cfg.fft_size));
    std::vector<double> grad_padded(padded_len, 0.0);

    for (int f = 0; f < frames; ++f) {
        const size_t row = static_cast<size_t>(f) * bins;
        for (int b = 0; b < bins; ++b) {
            buf[b] = {grad_real[row + b], grad_imag[row + b]};
        }
        for (int b = bins; b < cfg.fft_size; ++b) buf[b] = {0.0, 0.0};
        // sum_k C[k] e^{+i 2 pi k n / N} is the unnormalized inverse transform
        plan.inverse(buf.data());
        const size_t start = static_cast<size_t>(f) * cfg.hop_size;
        for (int n = 0; n < cfg.window_size; ++n) {
            grad_padded[start + n] += win[n] * buf[n].real();
        }
    }

    // Adjoint of the reflect padding folds boundary gradients back inside.
    std::vector<double> grad(source_len, 0.0);
    for (size_t i = 0; i < padded_len; ++i) {
        grad[mirror_index(static_cast<long long>(i) - pad, source_len)] += grad_padded[i];
    }
    return grad;
}

void write_spectrogram_csv(const ComplexSpectrogram& spec, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw FormatError("cannot write CSV: " + path);
    char num[40];
    for (int f = 0; f < spec.frames; ++f) {
        for (int b = 0; b < spec.bins; ++b) {
            std::snprintf(num, sizeof(num), "%.9g", spec.re(f, b));
            out << num << ',';
        }
        for (int b = 0; b < spec.bins; ++b) {
            std::snprintf(num, sizeof(num), "%.9g", spec.im(f, b));
            out << num << (b + 1 < spec.bins ? "," : "");
        }
        out << '\n';
    }
}

}  // namespace fagan
