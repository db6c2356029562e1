#include "fagan/mel.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "fagan/errors.hpp"

namespace fagan {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank mel_filterbank(int n_mels, int fft_size, int sample_rate, double fmin,
                             double fmax) {
    if (n_mels <= 0) throw std::invalid_argument("mel_filterbank: n_mels must be positive");
    if (!(fmin >= 0.0) || !(fmin < fmax) || fmax > sample_rate / 2.0) {
        throw std::invalid_argument("mel_filterbank: need 0 <= fmin < fmax <= rate/2");
    }
    const int bins = fft_size / 2 + 1;
    MelFilterbank fb;
    fb.n_mels = n_mels;
    fb.bins = bins;
    fb.weights.assign(static_cast<size_t>(n_mels) * bins, 0.0);

    const double mel_lo = hz_to_mel(fmin);
    const double mel_hi = hz_to_mel(fmax);
    std::vector<double> edges(static_cast<size_t>(n_mels) + 2);
    for (int i = 0; i < n_mels + 2; ++i) {
        edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (n_mels + 1));
    }

    fb.row_start.assign(static_cast<size_t>(n_mels), 0);
    fb.row_end.assign(static_cast<size_t>(n_mels), 0);
    for (int m = 0; m < n_mels; ++m) {
        const double left = edges[m], center = edges[m + 1], right = edges[m + 2];
        int first = -1, last = -1;
        for (int b = 0; b < bins; ++b) {
            const double f = static_cast<double>(b) * sample_rate / fft_size;
            double w = 0.0;
            if (f > left && f < right) {
                w = f <= center ? (f - left) / (center - left) : (right - f) / (right - center);
                if (first < 0) first = b;
                last = b;
            }
            fb.weights[static_cast<size_t>(m) * bins + b] = w;
        }
        fb.row_start[m] = first < 0 ? 0 : first;
        fb.row_end[m] = last < 0 ? 0 : last + 1;
    }
    return fb;
}

MelSpectrogram mel_spectrogram(const AudioBuffer& x, const StftConfig& cfg, int n_mels,
                               double fmin, double fmax) {
    if (fmax <= 0.0) fmax = x.sample_rate / 2.0;
    const MelFilterbank fb = mel_filterbank(n_mels, cfg.fft_size, x.sample_rate, fmin, fmax);
    const ComplexSpectrogram spec = stft(x, cfg);

    MelSpectrogram mel;
    mel.frames = spec.frames;
    mel.n_mels = n_mels;
    mel.fmin = fmin;
    mel.fmax = fmax;
    mel.values.resize(static_cast<size_t>(spec.frames) * n_mels);

    std::vector<double> mag(static_cast<size_t>(spec.bins));
    for (int f = 0; f < spec.frames; ++f) {
        for (int b = 0; b < spec.bins; ++b) {
            mag[b] = std::hypot(spec.re(f, b), spec.im(f, b));
        }
        for (int m = 0; m < n_mels; ++m) {
            const double* w = &fb.weights[static_cast<size_t>(m) * spec.bins];
            double acc = 0.0;
            for (int b = fb.row_start[m]; b < fb.row_end[m]; ++b) acc += w[b] * mag[b];
            mel.at(f, m) = std::log(std::max(acc, kMelLogFloor));
        }
    }
    return mel;
}

void write_mel_csv(const MelSpectrogram& mel, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw FormatError("cannot write CSV: " + path);
    char num[40];
    for (int f = 0; f < mel.frames; ++f) {
        for (int m = 0; m < mel.n_mels; ++m) {
            std::snprintf(num, sizeof(num), "%.9g", mel.at(f, m));
            out << num << (m + 1 < mel.n_mels ? "," : "");
        }
        out << '\n';
    }
}

}  // namespace fagan
