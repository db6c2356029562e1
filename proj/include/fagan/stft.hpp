#pragma once

#include <string>
#include <vector>

#include "fagan/audio.hpp"

namespace fagan {

enum class WindowKind { hann, rectangular };

struct StftConfig {
    int fft_size = 1024;
    int window_size = 1024;
    int hop_size = 256;
    WindowKind window = WindowKind::hann;
    bool center_padding = true;
};

// Throws std::invalid_argument unless 0 < hop <= window <= fft.
void validate(const StftConfig& cfg);

// Onesided complex spectrogram, frames x bins row-major, bins = fft/2 + 1.
struct ComplexSpectrogram {
    int frames = 0;
    int bins = 0;
    std::vector<double> real;
    std::vector<double> imag;
    StftConfig config;
    int sample_rate = 0;
    size_t source_len = 0;  // pre-padding signal length, for exact inversion

    double& re(int f, int b) { return real[static_cast<size_t>(f) * bins + b]; }
    double& im(int f, int b) { return imag[static_cast<size_t>(f) * bins + b]; }
    double re(int f, int b) const { return real[static_cast<size_t>(f) * bins + b]; }
    double im(int f, int b) const { return imag[static_cast<size_t>(f) * bins + b]; }
    size_t cells() const { return static_cast<size_t>(frames) * bins; }
};

// Window values; hann is the periodic variant (COLA at hop = window/4).
std::vector<double> make_window(WindowKind kind, int length);

// Frame count for a padded length: 1 + floor((padded - window) / hop).
int stft_frame_count(size_t signal_len, const StftConfig& cfg);

ComplexSpectrogram stft(const AudioBuffer& x, const StftConfig& cfg);

// Overlap-add inverse with window-squared normalization. Requires a
// COLA-friendly config: hann with hop <= window/2, or rectangular with
// hop <= window.
AudioBuffer istft(const ComplexSpectrogram& spec);

// Adjoint of the R/I extraction: maps per-cell gradients on the onesided
// real/imag grids back to a gradient over the source samples. grad_real and
// grad_imag are frames x bins row-major, matching stft(x, cfg) framing for a
// source of length source_len.
std::vector<double> stft_backward(const std::vector<double>& grad_real,
                                  const std::vector<double>& grad_imag,
                                  const StftConfig& cfg, size_t source_len);

// CSV export, one row per frame, 9 significant digits. For the complex
// spectrogram the row holds the real bins followed by the imaginary bins.
void write_spectrogram_csv(const ComplexSpectrogram& spec, const std::string& path);

}  // namespace fagan
