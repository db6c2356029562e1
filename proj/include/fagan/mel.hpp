#pragma once

#include <string>
#include <vector>

#include "fagan/audio.hpp"
#include "fagan/stft.hpp"

namespace fagan {

constexpr double kMelLogFloor = 1e-5;  // clamp before the natural log

// Log-mel energies, frames x n_mels row-major.
struct MelSpectrogram {
    int frames = 0;
    int n_mels = 0;
    std::vector<double> values;
    double fmin = 0.0;
    double fmax = 0.0;

    double& at(int f, int m) { return values[static_cast<size_t>(f) * n_mels + m]; }
    double at(int f, int m) const { return values[static_cast<size_t>(f) * n_mels + m]; }
};

// Triangular filters on the HTK mel scale, n_mels x bins row-major.
// row_start/row_end bound the nonzero support of each row.
struct MelFilterbank {
    int n_mels = 0;
    int bins = 0;
    std::vector<double> weights;
    std::vector<int> row_start;
    std::vector<int> row_end;

    double at(int m, int b) const { return weights[static_cast<size_t>(m) * bins + b]; }
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);

MelFilterbank mel_filterbank(int n_mels, int fft_size, int sample_rate, double fmin,
                             double fmax);

// fmax <= 0 selects sample_rate / 2.
MelSpectrogram mel_spectrogram(const AudioBuffer& x, const StftConfig& cfg,
                               int n_mels = 80, double fmin = 0.0, double fmax = 0.0);

void write_mel_csv(const MelSpectrogram& mel, const std::string& path);

}  // namespace fagan
