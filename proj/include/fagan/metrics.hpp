#pragma once

#include <vector>

#include "fagan/audio.hpp"

namespace fagan {

// Frame-level pitch track; f0 > 0 iff the frame is voiced.
struct F0Track {
    std::vector<double> frame_times;
    std::vector<double> f0;
    std::vector<bool> voicing;
};

// YIN-style estimator: difference function with cumulative-mean
// normalization, threshold 0.15, parabolic interpolation, 50-1000 Hz.
F0Track estimate_f0(const AudioBuffer& x, double frame_sec = 0.025,
                    double hop_sec = 0.010);

struct F0RmseResult {
    double hz = 0.0;
    bool defined = true;  // false when the tracks share no voiced frames
};

F0RmseResult f0_rmse(const AudioBuffer& x, const AudioBuffer& xhat);

// Mel-cepstral distortion in dB: orthonormal DCT-II of the 80-band log-mel,
// coefficients 1..13, constant 10*sqrt(2)/ln 10.
double mcd(const AudioBuffer& x, const AudioBuffer& xhat);

// Log-spectral distance in log10 units, magnitudes floored at 1e-8.
double lsd(const AudioBuffer& x, const AudioBuffer& xhat);

// LSD restricted to the equal-thirds frequency ranges used by the sub-band
// grouping: low [0, fs/6), mid [fs/6, fs/3), high [fs/3, fs/2].
struct BandLsd {
    double full = 0.0;
    double low = 0.0;
    double mid = 0.0;
    double high = 0.0;
};

BandLsd banded_lsd(const AudioBuffer& x, const AudioBuffer& xhat);

// Energy near the listed image frequencies relative to the energy at the
// fundamental, in dB. Neighborhoods are +/-2 bins of one Hann-windowed DFT
// over the whole signal.
double aliasing_energy(const AudioBuffer& x, double fundamental_hz,
                       const std::vector<double>& image_hz);

struct MetricReport {
    double mcd = 0.0;
    double f0_rmse = 0.0;
    bool f0_defined = true;
    double lsd = 0.0;
    double lsd_low = 0.0;
    double lsd_mid = 0.0;
    double lsd_high = 0.0;
};

MetricReport compute_metrics(const AudioBuffer& ref, const AudioBuffer& gen);

}  // namespace fagan
