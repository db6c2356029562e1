#pragma once

#include <cstdint>
#include <vector>

#include "fagan/audio.hpp"

namespace fagan {

// Tone -> plain transposed conv vs twin deconvolution + low-pass, both at
// the full rate, with the image-energy comparison used by `upsample-demo`.
struct UpsampleDemoConfig {
    double tone_hz = 1000.0;
    int stride = 4;
    int sample_rate = 22050;
    double duration_sec = 0.5;
    uint64_t seed = 7;
    int kernel_len = 0;          // 0 -> 2 * stride
    double lowpass_cutoff = 0.0; // 0 -> 1 / (2 * stride)
    int lowpass_taps = 127;
};

struct UpsampleDemoResult {
    AudioBuffer plain;
    AudioBuffer twin;
    double plain_alias_db = 0.0;
    double twin_alias_db = 0.0;
    std::vector<double> image_freqs;
    std::vector<double> kernel;
};

UpsampleDemoResult run_upsample_demo(const UpsampleDemoConfig& cfg);

}  // namespace fagan
