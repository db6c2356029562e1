#pragma once

#include <cstdint>
#include <string>

#include "fagan/audio.hpp"

namespace fagan {

// Seeded Gaussian noise scaled so the realized SNR matches the request.
// An infinite snr_db returns the input unchanged.
AudioBuffer add_noise(const AudioBuffer& x, double snr_db, uint64_t seed);

// Draws the SNR uniformly from [28, 40] dB, as used for training-data noise.
AudioBuffer add_noise_random_snr(const AudioBuffer& x, uint64_t seed,
                                 double* chosen_snr_db = nullptr);

// Windowed-sinc rational resampler (up L, down M).
AudioBuffer resample_rational(const AudioBuffer& x, int up, int down);

// Pitch/formant shift proxy: resample by 1/pitch_ratio, play back at the
// original rate, trim or zero-pad to the input length. Moves F0 and formants
// jointly.
AudioBuffer harmonic_shift(const AudioBuffer& x, double pitch_ratio);

// Lossy-codec proxy: low-pass at cutoff_hz then mu-law companding
// quantization at the given bit depth. cutoff_hz >= Nyquist disables the
// filter stage.
AudioBuffer lossy_compress_proxy(const AudioBuffer& x, double cutoff_hz = 8000.0,
                                 int bits = 8);

// External-codec hook: writes a temporary WAV, substitutes {input}/{output}
// in the command template, runs it through the shell, reads the result.
AudioBuffer codec_shell_hook(const AudioBuffer& x, const std::string& command_template,
                             const std::string& work_dir);

}  // namespace fagan
