#pragma once

#include <string>

#include "fagan/stft.hpp"

namespace fagan {

// Binary PGM (P5) of the log-magnitude spectrogram: one column per frame,
// frequency ascending upward, dB mapped onto [0, 255] over db_range below
// the peak magnitude.
void write_spectrogram_pgm(const ComplexSpectrogram& spec, const std::string& path,
                           double db_range = 80.0);

}  // namespace fagan
