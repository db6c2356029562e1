#pragma once

#include <string>
#include <vector>

namespace fagan {

// Mono audio: dimensionless samples (nominal range [-1, 1]) at a fixed rate.
struct AudioBuffer {
    std::vector<double> samples;
    int sample_rate = 22050;

    size_t size() const { return samples.size(); }
    double duration_seconds() const {
        return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
    }
};

enum class WavFormat { pcm16, float32 };

// Throws std::invalid_argument on NaN/Inf samples or non-positive rate.
void validate(const AudioBuffer& buf);

// RIFF/WAVE reader for PCM-16 and IEEE float-32. Stereo is mixed down by
// averaging the channels. PCM-16 maps to [-1, 1) by division by 32768.
AudioBuffer load_wav(const std::string& path);

void save_wav(const AudioBuffer& buf, const std::string& path,
              WavFormat format = WavFormat::float32);

}  // namespace fagan
