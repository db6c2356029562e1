#pragma once

#include <string>

#include "fagan/losses.hpp"
#include "fagan/stft.hpp"
#include "fagan/train.hpp"

namespace fagan {

// key=value run configuration (UTF-8, '#' comments). Unknown keys are
// rejected; values are validated against the module invariants at load.
struct RunConfig {
    int sample_rate = 22050;
    uint64_t seed = 1234;
    StftConfig stft;
    int mel_n_mels = 80;
    double mel_fmin = 0.0;
    double mel_fmax = 0.0;  // 0 selects sample_rate / 2
    int pqmf_k = 12;
    int pqmf_taps = 96;
    double pqmf_beta = 9.0;
    LossWeights weights;
    nets::TrainConfig train;

    static RunConfig from_text(const std::string& text);
    static RunConfig load(const std::string& path);

    // Every key with its effective value; re-loadable via from_text.
    std::string to_text() const;

    // Fill the pieces of train that mirror top-level settings.
    nets::TrainConfig train_config() const;
};

}  // namespace fagan
