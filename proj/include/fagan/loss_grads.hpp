#pragma once

#include <vector>

#include "fagan/audio.hpp"
#include "fagan/losses.hpp"
#include "fagan/mel.hpp"
#include "fagan/stft.hpp"

namespace fagan {

// Precomputed reference-side quantities so a fixed target can be reused
// across many gradient evaluations.
struct RiTarget {
    ComplexSpectrogram spec;
    std::vector<double> mag;
    double frob = 0.0;
};

RiTarget make_ri_target(const AudioBuffer& x, const StftConfig& cfg);

struct RiGradResult {
    RiLossBreakdown breakdown;
    std::vector<double> grad;  // d total / d xhat[i]
};

RiGradResult ri_loss_with_grad(const RiTarget& target, const AudioBuffer& xhat);

struct MrRiTarget {
    std::vector<RiTarget> per_resolution;
};

MrRiTarget make_mr_ri_target(const AudioBuffer& x, const MultiResConfig& mrc);

struct MrRiGradResult {
    MrRiResult value;
    std::vector<double> grad;
};

MrRiGradResult mr_ri_loss_with_grad(const MrRiTarget& target, const AudioBuffer& xhat);

// Shared mel analysis state (config + filterbank), reusable across targets.
struct MelAnalyzer {
    StftConfig cfg;
    MelFilterbank fb;
    int sample_rate = 0;

    MelAnalyzer(int sample_rate, const StftConfig& cfg, int n_mels = 80);
    MelSpectrogram analyze(const AudioBuffer& x) const;
};

struct MelGradResult {
    double loss = 0.0;
    std::vector<double> grad;
};

MelGradResult mel_loss_with_grad(const MelAnalyzer& analyzer, const MelSpectrogram& target,
                                 const AudioBuffer& xhat);

}  // namespace fagan
