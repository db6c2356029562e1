#pragma once

#include <vector>

#include "fagan/audio.hpp"
#include "fagan/stft.hpp"

namespace fagan {

// Per-term decomposition of the real/imaginary loss. When the reference is
// silent the relative term is undefined and total covers the L1 terms only.
struct RiLossBreakdown {
    double real_l1 = 0.0;
    double imag_l1 = 0.0;
    double magnitude_l1 = 0.0;
    double spectral_convergence = 0.0;
    double total = 0.0;
    bool sc_defined = true;
};

RiLossBreakdown ri_loss(const AudioBuffer& x, const AudioBuffer& xhat,
                        const StftConfig& cfg);

struct MultiResConfig {
    std::vector<StftConfig> resolutions;

    // Windows [2048, 1024, 512], hops [240, 120, 50], fft = window.
    static MultiResConfig defaults();
};

void validate(const MultiResConfig& mrc);

struct MrRiResult {
    double total = 0.0;
    std::vector<RiLossBreakdown> per_resolution;
};

// Mean over resolutions of the per-resolution totals.
MrRiResult mr_ri_loss(const AudioBuffer& x, const AudioBuffer& xhat,
                      const MultiResConfig& mrc);

// Mean absolute log-mel difference, 80 mels at 1024/1024/256.
double mel_loss(const AudioBuffer& x, const AudioBuffer& xhat);

struct AdvLosses {
    double d_loss = 0.0;
    double g_loss = 0.0;
};

// Least-squares GAN: d = sum_n [mean (1-Dn(x))^2 + mean Dn(y)^2],
// g = sum_n mean (1-Dn(y))^2. Score maps are paired per discriminator.
AdvLosses adversarial_losses(const std::vector<std::vector<double>>& real_scores,
                             const std::vector<std::vector<double>>& fake_scores);

// feats[discriminator][layer][cell]; mean over layers of mean |diff|,
// summed over discriminators.
double feature_matching_loss(
    const std::vector<std::vector<std::vector<double>>>& real_feats,
    const std::vector<std::vector<std::vector<double>>>& fake_feats);

struct LossWeights {
    double lambda_g = 1.0;
    double lambda_ri = 1.0;
    double lambda_mel = 45.0;
    double lambda_fm = 2.0;
};

void validate(const LossWeights& w);

double total_generator_loss(double adv_g, double mr_ri, double mel, double fm,
                            const LossWeights& w);
double total_discriminator_loss(double adv_d);

}  // namespace fagan
