#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fagan/audio.hpp"
#include "fagan/losses.hpp"
#include "fagan/nets.hpp"

namespace fagan::nets {

enum class TrainMode { regression, adversarial };

// Toy task: map 16x-decimated synthetic signals back to full rate.
struct TrainConfig {
    TrainMode mode = TrainMode::regression;
    int steps = 2000;
    int batch = 8;
    int segment = 4096;  // full-rate samples per example (~0.19 s at 22050 Hz)
    double lr = 2e-4;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    uint64_t seed = 1234;
    bool use_mr_ri = true;            // ablation hook (Table-3 style)
    TwinMode twin_mode = TwinMode::ones;  // none = plain transposed conv ablation
    LossWeights weights;
    int train_segments = 48;
    int heldout_segments = 16;
    int sample_rate = 22050;

    static TrainConfig regression_defaults() { return {}; }
    static TrainConfig adversarial_defaults();
};

// Synthetic corpus: sums of 1-5 sinusoids/chirps with random phases and
// amplitudes, band-limited below the decimated Nyquist so the 16x
// downsample is exact. Tone probes are pure sinusoids for the high-band
// artifact comparison.
struct ToyDataset {
    std::vector<std::vector<double>> train;
    std::vector<std::vector<double>> heldout;
    std::vector<std::vector<double>> tone_probes;
    int sample_rate = 22050;
    int segment = 4096;
};

ToyDataset make_toy_dataset(int train_n, int heldout_n, int segment, int sample_rate,
                            uint64_t seed);

struct StepRecord {
    int step = 0;
    double total = 0.0;
    double mel = 0.0;
    double mr_ri = 0.0;
    double adv_g = 0.0;
    double adv_d = 0.0;
    double fm = 0.0;
};

struct HeldoutMetrics {
    double mel = 0.0;
    double mr_ri = 0.0;
    double lsd = 0.0;
    double lsd_high_tones = 0.0;  // top-third LSD on the tone probes
};

struct TrainingReport {
    std::vector<StepRecord> steps;
    double initial_heldout_mel = 0.0;
    HeldoutMetrics final_heldout;
    bool diverged = false;
    int diverged_step = -1;
};

struct TrainOutcome {
    TrainingReport report;
    std::shared_ptr<ToyGenerator> generator;
};

// Deterministic given the config; throws NumericError on divergence only if
// abort_on_divergence, otherwise reports it.
TrainOutcome train_toy(const TrainConfig& cfg);

// Heldout metrics of a generator against a dataset (used for ablation pairs).
HeldoutMetrics evaluate_heldout(ToyGenerator& gen, const ToyDataset& data);

void write_report_csv(const TrainingReport& report, const std::string& path);

}  // namespace fagan::nets
