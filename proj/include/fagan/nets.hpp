#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "fagan/audio.hpp"
#include "fagan/checkpoint.hpp"
#include "fagan/layers.hpp"
#include "fagan/losses.hpp"
#include "fagan/pqmf.hpp"
#include "fagan/stft.hpp"

namespace fagan::nets {

// stem conv -> AMP block -> two (twin) transposed-conv stages (stride 4
// each) -> AMP block -> output conv -> tanh. Total upsampling factor 16.
struct GeneratorConfig {
    std::array<int, 3> widths{32, 16, 8};
    int stem_kernel = 7;
    int up_kernel = 8;
    int out_kernel = 7;
    int amp_kernel = 3;
    std::vector<int> amp_dilations{1, 3, 5};
    int stride = 4;
    TwinMode twin_mode = TwinMode::ones;  // none selects the plain-tconv ablation
    uint64_t init_seed = 1;
};

class ToyGenerator {
public:
    explicit ToyGenerator(const GeneratorConfig& cfg);

    int upsample_factor() const { return cfg_.stride * cfg_.stride; }
    const GeneratorConfig& config() const { return cfg_; }

    // Input (1, n) -> output (1, n * upsample_factor()).
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& grad_out);

    AudioBuffer generate(const AudioBuffer& low_rate_input);

    std::vector<Tensor*> params();
    std::vector<NamedParam> named_params();
    void zero_grad();

private:
    GeneratorConfig cfg_;
    std::vector<std::pair<std::string, std::unique_ptr<Layer>>> stages_;
};

struct DiscOutput {
    Tensor score;                  // final score map
    std::vector<Tensor> features;  // ordered intermediate feature maps
};

struct DiscriminatorBankConfig {
    MultiResConfig spec_resolutions = MultiResConfig::defaults();
    int pqmf_bands = 12;
    int pqmf_taps = 96;
    int spec_channels = 8;   // width of the complex-spectrogram stacks
    int band_channels = 16;  // width of the sub-band stacks
    uint64_t init_seed = 77;
};

// One complex-spectrogram sub-discriminator: 5-layer strided 2-D conv stack
// over the stacked real/imaginary grids of one STFT resolution.
class SpecDiscriminator {
public:
    SpecDiscriminator(const StftConfig& cfg, int channels, uint64_t seed);

    DiscOutput forward(const AudioBuffer& x);
    // Backward from score (and optional per-feature) gradients to a gradient
    // over the waveform samples. Must follow the matching forward call.
    std::vector<double> backward(const Tensor& score_grad,
                                 const std::vector<Tensor>* feature_grads);

    std::vector<Tensor*> params();
    const StftConfig& stft_config() const { return cfg_; }

private:
    StftConfig cfg_;
    std::vector<std::unique_ptr<Layer>> layers_;  // conv,lrelu x4, final conv
    size_t input_len_ = 0;
};

// One sub-band discriminator: dilated 1-D conv stack over a PQMF band group.
class SubbandDiscriminator {
public:
    SubbandDiscriminator(int bands_in_group, int channels, uint64_t seed);

    DiscOutput forward(const SubbandSignals& group);
    Tensor backward_to_bands(const Tensor& score_grad,
                             const std::vector<Tensor>* feature_grads);

    std::vector<Tensor*> params();

private:
    std::vector<std::unique_ptr<Layer>> layers_;
    int bands_in_group_;
};

// Three multi-resolution global discriminators plus three sub-band local
// discriminators over the PQMF L/M/H groups.
class DiscriminatorBank {
public:
    explicit DiscriminatorBank(const DiscriminatorBankConfig& cfg);

    int count() const { return 6; }
    size_t min_input_len() const;  // largest STFT window

    // Forward of sub-discriminator n (0..2 global, 3..5 local).
    DiscOutput forward_one(int n, const AudioBuffer& x);
    // Gradient w.r.t. the waveform; must follow the matching forward_one.
    std::vector<double> backward_one(int n, const Tensor& score_grad,
                                     const std::vector<Tensor>* feature_grads);

    std::vector<DiscOutput> discriminate(const AudioBuffer& x);

    std::vector<Tensor*> params();
    std::vector<NamedParam> named_params();
    void zero_grad();
    const PqmfBank& pqmf() const { return pqmf_; }
    const DiscriminatorBankConfig& config() const { return cfg_; }

private:
    DiscriminatorBankConfig cfg_;
    PqmfBank pqmf_;
    BandGrouping grouping_;
    std::vector<std::unique_ptr<SpecDiscriminator>> global_;
    std::vector<std::unique_ptr<SubbandDiscriminator>> local_;
    size_t last_len_ = 0;
};

// Expected score-map time length of a strided stack (the shape oracle used
// in tests lives next to the stacks it validates).
int stride_chain_out_len(int len, const std::vector<int>& strides);

}  // namespace fagan::nets
