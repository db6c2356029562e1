#include "fagan/nets.hpp"

#include <cmath>
#include <stdexcept>

#include "fagan/errors.hpp"

namespace fagan::nets {

namespace {

Tensor spec_to_tensor(const ComplexSpectrogram& spec) {
    Tensor t = Tensor::zeros3(2, spec.frames, spec.bins);
    for (int f = 0; f < spec.frames; ++f) {
        for (int b = 0; b < spec.bins; ++b) {
            t.at(0, f, b) = spec.re(f, b);
            t.at(1, f, b) = spec.im(f, b);
        }
    }
    return t;
}

}  // namespace

// ---------------------------------------------------------------------------
// ToyGenerator

ToyGenerator::ToyGenerator(const GeneratorConfig& cfg) : cfg_(cfg) {
    const int c1 = cfg.widths[0], c2 = cfg.widths[1], c3 = cfg.widths[2];

    LayerSpec stem;
    stem.kind = LayerKind::conv1d;
    stem.in_ch = 1;
    stem.out_ch = c1;
    stem.kernel_size = cfg.stem_kernel;
    stem.init_seed = cfg.init_seed;
    stages_.emplace_back("stem", make_layer(stem));

    stages_.emplace_back(
        "amp1", std::make_unique<AmpBlock>(c1, cfg.amp_kernel, cfg.amp_dilations,
                                           cfg.init_seed + 1000));

    auto up_spec = [&](int in, int out, uint64_t seed) {
        LayerSpec up;
        up.kind = cfg.twin_mode == TwinMode::none ? LayerKind::tconv1d
                                                  : LayerKind::twin_tconv1d;
        up.in_ch = in;
        up.out_ch = out;
        up.kernel_size = cfg.up_kernel;
        up.stride = cfg.stride;
        up.twin_mode = cfg.twin_mode;
        up.crop_to_stride_multiple = true;
        up.init_seed = seed;
        return up;
    };
    stages_.emplace_back("up1", make_layer(up_spec(c1, c2, cfg.init_seed + 2000)));
    stages_.emplace_back("up2", make_layer(up_spec(c2, c3, cfg.init_seed + 3000)));

    stages_.emplace_back(
        "amp2", std::make_unique<AmpBlock>(c3, cfg.amp_kernel, cfg.amp_dilations,
                                           cfg.init_seed + 4000));

    LayerSpec out;
    out.kind = LayerKind::conv1d;
    out.in_ch = c3;
    out.out_ch = 1;
    out.kernel_size = cfg.out_kernel;
    out.init_seed = cfg.init_seed + 5000;
    stages_.emplace_back("out", make_layer(out));
    stages_.emplace_back("tanh", make_layer({.kind = LayerKind::tanh_act}));
}

Tensor ToyGenerator::forward(const Tensor& x) {
    Tensor cur = x;
    for (auto& [name, layer] : stages_) cur = layer->forward(cur);
    return cur;
}

Tensor ToyGenerator::backward(const Tensor& grad_out) {
    Tensor g = grad_out;
    for (size_t s = stages_.size(); s-- > 0;) g = stages_[s].second->backward(g);
    return g;
}

AudioBuffer ToyGenerator::generate(const AudioBuffer& low_rate_input) {
    Tensor x = Tensor::zeros2(1, static_cast<int>(low_rate_input.samples.size()));
    for (size_t i = 0; i < low_rate_input.samples.size(); ++i) {
        x.at(0, static_cast<int>(i)) = low_rate_input.samples[i];
    }
    Tensor y = forward(x);
    AudioBuffer out;
    out.sample_rate = low_rate_input.sample_rate * upsample_factor();
    out.samples.assign(y.data.begin(), y.data.end());
    return out;
}

std::vector<Tensor*> ToyGenerator::params() {
    std::vector<Tensor*> out;
    for (auto& [name, layer] : stages_) {
        for (Tensor* p : layer->params()) out.push_back(p);
    }
    return out;
}

std::vector<NamedParam> ToyGenerator::named_params() {
    std::vector<NamedParam> out;
    for (auto& [name, layer] : stages_) {
        const std::vector<Tensor*> ps = layer->params();
        for (size_t i = 0; i < ps.size(); ++i) {
            const char* suffix = i % 2 == 0 ? "weight" : "bias";
            out.push_back({"gen." + name + "." + std::to_string(i / 2) + "." + suffix, ps[i]});
        }
    }
    return out;
}

void ToyGenerator::zero_grad() {
    for (Tensor* p : params()) p->zero_grad();
}

// ---------------------------------------------------------------------------
// SpecDiscriminator: conv2d + leaky_relu pairs, final conv2d score head.
// Feature taps are the post-activation outputs (layers at odd indices).

SpecDiscriminator::SpecDiscriminator(const StftConfig& cfg, int channels, uint64_t seed)
    : cfg_(cfg) {
    auto conv = [&](int in, int out, int kh, int kw, int sh, int sw, uint64_t s) {
        LayerSpec c;
        c.kind = LayerKind::conv2d;
        c.in_ch = in;
        c.out_ch = out;
        c.kernel_h = kh;
        c.kernel_w = kw;
        c.stride_h = sh;
        c.stride_w = sw;
        c.init_seed = s;
        return make_layer(c);
    };
    layers_.push_back(conv(2, channels, 3, 5, 1, 2, seed));
    layers_.push_back(make_layer({.kind = LayerKind::leaky_relu}));
    layers_.push_back(conv(channels, channels, 3, 5, 1, 2, seed + 1));
    layers_.push_back(make_layer({.kind = LayerKind::leaky_relu}));
    layers_.push_back(conv(channels, channels, 3, 5, 2, 2, seed + 2));
    layers_.push_back(make_layer({.kind = LayerKind::leaky_relu}));
    layers_.push_back(conv(channels, 2 * channels, 3, 5, 1, 2, seed + 3));
    layers_.push_back(make_layer({.kind = LayerKind::leaky_relu}));
    layers_.push_back(conv(2 * channels, 1, 3, 3, 1, 1, seed + 4));
}

DiscOutput SpecDiscriminator::forward(const AudioBuffer& x) {
    if (x.samples.size() < static_cast<size_t>(cfg_.window_size)) {
        throw std::invalid_argument("SpecDiscriminator: input shorter than window");
    }
    input_len_ = x.samples.size();
    Tensor cur = spec_to_tensor(stft(x, cfg_));
    DiscOutput out;
    for (size_t l = 0; l < layers_.size(); ++l) {
        cur = layers_[l]->forward(cur);
        if (l % 2 == 1) out.features.push_back(cur);
    }
    out.score = cur;
    return out;
}

std::vector<double> SpecDiscriminator::backward(const Tensor& score_grad,
                                                const std::vector<Tensor>* feature_grads) {
    Tensor g = score_grad;
    for (size_t l = layers_.size(); l-- > 0;) {
        if (l % 2 == 1 && feature_grads != nullptr) {
            const Tensor& fg = (*feature_grads)[l / 2];
            if (!fg.same_shape(g)) {
                throw std::invalid_argument("SpecDiscriminator: feature grad shape mismatch");
            }
            for (size_t i = 0; i < g.data.size(); ++i) g.data[i] += fg.data[i];
        }
        g = layers_[l]->backward(g);
    }
    const int frames = g.dims[1], bins = g.dims[2];
    std::vector<double> gr(static_cast<size_t>(frames) * bins), gi(gr.size());
    for (int f = 0; f < frames; ++f) {
        for (int b = 0; b < bins; ++b) {
            gr[static_cast<size_t>(f) * bins + b] = g.at(0, f, b);
            gi[static_cast<size_t>(f) * bins + b] = g.at(1, f, b);
        }
    }
    return stft_backward(gr, gi, cfg_, input_len_);
}

std::vector<Tensor*> SpecDiscriminator::params() {
    std::vector<Tensor*> out;
    for (auto& l : layers_) {
        for (Tensor* p : l->params()) out.push_back(p);
    }
    return out;
}

// ---------------------------------------------------------------------------
// SubbandDiscriminator: dilated conv1d + leaky_relu pairs over one band
// group, final conv1d score head.

SubbandDiscriminator::SubbandDiscriminator(int bands_in_group, int channels, uint64_t seed)
    : bands_in_group_(bands_in_group) {
    auto conv = [&](int in, int out, int k, int dilation, uint64_t s) {
        LayerSpec c;
        c.kind = LayerKind::conv1d;
        c.in_ch = in;
        c.out_ch = out;
        c.kernel_size = k;
        c.dilation = dilation;
        c.init_seed = s;
        return make_layer(c);
    };
    const int dilations[4] = {1, 2, 4, 8};
    int in = bands_in_group;
    for (int i = 0; i < 4; ++i) {
        layers_.push_back(conv(in, channels, 5, dilations[i], seed + static_cast<uint64_t>(i)));
        layers_.push_back(make_layer({.kind = LayerKind::leaky_relu}));
        in = channels;
    }
    layers_.push_back(conv(channels, 1, 3, 1, seed + 9));
}

DiscOutput SubbandDiscriminator::forward(const SubbandSignals& group) {
    if (static_cast<int>(group.bands.size()) != bands_in_group_) {
        throw std::invalid_argument("SubbandDiscriminator: group size mismatch");
    }
    const int len = static_cast<int>(group.bands[0].size());
    Tensor cur = Tensor::zeros2(bands_in_group_, len);
    for (int c = 0; c < bands_in_group_; ++c) {
        for (int i = 0; i < len; ++i) cur.at(c, i) = group.bands[static_cast<size_t>(c)][i];
    }
    DiscOutput out;
    for (size_t l = 0; l < layers_.size(); ++l) {
        cur = layers_[l]->forward(cur);
        if (l % 2 == 1) out.features.push_back(cur);
    }
    out.score = cur;
    return out;
}

Tensor SubbandDiscriminator::backward_to_bands(const Tensor& score_grad,
                                               const std::vector<Tensor>* feature_grads) {
    Tensor g = score_grad;
    for (size_t l = layers_.size(); l-- > 0;) {
        if (l % 2 == 1 && feature_grads != nullptr) {
            const Tensor& fg = (*feature_grads)[l / 2];
            if (!fg.same_shape(g)) {
                throw std::invalid_argument("SubbandDiscriminator: feature grad shape mismatch");
            }
            for (size_t i = 0; i < g.data.size(); ++i) g.data[i] += fg.data[i];
        }
        g = layers_[l]->backward(g);
    }
    return g;  // (bands_in_group, band_len)
}

std::vector<Tensor*> SubbandDiscriminator::params() {
    std::vector<Tensor*> out;
    for (auto& l : layers_) {
        for (Tensor* p : l->params()) out.push_back(p);
    }
    return out;
}

// ---------------------------------------------------------------------------
// DiscriminatorBank

DiscriminatorBank::DiscriminatorBank(const DiscriminatorBankConfig& cfg)
    : cfg_(cfg),
      pqmf_(design_pqmf(cfg.pqmf_bands, cfg.pqmf_taps)),
      grouping_(BandGrouping::equal_thirds(cfg.pqmf_bands)) {
    validate(cfg.spec_resolutions);
    uint64_t seed = cfg.init_seed;
    for (const StftConfig& res : cfg.spec_resolutions.resolutions) {
        global_.push_back(std::make_unique<SpecDiscriminator>(res, cfg.spec_channels, seed));
        seed += 100;
    }
    for (int g = 0; g < 3; ++g) {
        const BandRange& r = grouping_.ranges[static_cast<size_t>(g)];
        local_.push_back(
            std::make_unique<SubbandDiscriminator>(r.end - r.begin, cfg.band_channels, seed));
        seed += 100;
    }
}

size_t DiscriminatorBank::min_input_len() const {
    size_t len = 0;
    for (const auto& d : global_) {
        len = std::max(len, static_cast<size_t>(d->stft_config().window_size));
    }
    return len;
}

DiscOutput DiscriminatorBank::forward_one(int n, const AudioBuffer& x) {
    if (x.samples.size() < min_input_len()) {
        throw std::invalid_argument("DiscriminatorBank: input too short");
    }
    last_len_ = x.samples.size();
    if (n < 0 || n >= count()) throw std::invalid_argument("DiscriminatorBank: bad index");
    if (n < 3) return global_[static_cast<size_t>(n)]->forward(x);

    const SubbandSignals sb = pqmf_analysis(x, pqmf_);
    const GroupedSubbands groups = group_bands(sb, grouping_);
    const SubbandSignals* group =
        n == 3 ? &groups.low : (n == 4 ? &groups.mid : &groups.high);
    return local_[static_cast<size_t>(n - 3)]->forward(*group);
}

std::vector<double> DiscriminatorBank::backward_one(int n, const Tensor& score_grad,
                                                    const std::vector<Tensor>* feature_grads) {
    if (n < 0 || n >= count()) throw std::invalid_argument("DiscriminatorBank: bad index");
    if (n < 3) return global_[static_cast<size_t>(n)]->backward(score_grad, feature_grads);

    Tensor gb = local_[static_cast<size_t>(n - 3)]->backward_to_bands(score_grad, feature_grads);
    // Embed the group's band gradients into the full K-band layout.
    const BandRange& r = grouping_.ranges[static_cast<size_t>(n - 3)];
    const size_t band_len = static_cast<size_t>(gb.dims[1]);
    std::vector<std::vector<double>> grad_bands(
        static_cast<size_t>(cfg_.pqmf_bands), std::vector<double>(band_len, 0.0));
    for (int k = r.begin; k < r.end; ++k) {
        for (size_t i = 0; i < band_len; ++i) {
            grad_bands[static_cast<size_t>(k)][i] = gb.at(k - r.begin, static_cast<int>(i));
        }
    }
    return pqmf_analysis_backward(grad_bands, pqmf_, last_len_);
}

std::vector<DiscOutput> DiscriminatorBank::discriminate(const AudioBuffer& x) {
    std::vector<DiscOutput> out;
    out.reserve(static_cast<size_t>(count()));
    for (int n = 0; n < count(); ++n) out.push_back(forward_one(n, x));
    return out;
}

std::vector<Tensor*> DiscriminatorBank::params() {
    std::vector<Tensor*> out;
    for (auto& d : global_) {
        for (Tensor* p : d->params()) out.push_back(p);
    }
    for (auto& d : local_) {
        for (Tensor* p : d->params()) out.push_back(p);
    }
    return out;
}

std::vector<NamedParam> DiscriminatorBank::named_params() {
    std::vector<NamedParam> out;
    int idx = 0;
    for (auto& d : global_) {
        const std::vector<Tensor*> ps = d->params();
        for (size_t i = 0; i < ps.size(); ++i) {
            const char* suffix = i % 2 == 0 ? "weight" : "bias";
            out.push_back({"disc.global" + std::to_string(idx) + "." +
                               std::to_string(i / 2) + "." + suffix,
                           ps[i]});
        }
        ++idx;
    }
    idx = 0;
    for (auto& d : local_) {
        const std::vector<Tensor*> ps = d->params();
        for (size_t i = 0; i < ps.size(); ++i) {
            const char* suffix = i % 2 == 0 ? "weight" : "bias";
            out.push_back({"disc.local" + std::to_string(idx) + "." +
                               std::to_string(i / 2) + "." + suffix,
                           ps[i]});
        }
        ++idx;
    }
    return out;
}

void DiscriminatorBank::zero_grad() {
    for (Tensor* p : params()) p->zero_grad();
}

int stride_chain_out_len(int len, const std::vector<int>& strides) {
    int cur = len;
    for (int s : strides) cur = conv_out_len(cur, s);
    return cur;
}

}  // namespace fagan::nets
