#include "fagan/gradcheck.hpp"

#include <cmath>
#include <cstring>
#include <functional>

#include "fagan/loss_grads.hpp"
#include "fagan/nets.hpp"
#include "fagan/rng.hpp"

namespace fagan::nets {

namespace {

double rel_err(double a, double b) {
    return std::fabs(a - b) / std::max(1e-8, std::fabs(a) + std::fabs(b));
}

// Cells too close to an activation kink for central differences to be valid.
bool near_kink(const char* kind, double value, double eps) {
    if (std::strcmp(kind, "leaky_relu") == 0) return std::fabs(value) < 10.0 * eps;
    return false;
}

bool weight_near_kink(const char* kind, double value, double eps) {
    // |W| enters the abs_weight twin denominator.
    if (std::strcmp(kind, "twin_tconv1d") == 0) return std::fabs(value) < 10.0 * eps;
    return false;
}

Tensor random_like(const Tensor& shape, Rng& rng, double lo, double hi) {
    Tensor t = shape;
    for (double& v : t.data) v = rng.uniform(lo, hi);
    t.zero_grad();
    return t;
}

}  // namespace

double grad_check_layer(Layer& layer, const Tensor& input, uint64_t seed, double eps) {
    Rng rng(seed);
    Tensor x = input;

    // Scalar probe loss: sum(output * R) with fixed random R.
    Tensor y0 = layer.forward(x);
    Tensor probe = random_like(y0, rng, -1.0, 1.0);
    auto loss_at = [&](const Tensor& xin) {
        Tensor y = layer.forward(xin);
        double acc = 0.0;
        for (size_t i = 0; i < y.data.size(); ++i) acc += y.data[i] * probe.data[i];
        return acc;
    };

    for (Tensor* p : layer.params()) p->zero_grad();
    loss_at(x);  // refresh caches for backward
    Tensor gx = layer.backward(probe);

    double worst = 0.0;

    for (size_t i = 0; i < x.data.size(); ++i) {
        if (near_kink(layer.kind_name(), x.data[i], eps)) continue;
        const double orig = x.data[i];
        x.data[i] = orig + eps;
        const double lp = loss_at(x);
        x.data[i] = orig - eps;
        const double lm = loss_at(x);
        x.data[i] = orig;
        worst = std::max(worst, rel_err(gx.data[i], (lp - lm) / (2.0 * eps)));
    }

    for (Tensor* p : layer.params()) {
        for (size_t i = 0; i < p->data.size(); ++i) {
            if (weight_near_kink(layer.kind_name(), p->data[i], eps)) continue;
            const double orig = p->data[i];
            p->data[i] = orig + eps;
            const double lp = loss_at(x);
            p->data[i] = orig - eps;
            const double lm = loss_at(x);
            p->data[i] = orig;
            worst = std::max(worst, rel_err(p->grad[i], (lp - lm) / (2.0 * eps)));
        }
    }
    loss_at(x);  // restore caches to the unperturbed state
    return worst;
}

double grad_check_generator_ri(uint64_t seed, double eps) {
    Rng rng(seed);
    GeneratorConfig gcfg;
    gcfg.init_seed = seed;
    ToyGenerator gen(gcfg);

    const int out_len = 64;
    const int in_len = out_len / gen.upsample_factor();
    Tensor x = Tensor::zeros2(1, in_len);
    for (double& v : x.data) v = rng.uniform(-0.5, 0.5);
    x.zero_grad();

    AudioBuffer target;
    target.sample_rate = 22050;
    target.samples.resize(out_len);
    for (double& v : target.samples) v = rng.uniform(-0.5, 0.5);

    StftConfig head;
    head.fft_size = 64;
    head.window_size = 64;
    head.hop_size = 16;
    const RiTarget ri_target = make_ri_target(target, head);

    auto loss_at = [&]() {
        Tensor y = gen.forward(x);
        AudioBuffer yb;
        yb.sample_rate = 22050;
        yb.samples.assign(y.data.begin(), y.data.end());
        return ri_loss_with_grad(ri_target, yb);
    };

    gen.zero_grad();
    RiGradResult base = loss_at();
    Tensor gy = Tensor::zeros2(1, out_len);
    for (int i = 0; i < out_len; ++i) gy.at(0, i) = base.grad[static_cast<size_t>(i)];
    Tensor gx = gen.backward(gy);

    double worst = 0.0;
    for (size_t i = 0; i < x.data.size(); ++i) {
        const double orig = x.data[i];
        x.data[i] = orig + eps;
        const double lp = loss_at().breakdown.total;
        x.data[i] = orig - eps;
        const double lm = loss_at().breakdown.total;
        x.data[i] = orig;
        worst = std::max(worst, rel_err(gx.data[i], (lp - lm) / (2.0 * eps)));
    }
    for (Tensor* p : gen.params()) {
        for (size_t i = 0; i < p->data.size(); ++i) {
            const double orig = p->data[i];
            p->data[i] = orig + eps;
            const double lp = loss_at().breakdown.total;
            p->data[i] = orig - eps;
            const double lm = loss_at().breakdown.total;
            p->data[i] = orig;
            worst = std::max(worst, rel_err(p->grad[i], (lp - lm) / (2.0 * eps)));
        }
    }
    return worst;
}

double grad_check_ri_loss(uint64_t seed, double eps) {
    Rng rng(seed);
    const int n = 64;
    AudioBuffer x, xhat;
    x.sample_rate = xhat.sample_rate = 22050;
    x.samples.resize(n);
    xhat.samples.resize(n);
    for (double& v : x.samples) v = rng.uniform(-0.5, 0.5);
    for (double& v : xhat.samples) v = rng.uniform(-0.5, 0.5);

    StftConfig cfg;
    cfg.fft_size = 64;
    cfg.window_size = 64;
    cfg.hop_size = 16;
    const RiTarget target = make_ri_target(x, cfg);

    const RiGradResult base = ri_loss_with_grad(target, xhat);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const double orig = xhat.samples[static_cast<size_t>(i)];
        xhat.samples[static_cast<size_t>(i)] = orig + eps;
        const double lp = ri_loss_with_grad(target, xhat).breakdown.total;
        xhat.samples[static_cast<size_t>(i)] = orig - eps;
        const double lm = ri_loss_with_grad(target, xhat).breakdown.total;
        xhat.samples[static_cast<size_t>(i)] = orig;
        worst = std::max(worst, rel_err(base.grad[static_cast<size_t>(i)],
                                        (lp - lm) / (2.0 * eps)));
    }
    return worst;
}

double grad_check_mel_loss(uint64_t seed, double eps) {
    Rng rng(seed);
    const int n = 64;
    AudioBuffer x, xhat;
    x.sample_rate = xhat.sample_rate = 22050;
    x.samples.resize(n);
    xhat.samples.resize(n);
    for (double& v : x.samples) v = rng.uniform(-0.5, 0.5);
    for (double& v : xhat.samples) v = rng.uniform(-0.5, 0.5);

    StftConfig cfg;
    cfg.fft_size = 64;
    cfg.window_size = 64;
    cfg.hop_size = 16;
    const MelAnalyzer analyzer(x.sample_rate, cfg, 10);
    const MelSpectrogram target = analyzer.analyze(x);

    const MelGradResult base = mel_loss_with_grad(analyzer, target, xhat);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const double orig = xhat.samples[static_cast<size_t>(i)];
        xhat.samples[static_cast<size_t>(i)] = orig + eps;
        const double lp = mel_loss_with_grad(analyzer, target, xhat).loss;
        xhat.samples[static_cast<size_t>(i)] = orig - eps;
        const double lm = mel_loss_with_grad(analyzer, target, xhat).loss;
        xhat.samples[static_cast<size_t>(i)] = orig;
        worst = std::max(worst, rel_err(base.grad[static_cast<size_t>(i)],
                                        (lp - lm) / (2.0 * eps)));
    }
    return worst;
}

std::vector<GradCheckEntry> grad_check_suite(double eps) {
    std::vector<GradCheckEntry> out;
    constexpr int kSeeds = 20;

    auto check_kind = [&](const std::string& name,
                          const std::function<double(uint64_t)>& one) {
        double worst = 0.0;
        for (uint64_t s = 1; s <= kSeeds; ++s) worst = std::max(worst, one(s));
        out.push_back({name, worst});
    };

    check_kind("conv1d", [&](uint64_t s) {
        Rng rng(s * 7919);
        LayerSpec spec;
        spec.kind = LayerKind::conv1d;
        spec.in_ch = 2 + static_cast<int>(rng.uniform_int(3));
        spec.out_ch = 1 + static_cast<int>(rng.uniform_int(3));
        spec.kernel_size = 1 + 2 * static_cast<int>(rng.uniform_int(3));
        spec.stride = 1 + static_cast<int>(rng.uniform_int(2));
        spec.dilation = 1 + static_cast<int>(rng.uniform_int(3));
        spec.init_seed = s;
        auto layer = make_layer(spec);
        Tensor x = Tensor::zeros2(spec.in_ch, 8 + static_cast<int>(rng.uniform_int(9)));
        for (double& v : x.data) v = rng.uniform(-1.0, 1.0);
        return grad_check_layer(*layer, x, s, eps);
    });

    check_kind("tconv1d", [&](uint64_t s) {
        Rng rng(s * 7919 + 1);
        LayerSpec spec;
        spec.kind = LayerKind::tconv1d;
        spec.in_ch = 1 + static_cast<int>(rng.uniform_int(3));
        spec.out_ch = 1 + static_cast<int>(rng.uniform_int(3));
        spec.stride = 2 + static_cast<int>(rng.uniform_int(3));
        spec.kernel_size = spec.stride + 1 + static_cast<int>(rng.uniform_int(5));
        spec.crop_to_stride_multiple = rng.uniform() < 0.5;
        spec.init_seed = s;
        auto layer = make_layer(spec);
        Tensor x = Tensor::zeros2(spec.in_ch, 4 + static_cast<int>(rng.uniform_int(5)));
        for (double& v : x.data) v = rng.uniform(-1.0, 1.0);
        return grad_check_layer(*layer, x, s, eps);
    });

    check_kind("twin_tconv1d", [&](uint64_t s) {
        Rng rng(s * 7919 + 2);
        LayerSpec spec;
        spec.kind = LayerKind::twin_tconv1d;
        spec.in_ch = 1 + static_cast<int>(rng.uniform_int(3));
        spec.out_ch = 1 + static_cast<int>(rng.uniform_int(3));
        spec.stride = 2 + static_cast<int>(rng.uniform_int(3));
        spec.kernel_size = spec.stride + 1 + static_cast<int>(rng.uniform_int(5));
        spec.twin_mode = s % 2 == 0 ? TwinMode::ones : TwinMode::abs_weight;
        spec.crop_to_stride_multiple = rng.uniform() < 0.5;
        spec.init_seed = s;
        auto layer = make_layer(spec);
        Tensor x = Tensor::zeros2(spec.in_ch, 4 + static_cast<int>(rng.uniform_int(5)));
        for (double& v : x.data) v = rng.uniform(-1.0, 1.0);
        return grad_check_layer(*layer, x, s, eps);
    });

    check_kind("conv2d", [&](uint64_t s) {
        Rng rng(s * 7919 + 3);
        LayerSpec spec;
        spec.kind = LayerKind::conv2d;
        spec.in_ch = 1 + static_cast<int>(rng.uniform_int(2));
        spec.out_ch = 1 + static_cast<int>(rng.uniform_int(2));
        spec.kernel_h = 1 + 2 * static_cast<int>(rng.uniform_int(2));
        spec.kernel_w = 1 + 2 * static_cast<int>(rng.uniform_int(3));
        spec.stride_h = 1 + static_cast<int>(rng.uniform_int(2));
        spec.stride_w = 1 + static_cast<int>(rng.uniform_int(2));
        spec.init_seed = s;
        auto layer = make_layer(spec);
        Tensor x = Tensor::zeros3(spec.in_ch, 5 + static_cast<int>(rng.uniform_int(4)),
                                  6 + static_cast<int>(rng.uniform_int(5)));
        for (double& v : x.data) v = rng.uniform(-1.0, 1.0);
        return grad_check_layer(*layer, x, s, eps);
    });

    check_kind("dense", [&](uint64_t s) {
        Rng rng(s * 7919 + 4);
        LayerSpec spec;
        spec.kind = LayerKind::dense;
        spec.in_ch = 2 + static_cast<int>(rng.uniform_int(7));
        spec.out_ch = 1 + static_cast<int>(rng.uniform_int(7));
        spec.init_seed = s;
        auto layer = make_layer(spec);
        Tensor x = Tensor::zeros1(spec.in_ch);
        for (double& v : x.data) v = rng.uniform(-1.0, 1.0);
        return grad_check_layer(*layer, x, s, eps);
    });

    check_kind("snake", [&](uint64_t s) {
        Rng rng(s * 7919 + 5);
        auto layer = make_layer({.kind = LayerKind::snake});
        Tensor x = Tensor::zeros2(2, 16);
        for (double& v : x.data) v = rng.uniform(-4.0, 4.0);
        return grad_check_layer(*layer, x, s, eps);
    });

    check_kind("leaky_relu", [&](uint64_t s) {
        Rng rng(s * 7919 + 6);
        auto layer = make_layer({.kind = LayerKind::leaky_relu});
        Tensor x = Tensor::zeros2(2, 16);
        for (double& v : x.data) v = rng.uniform(-1.0, 1.0);
        return grad_check_layer(*layer, x, s, eps);
    });

    check_kind("tanh", [&](uint64_t s) {
        Rng rng(s * 7919 + 7);
        auto layer = make_layer({.kind = LayerKind::tanh_act});
        Tensor x = Tensor::zeros2(2, 16);
        for (double& v : x.data) v = rng.uniform(-2.0, 2.0);
        return grad_check_layer(*layer, x, s, eps);
    });

    out.push_back({"ri_loss_head", grad_check_ri_loss(11, eps)});
    out.push_back({"mel_loss_head", grad_check_mel_loss(12, eps)});
    out.push_back({"generator_ri_end_to_end", grad_check_generator_ri(5, eps)});
    return out;
}

}  // namespace fagan::nets
