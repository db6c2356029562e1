#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fagan/tensor.hpp"
#include "fagan/upsample.hpp"

namespace fagan::nets {

enum class LayerKind {
    conv1d,
    tconv1d,
    twin_tconv1d,
    conv2d,
    dense,
    snake,
    leaky_relu,
    tanh_act,
};

const char* layer_kind_name(LayerKind kind);

struct LayerSpec {
    LayerKind kind = LayerKind::conv1d;
    int in_ch = 1;
    int out_ch = 1;
    int kernel_size = 3;  // conv1d / tconv1d / dense ignore kernel_h/w
    int kernel_h = 3;
    int kernel_w = 3;
    int stride = 1;
    int stride_h = 1;
    int stride_w = 1;
    int dilation = 1;
    TwinMode twin_mode = TwinMode::ones;  // twin_tconv1d only
    bool crop_to_stride_multiple = false;  // tconv variants: crop to len*stride
    uint64_t init_seed = 1;
};

// One differentiable operation. forward caches what backward needs; backward
// consumes the upstream gradient, accumulates parameter gradients, and
// returns the input gradient.
class Layer {
public:
    virtual ~Layer() = default;
    virtual Tensor forward(const Tensor& x) = 0;
    virtual Tensor backward(const Tensor& grad_out) = 0;
    virtual std::vector<Tensor*> params() { return {}; }
    virtual const char* kind_name() const = 0;
};

std::unique_ptr<Layer> make_layer(const LayerSpec& spec);

// Residual stack of snake + dilated conv pairs over a fixed channel width.
class AmpBlock : public Layer {
public:
    AmpBlock(int channels, int kernel_size, const std::vector<int>& dilations,
             uint64_t init_seed);
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<Tensor*> params() override;
    const char* kind_name() const override { return "amp_block"; }

private:
    std::vector<std::unique_ptr<Layer>> snakes_;
    std::vector<std::unique_ptr<Layer>> convs_;
};

// Expected output length of a strided conv over `len` with same-ish padding.
inline int conv_out_len(int len, int stride) { return (len - 1) / stride + 1; }

}  // namespace fagan::nets
