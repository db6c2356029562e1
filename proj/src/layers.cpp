#include "fagan/layers.hpp"

#include <cmath>
#include <stdexcept>

#include "fagan/errors.hpp"
#include "fagan/rng.hpp"

namespace fagan::nets {

namespace {

Tensor init_weight3(int out_ch, int in_ch, int k, uint64_t seed) {
    Tensor w = Tensor::zeros3(out_ch, in_ch, k);
    Rng rng(seed);
    const double bound = 1.0 / std::sqrt(static_cast<double>(in_ch) * k);
    for (double& v : w.data) v = rng.uniform(-bound, bound);
    return w;
}

void expect_rank2(const Tensor& x, const char* who) {
    if (x.rank != 2) throw std::invalid_argument(std::string(who) + ": expected rank-2 input");
}

}  // namespace

const char* layer_kind_name(LayerKind kind) {
    switch (kind) {
        case LayerKind::conv1d: return "conv1d";
        case LayerKind::tconv1d: return "tconv1d";
        case LayerKind::twin_tconv1d: return "twin_tconv1d";
        case LayerKind::conv2d: return "conv2d";
        case LayerKind::dense: return "dense";
        case LayerKind::snake: return "snake";
        case LayerKind::leaky_relu: return "leaky_relu";
        case LayerKind::tanh_act: return "tanh";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Conv1d: same-ish zero padding, out_len = ceil(len / stride).

class Conv1dLayer : public Layer {
public:
    explicit Conv1dLayer(const LayerSpec& s)
        : in_ch_(s.in_ch), out_ch_(s.out_ch), k_(s.kernel_size), stride_(s.stride),
          dilation_(s.dilation),
          weight_(init_weight3(s.out_ch, s.in_ch, s.kernel_size, s.init_seed)),
          bias_(Tensor::zeros1(s.out_ch)) {
        if (k_ < 1 || stride_ < 1 || dilation_ < 1 || in_ch_ < 1 || out_ch_ < 1) {
            throw std::invalid_argument("conv1d: bad spec");
        }
    }

    Tensor forward(const Tensor& x) override {
        expect_rank2(x, "conv1d");
        if (x.dims[0] != in_ch_) throw std::invalid_argument("conv1d: channel mismatch");
        input_ = x;
        const int len = x.dims[1];
        const int out_len = conv_out_len(len, stride_);
        const int pad_left = dilation_ * (k_ - 1) / 2;
        pad_left_ = pad_left;
        Tensor y = Tensor::zeros2(out_ch_, out_len);
        for (int o = 0; o < out_ch_; ++o) {
            double* yrow = &y.at(o, 0);
            const double b = bias_.at(o);
            for (int j = 0; j < out_len; ++j) yrow[j] = b;
            for (int c = 0; c < in_ch_; ++c) {
                const double* xrow = &input_.at(c, 0);
                for (int t = 0; t < k_; ++t) {
                    const double w = weight_.at(o, c, t);
                    if (w == 0.0) continue;
                    const int off = t * dilation_ - pad_left;
                    // valid j range: 0 <= j*stride + off < len
                    int j_lo = off < 0 ? (-off + stride_ - 1) / stride_ : 0;
                    int j_hi = (len - 1 - off) / stride_;  // inclusive
                    if (j_hi >= out_len) j_hi = out_len - 1;
                    if (stride_ == 1) {
                        const double* src = xrow + off + j_lo;
                        for (int j = j_lo; j <= j_hi; ++j, ++src) yrow[j] += w * *src;
                    } else {
                        for (int j = j_lo; j <= j_hi; ++j) {
                            yrow[j] += w * xrow[j * stride_ + off];
                        }
                    }
                }
            }
        }
        check_finite(y, "conv1d");
        return y;
    }

    Tensor backward(const Tensor& g) override {
        const int len = input_.dims[1];
        const int out_len = g.dims[1];
        if (g.rank != 2 || g.dims[0] != out_ch_ || out_len != conv_out_len(len, stride_)) {
            throw std::invalid_argument("conv1d backward: shape mismatch");
        }
        Tensor gx = Tensor::zeros2(in_ch_, len);
        for (int o = 0; o < out_ch_; ++o) {
            const double* grow = &g.at(o, 0);
            double gb = 0.0;
            for (int j = 0; j < out_len; ++j) gb += grow[j];
            bias_.grad[static_cast<size_t>(o)] += gb;
            for (int c = 0; c < in_ch_; ++c) {
                const double* xrow = &input_.at(c, 0);
                double* gxrow = &gx.at(c, 0);
                for (int t = 0; t < k_; ++t) {
                    const int off = t * dilation_ - pad_left_;
                    int j_lo = off < 0 ? (-off + stride_ - 1) / stride_ : 0;
                    int j_hi = (len - 1 - off) / stride_;
                    if (j_hi >= out_len) j_hi = out_len - 1;
                    const double w = weight_.at(o, c, t);
                    double gw = 0.0;
                    if (stride_ == 1) {
                        const double* src = xrow + off + j_lo;
                        double* dst = gxrow + off + j_lo;
                        for (int j = j_lo; j <= j_hi; ++j, ++src, ++dst) {
                            gw += grow[j] * *src;
                            *dst += w * grow[j];
                        }
                    } else {
                        for (int j = j_lo; j <= j_hi; ++j) {
                            const int i = j * stride_ + off;
                            gw += grow[j] * xrow[i];
                            gxrow[i] += w * grow[j];
                        }
                    }
                    weight_.grad[(static_cast<size_t>(o) * in_ch_ + c) * k_ + t] += gw;
                }
            }
        }
        return gx;
    }

    std::vector<Tensor*> params() override { return {&weight_, &bias_}; }
    const char* kind_name() const override { return "conv1d"; }

private:
    int in_ch_, out_ch_, k_, stride_, dilation_;
    int pad_left_ = 0;
    Tensor weight_, bias_;
    Tensor input_;
};

// ---------------------------------------------------------------------------
// Plain transposed conv, optional centered crop to len*stride.

class TConv1dLayer : public Layer {
public:
    explicit TConv1dLayer(const LayerSpec& s)
        : in_ch_(s.in_ch), out_ch_(s.out_ch), k_(s.kernel_size), stride_(s.stride),
          crop_(s.crop_to_stride_multiple),
          weight_(init_weight3(s.out_ch, s.in_ch, s.kernel_size, s.init_seed)),
          bias_(Tensor::zeros1(s.out_ch)) {
        if (k_ < stride_ || stride_ < 1) throw std::invalid_argument("tconv1d: bad spec");
    }

    Tensor forward(const Tensor& x) override {
        expect_rank2(x, "tconv1d");
        if (x.dims[0] != in_ch_) throw std::invalid_argument("tconv1d: channel mismatch");
        input_ = x;
        const int len = x.dims[1];
        const int full = (len - 1) * stride_ + k_;
        Tensor yf = Tensor::zeros2(out_ch_, full);
        for (int o = 0; o < out_ch_; ++o) {
            double* yrow = &yf.at(o, 0);
            for (int c = 0; c < in_ch_; ++c) {
                const double* xrow = &input_.at(c, 0);
                const double* wrow = &weight_.at(o, c, 0);
                for (int i = 0; i < len; ++i) {
                    const double v = xrow[i];
                    double* dst = yrow + i * stride_;
                    for (int t = 0; t < k_; ++t) dst[t] += v * wrow[t];
                }
            }
        }
        return finish(yf, len);
    }

    Tensor backward(const Tensor& g) override {
        const int len = input_.dims[1];
        const int full = (len - 1) * stride_ + k_;
        Tensor gf = expand(g, len, full);
        Tensor gx = Tensor::zeros2(in_ch_, len);
        for (int o = 0; o < out_ch_; ++o) {
            const double* grow = &gf.at(o, 0);
            double gb = 0.0;
            for (int j = 0; j < full; ++j) gb += grow[j];
            bias_.grad[static_cast<size_t>(o)] += gb;
            for (int c = 0; c < in_ch_; ++c) {
                const double* xrow = &input_.at(c, 0);
                double* gxrow = &gx.at(c, 0);
                double* gwrow = &weight_.grad[(static_cast<size_t>(o) * in_ch_ + c) * k_];
                for (int i = 0; i < len; ++i) {
                    const double* gsrc = grow + i * stride_;
                    const double* wrow = &weight_.at(o, c, 0);
                    double acc = 0.0;
                    const double v = xrow[i];
                    for (int t = 0; t < k_; ++t) {
                        acc += gsrc[t] * wrow[t];
                        gwrow[t] += gsrc[t] * v;
                    }
                    gxrow[i] += acc;
                }
            }
        }
        return gx;
    }

    std::vector<Tensor*> params() override { return {&weight_, &bias_}; }
    const char* kind_name() const override { return "tconv1d"; }

private:
    Tensor finish(Tensor& yf, int len) {
        const int full = (len - 1) * stride_ + k_;
        if (!crop_) {
            for (int o = 0; o < out_ch_; ++o) {
                const double b = bias_.at(o);
                for (int j = 0; j < full; ++j) yf.at(o, j) += b;
            }
            check_finite(yf, "tconv1d");
            return yf;
        }
        const int out_len = len * stride_;
        const int offset = (full - out_len) / 2;
        crop_offset_ = offset;
        Tensor y = Tensor::zeros2(out_ch_, out_len);
        for (int o = 0; o < out_ch_; ++o) {
            const double b = bias_.at(o);
            for (int j = 0; j < out_len; ++j) y.at(o, j) = yf.at(o, j + offset) + b;
        }
        check_finite(y, "tconv1d");
        return y;
    }

    // Re-embed the (possibly cropped) upstream grad into the full grid.
    Tensor expand(const Tensor& g, int len, int full) {
        if (!crop_) {
            if (g.dims[1] != full) throw std::invalid_argument("tconv1d backward: shape");
            return g;
        }
        if (g.dims[1] != len * stride_) {
            throw std::invalid_argument("tconv1d backward: shape");
        }
        Tensor gf = Tensor::zeros2(out_ch_, full);
        for (int o = 0; o < out_ch_; ++o) {
            for (int j = 0; j < g.dims[1]; ++j) gf.at(o, j + crop_offset_) = g.at(o, j);
        }
        return gf;
    }

    int in_ch_, out_ch_, k_, stride_;
    bool crop_;
    int crop_offset_ = 0;
    Tensor weight_, bias_;
    Tensor input_;
};

// ---------------------------------------------------------------------------
// Twin transposed conv: numerator branch divided by an overlap branch.
// `ones` mode: denominator is the input/weight independent overlap count and
// is treated as a constant in backward. `abs_weight`: denominator depends on
// |W| and is differentiated with subgradient 0 at W == 0.

class TwinTConv1dLayer : public Layer {
public:
    explicit TwinTConv1dLayer(const LayerSpec& s)
        : in_ch_(s.in_ch), out_ch_(s.out_ch), k_(s.kernel_size), stride_(s.stride),
          mode_(s.twin_mode), crop_(s.crop_to_stride_multiple),
          weight_(init_weight3(s.out_ch, s.in_ch, s.kernel_size, s.init_seed)),
          bias_(Tensor::zeros1(s.out_ch)) {
        if (k_ < stride_ || stride_ < 1) throw std::invalid_argument("twin_tconv1d: bad spec");
        if (mode_ == TwinMode::none) {
            throw std::invalid_argument("twin_tconv1d: twin_mode must not be none");
        }
    }

    Tensor forward(const Tensor& x) override {
        expect_rank2(x, "twin_tconv1d");
        if (x.dims[0] != in_ch_) throw std::invalid_argument("twin_tconv1d: channel mismatch");
        input_ = x;
        const int len = x.dims[1];
        const int full = (len - 1) * stride_ + k_;

        num_ = Tensor::zeros2(out_ch_, full);
        for (int o = 0; o < out_ch_; ++o) {
            double* yrow = &num_.at(o, 0);
            for (int c = 0; c < in_ch_; ++c) {
                const double* xrow = &input_.at(c, 0);
                const double* wrow = &weight_.at(o, c, 0);
                for (int i = 0; i < len; ++i) {
                    const double v = xrow[i];
                    double* dst = yrow + i * stride_;
                    for (int t = 0; t < k_; ++t) dst[t] += v * wrow[t];
                }
            }
        }

        den_ = mode_ == TwinMode::ones ? Tensor::zeros2(1, full)
                                       : Tensor::zeros2(out_ch_, full);
        if (mode_ == TwinMode::ones) {
            double* drow = &den_.at(0, 0);
            for (int i = 0; i < len; ++i) {
                for (int t = 0; t < k_; ++t) drow[i * stride_ + t] += 1.0;
            }
        } else {
            for (int o = 0; o < out_ch_; ++o) {
                double* drow = &den_.at(o, 0);
                for (int c = 0; c < in_ch_; ++c) {
                    const double* wrow = &weight_.at(o, c, 0);
                    for (int i = 0; i < len; ++i) {
                        double* dst = drow + i * stride_;
                        for (int t = 0; t < k_; ++t) dst[t] += std::fabs(wrow[t]);
                    }
                }
            }
        }
        for (double v : den_.data) {
            if (v < 1e-12) throw NumericError("twin_tconv1d: degenerate denominator");
        }

        quot_ = Tensor::zeros2(out_ch_, full);
        for (int o = 0; o < out_ch_; ++o) {
            const double* drow = mode_ == TwinMode::ones ? &den_.at(0, 0) : &den_.at(o, 0);
            for (int j = 0; j < full; ++j) {
                quot_.at(o, j) = num_.at(o, j) / drow[j];
            }
        }

        const int out_len = crop_ ? len * stride_ : full;
        crop_offset_ = crop_ ? (full - out_len) / 2 : 0;
        Tensor y = Tensor::zeros2(out_ch_, out_len);
        for (int o = 0; o < out_ch_; ++o) {
            const double b = bias_.at(o);
            for (int j = 0; j < out_len; ++j) y.at(o, j) = quot_.at(o, j + crop_offset_) + b;
        }
        check_finite(y, "twin_tconv1d");
        return y;
    }

    Tensor backward(const Tensor& g) override {
        const int len = input_.dims[1];
        const int full = (len - 1) * stride_ + k_;
        const int out_len = crop_ ? len * stride_ : full;
        if (g.rank != 2 || g.dims[0] != out_ch_ || g.dims[1] != out_len) {
            throw std::invalid_argument("twin_tconv1d backward: shape mismatch");
        }

        // Upstream grad on the full (uncropped) quotient grid.
        Tensor gq = Tensor::zeros2(out_ch_, full);
        for (int o = 0; o < out_ch_; ++o) {
            double gb = 0.0;
            for (int j = 0; j < out_len; ++j) {
                gq.at(o, j + crop_offset_) = g.at(o, j);
                gb += g.at(o, j);
            }
            bias_.grad[static_cast<size_t>(o)] += gb;
        }

        // Numerator path: gnum = gq / den.
        Tensor gnum = Tensor::zeros2(out_ch_, full);
        for (int o = 0; o < out_ch_; ++o) {
            const double* drow = mode_ == TwinMode::ones ? &den_.at(0, 0) : &den_.at(o, 0);
            for (int j = 0; j < full; ++j) gnum.at(o, j) = gq.at(o, j) / drow[j];
        }

        Tensor gx = Tensor::zeros2(in_ch_, len);
        for (int o = 0; o < out_ch_; ++o) {
            const double* grow = &gnum.at(o, 0);
            for (int c = 0; c < in_ch_; ++c) {
                const double* xrow = &input_.at(c, 0);
                double* gxrow = &gx.at(c, 0);
                double* gwrow = &weight_.grad[(static_cast<size_t>(o) * in_ch_ + c) * k_];
                const double* wrow = &weight_.at(o, c, 0);
                for (int i = 0; i < len; ++i) {
                    const double* gsrc = grow + i * stride_;
                    const double v = xrow[i];
                    double acc = 0.0;
                    for (int t = 0; t < k_; ++t) {
                        acc += gsrc[t] * wrow[t];
                        gwrow[t] += gsrc[t] * v;
                    }
                    gxrow[i] += acc;
                }
            }
        }

        if (mode_ == TwinMode::abs_weight) {
            // Denominator path: d depends on |W| only.
            Tensor gden = Tensor::zeros2(out_ch_, full);
            for (int o = 0; o < out_ch_; ++o) {
                const double* drow = &den_.at(o, 0);
                for (int j = 0; j < full; ++j) {
                    const double d = drow[j];
                    gden.at(o, j) = -gq.at(o, j) * num_.at(o, j) / (d * d);
                }
            }
            for (int o = 0; o < out_ch_; ++o) {
                const double* grow = &gden.at(o, 0);
                for (int c = 0; c < in_ch_; ++c) {
                    const double* wrow = &weight_.at(o, c, 0);
                    double* gwrow = &weight_.grad[(static_cast<size_t>(o) * in_ch_ + c) * k_];
                    for (int t = 0; t < k_; ++t) {
                        const double w = wrow[t];
                        if (w == 0.0) continue;  // subgradient 0 at exact zero
                        double acc = 0.0;
                        for (int i = 0; i < len; ++i) acc += grow[i * stride_ + t];
                        gwrow[t] += (w > 0.0 ? acc : -acc);
                    }
                }
            }
        }
        return gx;
    }

    std::vector<Tensor*> params() override { return {&weight_, &bias_}; }
    const char* kind_name() const override { return "twin_tconv1d"; }

private:
    int in_ch_, out_ch_, k_, stride_;
    TwinMode mode_;
    bool crop_;
    int crop_offset_ = 0;
    Tensor weight_, bias_;
    Tensor input_, num_, den_, quot_;
};

// ---------------------------------------------------------------------------
// Conv2d with same-ish zero padding; weight stored as (out_ch, in_ch, kh*kw).

class Conv2dLayer : public Layer {
public:
    explicit Conv2dLayer(const LayerSpec& s)
        : in_ch_(s.in_ch), out_ch_(s.out_ch), kh_(s.kernel_h), kw_(s.kernel_w),
          sh_(s.stride_h), sw_(s.stride_w),
          weight_(init_weight3(s.out_ch, s.in_ch, s.kernel_h * s.kernel_w, s.init_seed)),
          bias_(Tensor::zeros1(s.out_ch)) {
        if (kh_ < 1 || kw_ < 1 || sh_ < 1 || sw_ < 1) {
            throw std::invalid_argument("conv2d: bad spec");
        }
    }

    Tensor forward(const Tensor& x) override {
        if (x.rank != 3) throw std::invalid_argument("conv2d: expected rank-3 input");
        if (x.dims[0] != in_ch_) throw std::invalid_argument("conv2d: channel mismatch");
        input_ = x;
        const int h = x.dims[1], w = x.dims[2];
        const int oh = conv_out_len(h, sh_), ow = conv_out_len(w, sw_);
        const int ph = (kh_ - 1) / 2, pw = (kw_ - 1) / 2;
        ph_ = ph;
        pw_ = pw;
        Tensor y = Tensor::zeros3(out_ch_, oh, ow);
        for (int o = 0; o < out_ch_; ++o) {
            const double b = bias_.at(o);
            for (int i = 0; i < oh; ++i) {
                for (int j = 0; j < ow; ++j) y.at(o, i, j) = b;
            }
            for (int c = 0; c < in_ch_; ++c) {
                for (int u = 0; u < kh_; ++u) {
                    for (int v = 0; v < kw_; ++v) {
                        const double wt = weight_.at(o, c, u * kw_ + v);
                        if (wt == 0.0) continue;
                        for (int i = 0; i < oh; ++i) {
                            const int src_i = i * sh_ + u - ph;
                            if (src_i < 0 || src_i >= h) continue;
                            const double* xrow = &input_.at(c, src_i, 0);
                            double* yrow = &y.at(o, i, 0);
                            const int off = v - pw;
                            int j_lo = off < 0 ? (-off + sw_ - 1) / sw_ : 0;
                            int j_hi = (w - 1 - off) / sw_;
                            if (j_hi >= ow) j_hi = ow - 1;
                            if (sw_ == 1) {
                                const double* src = xrow + off + j_lo;
                                for (int j = j_lo; j <= j_hi; ++j, ++src) yrow[j] += wt * *src;
                            } else {
                                for (int j = j_lo; j <= j_hi; ++j) {
                                    yrow[j] += wt * xrow[j * sw_ + off];
                                }
                            }
                        }
                    }
                }
            }
        }
        check_finite(y, "conv2d");
        return y;
    }

    Tensor backward(const Tensor& g) override {
        const int h = input_.dims[1], w = input_.dims[2];
        const int oh = conv_out_len(h, sh_), ow = conv_out_len(w, sw_);
        if (g.rank != 3 || g.dims[0] != out_ch_ || g.dims[1] != oh || g.dims[2] != ow) {
            throw std::invalid_argument("conv2d backward: shape mismatch");
        }
        Tensor gx = Tensor::zeros3(in_ch_, h, w);
        for (int o = 0; o < out_ch_; ++o) {
            double gb = 0.0;
            for (int i = 0; i < oh; ++i) {
                for (int j = 0; j < ow; ++j) gb += g.at(o, i, j);
            }
            bias_.grad[static_cast<size_t>(o)] += gb;
            for (int c = 0; c < in_ch_; ++c) {
                for (int u = 0; u < kh_; ++u) {
                    for (int v = 0; v < kw_; ++v) {
                        const double wt = weight_.at(o, c, u * kw_ + v);
                        double gw = 0.0;
                        for (int i = 0; i < oh; ++i) {
                            const int src_i = i * sh_ + u - ph_;
                            if (src_i < 0 || src_i >= h) continue;
                            const double* xrow = &input_.at(c, src_i, 0);
                            double* gxrow = &gx.at(c, src_i, 0);
                            const double* grow = &g.at(o, i, 0);
                            const int off = v - pw_;
                            int j_lo = off < 0 ? (-off + sw_ - 1) / sw_ : 0;
                            int j_hi = (w - 1 - off) / sw_;
                            if (j_hi >= ow) j_hi = ow - 1;
                            for (int j = j_lo; j <= j_hi; ++j) {
                                const int src_j = j * sw_ + off;
                                gw += grow[j] * xrow[src_j];
                                gxrow[src_j] += wt * grow[j];
                            }
                        }
                        weight_.grad[(static_cast<size_t>(o) * in_ch_ + c) * (kh_ * kw_) +
                                     u * kw_ + v] += gw;
                    }
                }
            }
        }
        return gx;
    }

    std::vector<Tensor*> params() override { return {&weight_, &bias_}; }
    const char* kind_name() const override { return "conv2d"; }

private:
    int in_ch_, out_ch_, kh_, kw_, sh_, sw_;
    int ph_ = 0, pw_ = 0;
    Tensor weight_, bias_;
    Tensor input_;
};

// ---------------------------------------------------------------------------

class DenseLayer : public Layer {
public:
    explicit DenseLayer(const LayerSpec& s)
        : in_(s.in_ch), out_(s.out_ch), bias_(Tensor::zeros1(s.out_ch)) {
        weight_ = Tensor::zeros2(out_, in_);
        Rng rng(s.init_seed);
        const double bound = 1.0 / std::sqrt(static_cast<double>(in_));
        for (double& v : weight_.data) v = rng.uniform(-bound, bound);
    }

    Tensor forward(const Tensor& x) override {
        if (x.rank != 1 || x.dims[0] != in_) throw std::invalid_argument("dense: shape");
        input_ = x;
        Tensor y = Tensor::zeros1(out_);
        for (int o = 0; o < out_; ++o) {
            double acc = bias_.at(o);
            for (int i = 0; i < in_; ++i) acc += weight_.at(o, i) * x.at(i);
            y.at(o) = acc;
        }
        check_finite(y, "dense");
        return y;
    }

    Tensor backward(const Tensor& g) override {
        if (g.rank != 1 || g.dims[0] != out_) throw std::invalid_argument("dense backward");
        Tensor gx = Tensor::zeros1(in_);
        for (int o = 0; o < out_; ++o) {
            const double go = g.at(o);
            bias_.grad[static_cast<size_t>(o)] += go;
            for (int i = 0; i < in_; ++i) {
                weight_.grad[static_cast<size_t>(o) * in_ + i] += go * input_.at(i);
                gx.at(i) += go * weight_.at(o, i);
            }
        }
        return gx;
    }

    std::vector<Tensor*> params() override { return {&weight_, &bias_}; }
    const char* kind_name() const override { return "dense"; }

private:
    int in_, out_;
    Tensor weight_, bias_;
    Tensor input_;
};

// ---------------------------------------------------------------------------
// Elementwise activations.

class SnakeLayer : public Layer {
public:
    Tensor forward(const Tensor& x) override {
        input_ = x;
        Tensor y = x;
        for (double& v : y.data) v = fagan::snake(v);
        y.zero_grad();
        return y;
    }
    Tensor backward(const Tensor& g) override {
        Tensor gx = g;
        for (size_t i = 0; i < gx.data.size(); ++i) {
            gx.data[i] = g.data[i] * (1.0 + std::sin(2.0 * input_.data[i]));
        }
        return gx;
    }
    const char* kind_name() const override { return "snake"; }

private:
    Tensor input_;
};

class LeakyReluLayer : public Layer {
public:
    explicit LeakyReluLayer(double slope = 0.1) : slope_(slope) {}
    Tensor forward(const Tensor& x) override {
        input_ = x;
        Tensor y = x;
        for (double& v : y.data) v = v >= 0.0 ? v : slope_ * v;
        y.zero_grad();
        return y;
    }
    Tensor backward(const Tensor& g) override {
        Tensor gx = g;
        for (size_t i = 0; i < gx.data.size(); ++i) {
            gx.data[i] = g.data[i] * (input_.data[i] >= 0.0 ? 1.0 : slope_);
        }
        return gx;
    }
    const char* kind_name() const override { return "leaky_relu"; }

private:
    double slope_;
    Tensor input_;
};

class TanhLayer : public Layer {
public:
    Tensor forward(const Tensor& x) override {
        Tensor y = x;
        for (double& v : y.data) v = std::tanh(v);
        y.zero_grad();
        output_ = y;
        return y;
    }
    Tensor backward(const Tensor& g) override {
        Tensor gx = g;
        for (size_t i = 0; i < gx.data.size(); ++i) {
            gx.data[i] = g.data[i] * (1.0 - output_.data[i] * output_.data[i]);
        }
        return gx;
    }
    const char* kind_name() const override { return "tanh"; }

private:
    Tensor output_;
};

// ---------------------------------------------------------------------------

std::unique_ptr<Layer> make_layer(const LayerSpec& spec) {
    switch (spec.kind) {
        case LayerKind::conv1d: return std::make_unique<Conv1dLayer>(spec);
        case LayerKind::tconv1d: return std::make_unique<TConv1dLayer>(spec);
        case LayerKind::twin_tconv1d: return std::make_unique<TwinTConv1dLayer>(spec);
        case LayerKind::conv2d: return std::make_unique<Conv2dLayer>(spec);
        case LayerKind::dense: return std::make_unique<DenseLayer>(spec);
        case LayerKind::snake: return std::make_unique<SnakeLayer>();
        case LayerKind::leaky_relu: return std::make_unique<LeakyReluLayer>();
        case LayerKind::tanh_act: return std::make_unique<TanhLayer>();
    }
    throw std::invalid_argument("make_layer: unknown kind");
}

AmpBlock::AmpBlock(int channels, int kernel_size, const std::vector<int>& dilations,
                   uint64_t init_seed) {
    if (dilations.empty()) throw std::invalid_argument("AmpBlock: dilations must be non-empty");
    for (size_t s = 0; s < dilations.size(); ++s) {
        LayerSpec conv;
        conv.kind = LayerKind::conv1d;
        conv.in_ch = channels;
        conv.out_ch = channels;
        conv.kernel_size = kernel_size;
        conv.dilation = dilations[s];
        conv.init_seed = init_seed + 101 * s;
        snakes_.push_back(make_layer({.kind = LayerKind::snake}));
        convs_.push_back(make_layer(conv));
    }
}

Tensor AmpBlock::forward(const Tensor& x) {
    Tensor cur = x;
    for (size_t s = 0; s < convs_.size(); ++s) {
        Tensor a = snakes_[s]->forward(cur);
        Tensor c = convs_[s]->forward(a);
        for (size_t i = 0; i < cur.data.size(); ++i) cur.data[i] += c.data[i];
    }
    return cur;
}

Tensor AmpBlock::backward(const Tensor& grad_out) {
    Tensor g = grad_out;
    for (size_t s = convs_.size(); s-- > 0;) {
        Tensor ga = convs_[s]->backward(g);
        Tensor gs = snakes_[s]->backward(ga);
        for (size_t i = 0; i < g.data.size(); ++i) g.data[i] += gs.data[i];
    }
    return g;
}

std::vector<Tensor*> AmpBlock::params() {
    std::vector<Tensor*> out;
    for (auto& c : convs_) {
        for (Tensor* p : c->params()) out.push_back(p);
    }
    return out;
}

}  // namespace fagan::nets
