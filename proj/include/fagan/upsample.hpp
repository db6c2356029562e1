#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace fagan {

enum class TwinMode { none, ones, abs_weight };

struct DeconvSpec {
    std::vector<double> kernel;
    int stride = 1;
    TwinMode twin_mode = TwinMode::none;
};

// Throws std::invalid_argument unless kernel_len >= stride >= 1.
void validate(const DeconvSpec& spec);

// out[j] = sum_i x[i] * kernel[j - i*stride]; output length (len-1)*stride + klen.
std::vector<double> transposed_conv1d(std::span<const double> x, const DeconvSpec& spec);

// Numerator branch over the kernel divided elementwise by an overlap branch:
// `ones` counts contributions per position, `abs_weight` accumulates |kernel|.
// Throws NumericError when a denominator entry falls below 1e-12.
std::vector<double> twin_deconv(std::span<const double> x, const DeconvSpec& spec);

inline double snake(double x) {
    const double s = std::sin(x);
    return x + s * s;
}
std::vector<double> snake(std::span<const double> x);

// Odd-length symmetric low-pass; cutoff is normalized (cycles/sample, Nyquist 0.5).
struct FirFilter {
    std::vector<double> taps;
    double cutoff = 0.0;
};

// Kaiser-windowed sinc, taps normalized to unit DC gain.
FirFilter design_lowpass(double cutoff, int num_taps, double kaiser_beta = 9.0);

// Zero-phase application via the symmetric taps; edges are reflect-padded so
// the output length equals the input length.
std::vector<double> apply_fir(std::span<const double> x, const FirFilter& f);

// Residual stack: for each dilation d with its kernel,
// x <- x + conv1d(snake(x), kernel, dilation=d, same-length zero padding).
std::vector<double> amp_block(std::span<const double> x, const std::vector<int>& dilations,
                              const std::vector<std::vector<double>>& kernels);

// Kaiser window helper shared with the PQMF prototype design.
double bessel_i0(double x);

}  // namespace fagan
