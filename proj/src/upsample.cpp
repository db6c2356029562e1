#include "fagan/upsample.hpp"

#include <cmath>
#include <stdexcept>

#include "fagan/errors.hpp"

namespace fagan {

void validate(const DeconvSpec& spec) {
    if (spec.stride < 1) throw std::invalid_argument("DeconvSpec: stride must be >= 1");
    if (spec.kernel.size() < static_cast<size_t>(spec.stride)) {
        throw std::invalid_argument("DeconvSpec: kernel length must be >= stride");
    }
}

std::vector<double> transposed_conv1d(std::span<const double> x, const DeconvSpec& spec) {
    validate(spec);
    if (x.empty()) throw std::invalid_argument("transposed_conv1d: empty input");
    const size_t klen = spec.kernel.size();
    const size_t out_len = (x.size() - 1) * spec.stride + klen;
    std::vector<double> out(out_len, 0.0);
    for (size_t i = 0; i < x.size(); ++i) {
        const double v = x[i];
        double* dst = out.data() + i * spec.stride;
        for (size_t t = 0; t < klen; ++t) dst[t] += v * spec.kernel[t];
    }
    return out;
}

std::vector<double> twin_deconv(std::span<const double> x, const DeconvSpec& spec) {
    validate(spec);
    if (spec.twin_mode == TwinMode::none) {
        throw std::invalid_argument("twin_deconv: twin_mode must not be none");
    }
    std::vector<double> num = transposed_conv1d(x, spec);

    DeconvSpec den_spec;
    den_spec.stride = spec.stride;
    den_spec.kernel.resize(spec.kernel.size());
    for (size_t t = 0; t < spec.kernel.size(); ++t) {
        den_spec.kernel[t] =
            spec.twin_mode == TwinMode::ones ? 1.0 : std::fabs(spec.kernel[t]);
    }
    const std::vector<double> ones(x.size(), 1.0);
    std::vector<double> den = transposed_conv1d(ones, den_spec);

    for (size_t j = 0; j < num.size(); ++j) {
        if (den[j] < 1e-12) {
            throw NumericError("twin_deconv: degenerate kernel (denominator underflow)");
        }
        num[j] /= den[j];
    }
    return num;
}

std::vector<double> snake(std::span<const double> x) {
    std::vector<double> out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[i] = snake(x[i]);
    return out;
}

double bessel_i0(double x) {
    // Power series; converges fast for the beta range used here.
    double sum = 1.0, term = 1.0;
    const double half = x / 2.0;
    for (int k = 1; k < 64; ++k) {
        term *= (half / k) * (half / k);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

FirFilter design_lowpass(double cutoff, int num_taps, double kaiser_beta) {
    if (!(cutoff > 0.0 && cutoff < 0.5)) {
        throw std::invalid_argument("design_lowpass: cutoff must be in (0, 0.5)");
    }
    if (num_taps < 1 || num_taps % 2 == 0) {
        throw std::invalid_argument("design_lowpass: num_taps must be odd and positive");
    }
    FirFilter f;
    f.cutoff = cutoff;
    f.taps.resize(static_cast<size_t>(num_taps));
    const int mid = (num_taps - 1) / 2;
    const double denom = bessel_i0(kaiser_beta);
    // Fill one half and mirror so taps[i] == taps[N-1-i] holds bit-exactly.
    for (int n = mid; n < num_taps; ++n) {
        const double t = n - mid;
        const double arg = 2.0 * M_PI * cutoff * t;
        const double sinc = t == 0.0 ? 2.0 * cutoff : std::sin(arg) / (M_PI * t);
        const double r = num_taps > 1 ? 2.0 * t / (num_taps - 1) : 0.0;
        const double win = bessel_i0(kaiser_beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / denom;
        f.taps[n] = sinc * win;
        f.taps[num_taps - 1 - n] = f.taps[n];
    }
    double sum = 0.0;
    for (double tap : f.taps) sum += tap;
    for (double& tap : f.taps) tap /= sum;  // unit DC gain
    return f;
}

std::vector<double> apply_fir(std::span<const double> x, const FirFilter& f) {
    const int klen = static_cast<int>(f.taps.size());
    const int half = (klen - 1) / 2;
    const long long n = static_cast<long long>(x.size());
    std::vector<double> out(x.size(), 0.0);
    if (n == 0) return out;
    auto sample = [&](long long idx) {
        if (n == 1) return x[0];
        const long long period = 2 * (n - 1);
        long long m = idx % period;
        if (m < 0) m += period;
        if (m >= n) m = period - m;
        return x[static_cast<size_t>(m)];
    };
    for (long long i = 0; i < n; ++i) {
        double acc = 0.0;
        if (i - half >= 0 && i + half < n) {
            const double* src = x.data() + (i - half);
            for (int t = 0; t < klen; ++t) acc += f.taps[t] * src[t];
        } else {
            for (int t = 0; t < klen; ++t) acc += f.taps[t] * sample(i - half + t);
        }
        out[static_cast<size_t>(i)] = acc;
    }
    return out;
}

std::vector<double> amp_block(std::span<const double> x, const std::vector<int>& dilations,
                              const std::vector<std::vector<double>>& kernels) {
    if (dilations.empty()) throw std::invalid_argument("amp_block: dilations must be non-empty");
    if (kernels.size() != dilations.size()) {
        throw std::invalid_argument("amp_block: one kernel per dilation required");
    }
    std::vector<double> cur(x.begin(), x.end());
    const long long n = static_cast<long long>(cur.size());
    for (size_t s = 0; s < dilations.size(); ++s) {
        const int d = dilations[s];
        if (d < 1) throw std::invalid_argument("amp_block: dilation must be >= 1");
        const std::vector<double>& k = kernels[s];
        const long long klen = static_cast<long long>(k.size());
        const long long center = (klen - 1) / 2;
        std::vector<double> act = snake(cur);
        std::vector<double> next(cur);
        for (long long i = 0; i < n; ++i) {
            double acc = 0.0;
            for (long long t = 0; t < klen; ++t) {
                const long long j = i + (t - center) * d;
                if (j >= 0 && j < n) acc += k[t] * act[static_cast<size_t>(j)];
            }
            next[static_cast<size_t>(i)] += acc;
        }
        cur = std::move(next);
    }
    return cur;
}

}  // namespace fagan
