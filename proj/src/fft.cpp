#include "fagan/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace fagan {

FftPlan::FftPlan(size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("FftPlan: size must be positive");
    pow2_ = (n & (n - 1)) == 0;
    if (!pow2_) return;

    bitrev_.resize(n);
    size_t log2n = 0;
    while ((size_t{1} << log2n) < n) ++log2n;
    for (size_t i = 0; i < n; ++i) {
        size_t r = 0;
        for (size_t b = 0; b < log2n; ++b) {
            if (i & (size_t{1} << b)) r |= size_t{1} << (log2n - 1 - b);
        }
        bitrev_[i] = r;
    }
    twiddle_.resize(n / 2);
    for (size_t j = 0; j < n / 2; ++j) {
        double phi = -2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n);
        twiddle_[j] = {std::cos(phi), std::sin(phi)};
    }
}

void FftPlan::forward(std::complex<double>* a) const {
    pow2_ ? radix2(a, false) : naive(a, false);
}

void FftPlan::inverse(std::complex<double>* a) const {
    pow2_ ? radix2(a, true) : naive(a, true);
}

void FftPlan::radix2(std::complex<double>* a, bool inverse) const {
    const size_t n = n_;
    for (size_t i = 0; i < n; ++i) {
        size_t r = bitrev_[i];
        if (i < r) std::swap(a[i], a[r]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const size_t half = len >> 1;
        const size_t step = n / len;
        for (size_t start = 0; start < n; start += len) {
            for (size_t j = 0; j < half; ++j) {
                std::complex<double> w = twiddle_[j * step];
                if (inverse) w = std::conj(w);
                std::complex<double> u = a[start + j];
                std::complex<double> v = a[start + j + half] * w;
                a[start + j] = u + v;
                a[start + j + half] = u - v;
            }
        }
    }
}

void FftPlan::naive(std::complex<double>* a, bool inverse) const {
    const size_t n = n_;
    const double sign = inverse ? 2.0 * M_PI / n : -2.0 * M_PI / n;
    std::vector<std::complex<double>> out(n);
    for (size_t k = 0; k < n; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (size_t m = 0; m < n; ++m) {
            double phi = sign * static_cast<double>(k) * static_cast<double>(m);
            acc += a[m] * std::complex<double>(std::cos(phi), std::sin(phi));
        }
        out[k] = acc;
    }
    for (size_t k = 0; k < n; ++k) a[k] = out[k];
}

}  // namespace fagan
