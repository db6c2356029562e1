#pragma once

#include <complex>
#include <vector>

namespace fagan {

// Iterative radix-2 FFT with precomputed twiddles and bit-reversal table.
// Falls back to a direct O(n^2) DFT for non power-of-two sizes, which keeps
// arbitrary StftConfig values usable at test scale.
class FftPlan {
public:
    explicit FftPlan(size_t n);

    size_t size() const { return n_; }

    // In-place transform, e^{-i 2 pi k n / N} convention.
    void forward(std::complex<double>* a) const;
    // In-place unnormalized inverse (conjugate transform, no 1/N factor).
    void inverse(std::complex<double>* a) const;

private:
    void radix2(std::complex<double>* a, bool inverse) const;
    void naive(std::complex<double>* a, bool inverse) const;

    size_t n_;
    bool pow2_;
    std::vector<size_t> bitrev_;
    std::vector<std::complex<double>> twiddle_;  // e^{-i 2 pi j / n}, j < n/2
};

}  // namespace fagan
