#include "fagan/loss_grads.hpp"

#include <cmath>
#include <stdexcept>

namespace fagan {

namespace {

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

RiTarget make_ri_target(const AudioBuffer& x, const StftConfig& cfg) {
    RiTarget t;
    t.spec = stft(x, cfg);
    t.mag.resize(t.spec.cells());
    double frob2 = 0.0;
    for (size_t c = 0; c < t.spec.cells(); ++c) {
        t.mag[c] = std::hypot(t.spec.real[c], t.spec.imag[c]);
        frob2 += t.spec.real[c] * t.spec.real[c] + t.spec.imag[c] * t.spec.imag[c];
    }
    t.frob = std::sqrt(frob2);
    return t;
}

RiGradResult ri_loss_with_grad(const RiTarget& target, const AudioBuffer& xhat) {
    if (xhat.samples.size() != target.spec.source_len) {
        throw std::invalid_argument("ri_loss_with_grad: length mismatch");
    }
    const StftConfig& cfg = target.spec.config;
    const ComplexSpectrogram gen = stft(xhat, cfg);
    const size_t cells = gen.cells();
    if (cells != target.spec.cells()) {
        throw std::invalid_argument("ri_loss_with_grad: framing mismatch");
    }

    RiGradResult out;
    std::vector<double> grad_r(cells, 0.0), grad_i(cells, 0.0);
    const double inv_cells = 1.0 / static_cast<double>(cells);

    double sum_r = 0.0, sum_i = 0.0, sum_m = 0.0, frob_diff2 = 0.0;
    for (size_t c = 0; c < cells; ++c) {
        const double dr = gen.real[c] - target.spec.real[c];
        const double di = gen.imag[c] - target.spec.imag[c];
        sum_r += std::fabs(dr);
        sum_i += std::fabs(di);
        grad_r[c] = sgn(dr) * inv_cells;
        grad_i[c] = sgn(di) * inv_cells;

        const double mag_gen = std::hypot(gen.real[c], gen.imag[c]);
        const double dm = mag_gen - target.mag[c];
        sum_m += std::fabs(dm);
        if (mag_gen > 0.0) {
            const double f = sgn(dm) * inv_cells / mag_gen;
            grad_r[c] += f * gen.real[c];
            grad_i[c] += f * gen.imag[c];
        }
        frob_diff2 += dr * dr + di * di;
    }

    RiLossBreakdown& b = out.breakdown;
    b.real_l1 = sum_r * inv_cells;
    b.imag_l1 = sum_i * inv_cells;
    b.magnitude_l1 = sum_m * inv_cells;
    const double frob_diff = std::sqrt(frob_diff2);
    if (target.frob > 0.0) {
        b.spectral_convergence = frob_diff / target.frob;
        b.sc_defined = true;
        if (frob_diff > 0.0) {
            const double f = 1.0 / (frob_diff * target.frob);
            for (size_t c = 0; c < cells; ++c) {
                grad_r[c] += f * (gen.real[c] - target.spec.real[c]);
                grad_i[c] += f * (gen.imag[c] - target.spec.imag[c]);
            }
        }
    } else {
        b.spectral_convergence = 0.0;
        b.sc_defined = false;
    }
    b.total = b.real_l1 + b.imag_l1 + b.magnitude_l1 + b.spectral_convergence;

    out.grad = stft_backward(grad_r, grad_i, cfg, xhat.samples.size());
    return out;
}

MrRiTarget make_mr_ri_target(const AudioBuffer& x, const MultiResConfig& mrc) {
    validate(mrc);
    MrRiTarget t;
    for (const StftConfig& cfg : mrc.resolutions) {
        t.per_resolution.push_back(make_ri_target(x, cfg));
    }
    return t;
}

MrRiGradResult mr_ri_loss_with_grad(const MrRiTarget& target, const AudioBuffer& xhat) {
    if (target.per_resolution.empty()) {
        throw std::invalid_argument("mr_ri_loss_with_grad: empty target");
    }
    MrRiGradResult out;
    out.grad.assign(xhat.samples.size(), 0.0);
    const double inv_m = 1.0 / static_cast<double>(target.per_resolution.size());
    for (const RiTarget& rt : target.per_resolution) {
        RiGradResult r = ri_loss_with_grad(rt, xhat);
        out.value.per_resolution.push_back(r.breakdown);
        out.value.total += r.breakdown.total;
        for (size_t i = 0; i < out.grad.size(); ++i) out.grad[i] += inv_m * r.grad[i];
    }
    out.value.total *= inv_m;
    return out;
}

MelAnalyzer::MelAnalyzer(int sample_rate_, const StftConfig& cfg_, int n_mels)
    : cfg(cfg_),
      fb(mel_filterbank(n_mels, cfg_.fft_size, sample_rate_, 0.0, sample_rate_ / 2.0)),
      sample_rate(sample_rate_) {}

MelSpectrogram MelAnalyzer::analyze(const AudioBuffer& x) const {
    return mel_spectrogram(x, cfg, fb.n_mels, 0.0, sample_rate / 2.0);
}

MelGradResult mel_loss_with_grad(const MelAnalyzer& analyzer, const MelSpectrogram& target,
                                 const AudioBuffer& xhat) {
    const StftConfig& cfg = analyzer.cfg;
    const ComplexSpectrogram gen = stft(xhat, cfg);
    const int frames = gen.frames;
    const int bins = gen.bins;
    const int n_mels = analyzer.fb.n_mels;
    if (frames != target.frames) {
        throw std::invalid_argument("mel_loss_with_grad: framing mismatch");
    }

    MelGradResult out;
    std::vector<double> grad_r(gen.cells(), 0.0), grad_i(gen.cells(), 0.0);
    std::vector<double> mag(static_cast<size_t>(bins));
    std::vector<double> grad_mag(static_cast<size_t>(bins));
    const double inv_count = 1.0 / (static_cast<double>(frames) * n_mels);

    double loss = 0.0;
    for (int f = 0; f < frames; ++f) {
        for (int b = 0; b < bins; ++b) {
            mag[b] = std::hypot(gen.re(f, b), gen.im(f, b));
            grad_mag[b] = 0.0;
        }
        for (int m = 0; m < n_mels; ++m) {
            const double* w = &analyzer.fb.weights[static_cast<size_t>(m) * bins];
            double acc = 0.0;
            for (int b = analyzer.fb.row_start[m]; b < analyzer.fb.row_end[m]; ++b) {
                acc += w[b] * mag[b];
            }
            const bool clamped = acc < kMelLogFloor;
            const double val = std::log(std::max(acc, kMelLogFloor));
            const double diff = val - target.at(f, m);
            loss += std::fabs(diff);
            if (!clamped && diff != 0.0) {
                const double g = sgn(diff) * inv_count / acc;
                for (int b = analyzer.fb.row_start[m]; b < analyzer.fb.row_end[m]; ++b) {
                    grad_mag[b] += g * w[b];
                }
            }
        }
        for (int b = 0; b < bins; ++b) {
            if (grad_mag[b] != 0.0 && mag[b] > 0.0) {
                const size_t c = static_cast<size_t>(f) * bins + b;
                grad_r[c] = grad_mag[b] * gen.re(f, b) / mag[b];
                grad_i[c] = grad_mag[b] * gen.im(f, b) / mag[b];
            }
        }
    }
    out.loss = loss * inv_count;
    out.grad = stft_backward(grad_r, grad_i, cfg, xhat.samples.size());
    return out;
}

}  // namespace fagan
