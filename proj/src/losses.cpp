#include "fagan/losses.hpp"

#include <cmath>
#include <stdexcept>

#include "fagan/mel.hpp"

namespace fagan {

RiLossBreakdown ri_loss(const AudioBuffer& x, const AudioBuffer& xhat,
                        const StftConfig& cfg) {
    if (x.samples.size() != xhat.samples.size()) {
        throw std::invalid_argument("ri_loss: length mismatch");
    }
    const ComplexSpectrogram ref = stft(x, cfg);
    const ComplexSpectrogram gen = stft(xhat, cfg);

    RiLossBreakdown out;
    const size_t cells = ref.cells();
    double sum_r = 0.0, sum_i = 0.0, sum_m = 0.0, frob_diff = 0.0, frob_ref = 0.0;
    for (size_t c = 0; c < cells; ++c) {
        const double dr = gen.real[c] - ref.real[c];
        const double di = gen.imag[c] - ref.imag[c];
        sum_r += std::fabs(dr);
        sum_i += std::fabs(di);
        const double mag_ref = std::hypot(ref.real[c], ref.imag[c]);
        const double mag_gen = std::hypot(gen.real[c], gen.imag[c]);
        sum_m += std::fabs(mag_gen - mag_ref);
        frob_diff += dr * dr + di * di;
        frob_ref += ref.real[c] * ref.real[c] + ref.imag[c] * ref.imag[c];
    }
    out.real_l1 = sum_r / cells;
    out.imag_l1 = sum_i / cells;
    out.magnitude_l1 = sum_m / cells;
    if (frob_ref > 0.0) {
        out.spectral_convergence = std::sqrt(frob_diff) / std::sqrt(frob_ref);
        out.sc_defined = true;
    } else {
        out.spectral_convergence = 0.0;
        out.sc_defined = false;  // silent reference, relative term undefined
    }
    out.total = out.real_l1 + out.imag_l1 + out.magnitude_l1 + out.spectral_convergence;
    return out;
}

MultiResConfig MultiResConfig::defaults() {
    MultiResConfig mrc;
    const int windows[] = {2048, 1024, 512};
    const int hops[] = {240, 120, 50};
    for (int i = 0; i < 3; ++i) {
        StftConfig cfg;
        cfg.fft_size = windows[i];
        cfg.window_size = windows[i];
        cfg.hop_size = hops[i];
        cfg.window = WindowKind::hann;
        cfg.center_padding = true;
        mrc.resolutions.push_back(cfg);
    }
    return mrc;
}

void validate(const MultiResConfig& mrc) {
    if (mrc.resolutions.empty()) {
        throw std::invalid_argument("MultiResConfig: need at least one resolution");
    }
    for (size_t i = 0; i < mrc.resolutions.size(); ++i) {
        validate(mrc.resolutions[i]);
        for (size_t j = i + 1; j < mrc.resolutions.size(); ++j) {
            if (mrc.resolutions[i].window_size == mrc.resolutions[j].window_size) {
                throw std::invalid_argument("MultiResConfig: window sizes must be distinct");
            }
        }
    }
}

MrRiResult mr_ri_loss(const AudioBuffer& x, const AudioBuffer& xhat,
                      const MultiResConfig& mrc) {
    validate(mrc);
    MrRiResult out;
    for (const StftConfig& cfg : mrc.resolutions) {
        out.per_resolution.push_back(ri_loss(x, xhat, cfg));
        out.total += out.per_resolution.back().total;
    }
    out.total /= static_cast<double>(mrc.resolutions.size());
    return out;
}

double mel_loss(const AudioBuffer& x, const AudioBuffer& xhat) {
    if (x.samples.size() != xhat.samples.size()) {
        throw std::invalid_argument("mel_loss: length mismatch");
    }
    StftConfig cfg;  // 1024/1024/256 analysis defaults
    const MelSpectrogram a = mel_spectrogram(x, cfg);
    const MelSpectrogram b = mel_spectrogram(xhat, cfg);
    double acc = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) {
        acc += std::fabs(a.values[i] - b.values[i]);
    }
    return acc / a.values.size();
}

AdvLosses adversarial_losses(const std::vector<std::vector<double>>& real_scores,
                             const std::vector<std::vector<double>>& fake_scores) {
    if (real_scores.empty() || real_scores.size() != fake_scores.size()) {
        throw std::invalid_argument("adversarial_losses: empty or unpaired score sets");
    }
    AdvLosses out;
    for (size_t n = 0; n < real_scores.size(); ++n) {
        const auto& r = real_scores[n];
        const auto& f = fake_scores[n];
        if (r.empty() || f.empty()) {
            throw std::invalid_argument("adversarial_losses: empty score map");
        }
        double mr = 0.0;
        for (double v : r) mr += (1.0 - v) * (1.0 - v);
        double mf = 0.0, mg = 0.0;
        for (double v : f) {
            mf += v * v;
            mg += (1.0 - v) * (1.0 - v);
        }
        out.d_loss += mr / r.size() + mf / f.size();
        out.g_loss += mg / f.size();
    }
    return out;
}

double feature_matching_loss(
    const std::vector<std::vector<std::vector<double>>>& real_feats,
    const std::vector<std::vector<std::vector<double>>>& fake_feats) {
    if (real_feats.size() != fake_feats.size()) {
        throw std::invalid_argument("feature_matching_loss: discriminator count mismatch");
    }
    double out = 0.0;
    for (size_t n = 0; n < real_feats.size(); ++n) {
        const auto& rl = real_feats[n];
        const auto& fl = fake_feats[n];
        if (rl.size() != fl.size()) {
            throw std::invalid_argument("feature_matching_loss: layer count mismatch");
        }
        if (rl.empty()) continue;
        double per_disc = 0.0;
        for (size_t l = 0; l < rl.size(); ++l) {
            if (rl[l].size() != fl[l].size()) {
                throw std::invalid_argument("feature_matching_loss: feature shape mismatch");
            }
            double acc = 0.0;
            for (size_t c = 0; c < rl[l].size(); ++c) {
                acc += std::fabs(rl[l][c] - fl[l][c]);
            }
            per_disc += acc / rl[l].size();
        }
        out += per_disc / rl.size();
    }
    return out;
}

void validate(const LossWeights& w) {
    const double vals[] = {w.lambda_g, w.lambda_ri, w.lambda_mel, w.lambda_fm};
    for (double v : vals) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("LossWeights: weights must be finite and >= 0");
        }
    }
}

double total_generator_loss(double adv_g, double mr_ri, double mel, double fm,
                            const LossWeights& w) {
    validate(w);
    return w.lambda_g * adv_g + w.lambda_ri * mr_ri + w.lambda_mel * mel + w.lambda_fm * fm;
}

double total_discriminator_loss(double adv_d) { return adv_d; }

}  // namespace fagan
