#include "fagan/demo.hpp"

#include <cmath>
#include <stdexcept>

#include "fagan/metrics.hpp"
#include "fagan/rng.hpp"
#include "fagan/upsample.hpp"

namespace fagan {

UpsampleDemoResult run_upsample_demo(const UpsampleDemoConfig& cfg) {
    if (cfg.stride < 2) throw std::invalid_argument("upsample demo: stride must be >= 2");
    const double low_rate = static_cast<double>(cfg.sample_rate) / cfg.stride;
    if (!(cfg.tone_hz > 0.0 && cfg.tone_hz < low_rate / 2.0)) {
        throw std::invalid_argument("upsample demo: tone must sit below the low-rate Nyquist");
    }

    const int len_low =
        static_cast<int>(cfg.duration_sec * cfg.sample_rate) / cfg.stride;
    std::vector<double> tone_low(static_cast<size_t>(len_low));
    for (int i = 0; i < len_low; ++i) {
        // The decimated view of a full-rate tone at tone_hz.
        tone_low[static_cast<size_t>(i)] =
            std::sin(2.0 * M_PI * cfg.tone_hz * (static_cast<double>(i) * cfg.stride) /
                     cfg.sample_rate);
    }

    UpsampleDemoResult out;
    const int klen = cfg.kernel_len > 0 ? cfg.kernel_len : 2 * cfg.stride;
    Rng rng(cfg.seed);
    out.kernel.resize(static_cast<size_t>(klen));
    for (double& v : out.kernel) v = rng.uniform(0.1, 1.0);

    DeconvSpec plain_spec{out.kernel, cfg.stride, TwinMode::none};
    DeconvSpec twin_spec{out.kernel, cfg.stride, TwinMode::ones};

    auto crop_center = [&](const std::vector<double>& full) {
        const size_t want = static_cast<size_t>(len_low) * cfg.stride;
        const size_t offset = (full.size() - want) / 2;
        return std::vector<double>(full.begin() + static_cast<long>(offset),
                                   full.begin() + static_cast<long>(offset + want));
    };

    std::vector<double> plain = crop_center(transposed_conv1d(tone_low, plain_spec));
    std::vector<double> twin = crop_center(twin_deconv(tone_low, twin_spec));

    const double cutoff =
        cfg.lowpass_cutoff > 0.0 ? cfg.lowpass_cutoff : 1.0 / (2.0 * cfg.stride);
    const FirFilter lp = design_lowpass(cutoff, cfg.lowpass_taps, 9.0);
    twin = apply_fir(twin, lp);

    auto normalize = [](std::vector<double>& x) {
        double peak = 0.0;
        for (double v : x) peak = std::max(peak, std::fabs(v));
        if (peak > 0.0) {
            for (double& v : x) v *= 0.9 / peak;
        }
    };
    normalize(plain);
    normalize(twin);

    out.plain.sample_rate = cfg.sample_rate;
    out.plain.samples = std::move(plain);
    out.twin.sample_rate = cfg.sample_rate;
    out.twin.samples = std::move(twin);

    // Mirror images of the tone around multiples of the low rate.
    for (int k = 1; k <= cfg.stride; ++k) {
        for (int sign : {-1, 1}) {
            const double f = k * low_rate + sign * cfg.tone_hz;
            if (f > 0.0 && f < cfg.sample_rate / 2.0 &&
                std::fabs(f - cfg.tone_hz) > low_rate / 4.0) {
                out.image_freqs.push_back(f);
            }
        }
    }

    out.plain_alias_db = aliasing_energy(out.plain, cfg.tone_hz, out.image_freqs);
    out.twin_alias_db = aliasing_energy(out.twin, cfg.tone_hz, out.image_freqs);
    return out;
}

}  // namespace fagan
