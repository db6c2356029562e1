#include "fagan/augment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include "fagan/errors.hpp"
#include "fagan/rng.hpp"
#include "fagan/upsample.hpp"

namespace fagan {

AudioBuffer add_noise(const AudioBuffer& x, double snr_db, uint64_t seed) {
    validate(x);
    if (std::isinf(snr_db) && snr_db > 0.0) return x;
    if (!std::isfinite(snr_db)) throw std::invalid_argument("add_noise: bad snr");

    double sig_power = 0.0;
    for (double s : x.samples) sig_power += s * s;
    if (sig_power == 0.0) return x;  // nothing to scale against

    Rng rng(seed);
    std::vector<double> noise(x.samples.size());
    double noise_power = 0.0;
    for (double& v : noise) {
        v = rng.normal();
        noise_power += v * v;
    }
    // Exact power ratio: ||noise||^2 / ||x||^2 = 10^(-snr/10).
    const double scale = std::sqrt(sig_power / noise_power) * std::pow(10.0, -snr_db / 20.0);

    AudioBuffer out = x;
    for (size_t i = 0; i < out.samples.size(); ++i) {
        out.samples[i] += scale * noise[i];
    }
    return out;
}

AudioBuffer add_noise_random_snr(const AudioBuffer& x, uint64_t seed, double* chosen_snr_db) {
    Rng rng(seed ^ 0x5bd1e995u);
    const double snr = rng.uniform(28.0, 40.0);
    if (chosen_snr_db != nullptr) *chosen_snr_db = snr;
    return add_noise(x, snr, seed);
}

AudioBuffer resample_rational(const AudioBuffer& x, int up, int down) {
    if (up < 1 || down < 1) throw std::invalid_argument("resample_rational: bad factors");
    validate(x);
    if (up == down) return x;

    const int g = static_cast<int>(std::gcd(up, down));
    const int L = up / g, M = down / g;
    const int lcm = std::max(L, M);
    const double cutoff = 0.45 / lcm;  // at the upsampled rate
    int taps = 16 * lcm + 1;
    if (taps % 2 == 0) ++taps;
    const FirFilter lp = design_lowpass(cutoff, taps, 9.0);
    const int half = (taps - 1) / 2;

    const long long in_len = static_cast<long long>(x.samples.size());
    const long long up_len = in_len * L;
    const long long out_len = (up_len + M - 1) / M;

    AudioBuffer out;
    out.sample_rate = x.sample_rate;
    out.samples.assign(static_cast<size_t>(out_len), 0.0);
    for (long long j = 0; j < out_len; ++j) {
        // Center the zero-phase filter on upsampled position j*M.
        const long long base = j * M - half;
        // Contributions only where the zero-stuffed signal is nonzero:
        // smallest multiple of L >= base.
        const long long first =
            base >= 0 ? ((base + L - 1) / L) * L : -(((-base) / L) * L);
        double acc = 0.0;
        for (long long p = first; p <= j * M + half; p += L) {
            const long long i = p / L;
            if (i < 0 || i >= in_len) continue;
            acc += x.samples[static_cast<size_t>(i)] * lp.taps[static_cast<size_t>(p - base)];
        }
        out.samples[static_cast<size_t>(j)] = L * acc;
    }
    return out;
}

AudioBuffer harmonic_shift(const AudioBuffer& x, double pitch_ratio) {
    if (!(pitch_ratio > 0.0) || !std::isfinite(pitch_ratio)) {
        throw std::invalid_argument("harmonic_shift: ratio must be positive");
    }
    // Best small rational approximation of 1/ratio.
    int best_l = 1, best_m = 1;
    double best_err = std::fabs(1.0 / pitch_ratio - 1.0);
    for (int m = 1; m <= 64; ++m) {
        const int l = std::max(1, static_cast<int>(std::lround(m / pitch_ratio)));
        const double err = std::fabs(static_cast<double>(l) / m - 1.0 / pitch_ratio);
        if (err < best_err - 1e-15) {
            best_err = err;
            best_l = l;
            best_m = m;
        }
    }

    AudioBuffer shifted = resample_rational(x, best_l, best_m);
    shifted.sample_rate = x.sample_rate;  // play back at the original rate
    shifted.samples.resize(x.samples.size(), 0.0);
    return shifted;
}

AudioBuffer lossy_compress_proxy(const AudioBuffer& x, double cutoff_hz, int bits) {
    validate(x);
    if (bits < 2 || bits > 24) throw std::invalid_argument("lossy_compress_proxy: bad bits");

    AudioBuffer out = x;
    const double norm_cutoff = cutoff_hz / x.sample_rate;
    if (norm_cutoff < 0.5) {
        if (norm_cutoff <= 0.0) throw std::invalid_argument("lossy_compress_proxy: bad cutoff");
        const FirFilter lp = design_lowpass(norm_cutoff, 127, 9.0);
        out.samples = apply_fir(out.samples, lp);
    }

    const double mu = static_cast<double>((1u << bits) - 1);
    const double levels = static_cast<double>(1u << bits);
    const double log1p_mu = std::log1p(mu);
    for (double& s : out.samples) {
        const double v = std::clamp(s, -1.0, 1.0);
        const double companded = std::copysign(std::log1p(mu * std::fabs(v)) / log1p_mu, v);
        double idx = std::floor((companded + 1.0) / 2.0 * levels);
        idx = std::clamp(idx, 0.0, levels - 1.0);
        const double recon = (idx + 0.5) / levels * 2.0 - 1.0;
        s = std::copysign((std::pow(1.0 + mu, std::fabs(recon)) - 1.0) / mu, recon);
    }
    return out;
}

AudioBuffer codec_shell_hook(const AudioBuffer& x, const std::string& command_template,
                             const std::string& work_dir) {
    const std::string in_path = work_dir + "/codec_in.wav";
    const std::string out_path = work_dir + "/codec_out.wav";
    save_wav(x, in_path, WavFormat::float32);

    std::string cmd = command_template;
    auto replace_all = [&cmd](const std::string& from, const std::string& to) {
        size_t pos = 0;
        while ((pos = cmd.find(from, pos)) != std::string::npos) {
            cmd.replace(pos, from.size(), to);
            pos += to.size();
        }
    };
    replace_all("{input}", in_path);
    replace_all("{output}", out_path);

    const int rc = std::system(cmd.c_str());
    if (rc != 0) throw FormatError("codec hook command failed: " + cmd);
    return load_wav(out_path);
}

}  // namespace fagan
