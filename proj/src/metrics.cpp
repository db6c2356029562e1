#include "fagan/metrics.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "fagan/errors.hpp"
#include "fagan/fft.hpp"
#include "fagan/mel.hpp"
#include "fagan/stft.hpp"

namespace fagan {

namespace {

constexpr double kF0Min = 50.0;
constexpr double kF0Max = 1000.0;
constexpr double kYinThreshold = 0.15;

StftConfig analysis_config() { return StftConfig{}; }  // 1024/1024/256 hann

}  // namespace

F0Track estimate_f0(const AudioBuffer& x, double frame_sec, double hop_sec) {
    validate(x);
    const int sr = x.sample_rate;
    const int frame = std::max(2, static_cast<int>(std::lround(frame_sec * sr)));
    const int hop = std::max(1, static_cast<int>(std::lround(hop_sec * sr)));
    const int tau_min = std::max(2, static_cast<int>(sr / kF0Max));
    const int tau_max = std::min(static_cast<int>(sr / kF0Min), frame - 1);

    F0Track track;
    const long long n = static_cast<long long>(x.samples.size());
    auto sample = [&](long long i) { return i < n ? x.samples[static_cast<size_t>(i)] : 0.0; };

    std::vector<double> d(static_cast<size_t>(tau_max) + 1, 0.0);
    std::vector<double> dn(static_cast<size_t>(tau_max) + 1, 1.0);

    for (long long start = 0; start + frame <= n; start += hop) {
        track.frame_times.push_back(static_cast<double>(start) / sr);

        double energy = 0.0;
        for (int i = 0; i < frame; ++i) {
            const double v = sample(start + i);
            energy += v * v;
        }
        if (energy < 1e-10) {
            track.f0.push_back(0.0);
            track.voicing.push_back(false);
            continue;
        }

        // Difference function over the frame-length integration window.
        for (int tau = tau_min; tau <= tau_max; ++tau) {
            double acc = 0.0;
            for (int i = 0; i < frame; ++i) {
                const double diff = sample(start + i) - sample(start + i + tau);
                acc += diff * diff;
            }
            d[tau] = acc;
        }
        // Cumulative-mean normalization; taus below tau_min use the raw
        // difference so the running sum stays consistent.
        double running = 0.0;
        for (int tau = 1; tau <= tau_max; ++tau) {
            double dt;
            if (tau < tau_min) {
                double acc = 0.0;
                for (int i = 0; i < frame; ++i) {
                    const double diff = sample(start + i) - sample(start + i + tau);
                    acc += diff * diff;
                }
                dt = acc;
            } else {
                dt = d[tau];
            }
            running += dt;
            dn[tau] = running > 0.0 ? dt * tau / running : 1.0;
        }

        int best = -1;
        for (int tau = tau_min; tau <= tau_max; ++tau) {
            if (dn[tau] < kYinThreshold) {
                while (tau + 1 <= tau_max && dn[tau + 1] < dn[tau]) ++tau;
                best = tau;
                break;
            }
        }
        if (best < 0) {
            track.f0.push_back(0.0);
            track.voicing.push_back(false);
            continue;
        }

        double tau_est = best;
        if (best > tau_min && best < tau_max) {
            const double a = dn[best - 1], b = dn[best], c = dn[best + 1];
            const double denom = a - 2.0 * b + c;
            if (std::fabs(denom) > 1e-12) {
                const double delta = 0.5 * (a - c) / denom;
                if (std::fabs(delta) < 1.0) tau_est += delta;
            }
        }
        const double f0 = sr / tau_est;
        if (f0 >= kF0Min && f0 <= kF0Max) {
            track.f0.push_back(f0);
            track.voicing.push_back(true);
        } else {
            track.f0.push_back(0.0);
            track.voicing.push_back(false);
        }
    }
    return track;
}

F0RmseResult f0_rmse(const AudioBuffer& x, const AudioBuffer& xhat) {
    const F0Track a = estimate_f0(x);
    const F0Track b = estimate_f0(xhat);
    const size_t frames = std::min(a.f0.size(), b.f0.size());
    double acc = 0.0;
    size_t count = 0;
    for (size_t i = 0; i < frames; ++i) {
        if (a.voicing[i] && b.voicing[i]) {
            const double d = a.f0[i] - b.f0[i];
            acc += d * d;
            ++count;
        }
    }
    if (count == 0) return {std::numeric_limits<double>::quiet_NaN(), false};
    return {std::sqrt(acc / count), true};
}

double mcd(const AudioBuffer& x, const AudioBuffer& xhat) {
    if (x.samples.size() != xhat.samples.size()) {
        throw std::invalid_argument("mcd: length mismatch");
    }
    const StftConfig cfg = analysis_config();
    const MelSpectrogram a = mel_spectrogram(x, cfg);
    const MelSpectrogram b = mel_spectrogram(xhat, cfg);
    const int n = a.n_mels;
    constexpr int kFirst = 1, kLast = 13;

    // Orthonormal DCT-II basis restricted to the kept coefficients.
    std::vector<double> basis(static_cast<size_t>(kLast - kFirst + 1) * n);
    for (int k = kFirst; k <= kLast; ++k) {
        const double scale = std::sqrt(2.0 / n);
        for (int i = 0; i < n; ++i) {
            basis[static_cast<size_t>(k - kFirst) * n + i] =
                scale * std::cos(M_PI * (2.0 * i + 1.0) * k / (2.0 * n));
        }
    }

    const double factor = 10.0 * std::sqrt(2.0) / std::log(10.0);
    double acc = 0.0;
    for (int f = 0; f < a.frames; ++f) {
        double dist2 = 0.0;
        for (int k = 0; k <= kLast - kFirst; ++k) {
            const double* row = &basis[static_cast<size_t>(k) * n];
            double ca = 0.0, cb = 0.0;
            for (int i = 0; i < n; ++i) {
                ca += row[i] * a.at(f, i);
                cb += row[i] * b.at(f, i);
            }
            dist2 += (ca - cb) * (ca - cb);
        }
        acc += std::sqrt(dist2);
    }
    return factor * acc / a.frames;
}

namespace {

BandLsd banded_lsd_impl(const AudioBuffer& x, const AudioBuffer& xhat) {
    if (x.samples.size() != xhat.samples.size()) {
        throw std::invalid_argument("lsd: length mismatch");
    }
    const StftConfig cfg = analysis_config();
    const ComplexSpectrogram a = stft(x, cfg);
    const ComplexSpectrogram b = stft(xhat, cfg);

    const double bin_hz = static_cast<double>(x.sample_rate) / cfg.fft_size;
    const double edge1 = x.sample_rate / 6.0, edge2 = x.sample_rate / 3.0;

    double acc[4] = {0.0, 0.0, 0.0, 0.0};  // full, low, mid, high
    for (int f = 0; f < a.frames; ++f) {
        double sum[4] = {0.0, 0.0, 0.0, 0.0};
        int cnt[4] = {0, 0, 0, 0};
        for (int k = 0; k < a.bins; ++k) {
            const double la = std::log10(std::max(std::hypot(a.re(f, k), a.im(f, k)), 1e-8));
            const double lb = std::log10(std::max(std::hypot(b.re(f, k), b.im(f, k)), 1e-8));
            const double d2 = (la - lb) * (la - lb);
            const double freq = k * bin_hz;
            const int band = freq < edge1 ? 1 : (freq < edge2 ? 2 : 3);
            sum[0] += d2;
            ++cnt[0];
            sum[band] += d2;
            ++cnt[band];
        }
        for (int i = 0; i < 4; ++i) {
            if (cnt[i] > 0) acc[i] += std::sqrt(sum[i] / cnt[i]);
        }
    }
    BandLsd out;
    out.full = acc[0] / a.frames;
    out.low = acc[1] / a.frames;
    out.mid = acc[2] / a.frames;
    out.high = acc[3] / a.frames;
    return out;
}

}  // namespace

double lsd(const AudioBuffer& x, const AudioBuffer& xhat) {
    return banded_lsd_impl(x, xhat).full;
}

BandLsd banded_lsd(const AudioBuffer& x, const AudioBuffer& xhat) {
    return banded_lsd_impl(x, xhat);
}

double aliasing_energy(const AudioBuffer& x, double fundamental_hz,
                       const std::vector<double>& image_hz) {
    validate(x);
    if (x.samples.empty()) throw std::invalid_argument("aliasing_energy: empty input");
    size_t n = 1;
    while (n < x.samples.size() && n < (size_t{1} << 20)) n <<= 1;

    std::vector<std::complex<double>> buf(n, std::complex<double>(0.0, 0.0));
    const size_t len = std::min(x.samples.size(), n);
    for (size_t i = 0; i < len; ++i) {
        const double w = 0.5 * (1.0 - std::cos(2.0 * M_PI * i / len));
        buf[i] = {x.samples[i] * w, 0.0};
    }
    FftPlan plan(n);
    plan.forward(buf.data());

    const double bin_hz = static_cast<double>(x.sample_rate) / n;
    auto band_energy = [&](double freq) {
        const long long center = std::llround(freq / bin_hz);
        double acc = 0.0;
        for (long long b = center - 2; b <= center + 2; ++b) {
            if (b >= 0 && b <= static_cast<long long>(n / 2)) {
                acc += std::norm(buf[static_cast<size_t>(b)]);
            }
        }
        return acc;
    };

    const double ref = band_energy(fundamental_hz);
    if (ref <= 0.0) throw NumericError("aliasing_energy: no energy at fundamental");
    double images = 0.0;
    for (double f : image_hz) {
        if (f > 0.0 && f < x.sample_rate / 2.0) images += band_energy(f);
    }
    return 10.0 * std::log10(std::max(images / ref, 1e-30));
}

MetricReport compute_metrics(const AudioBuffer& ref, const AudioBuffer& gen) {
    MetricReport r;
    r.mcd = mcd(ref, gen);
    const BandLsd b = banded_lsd(ref, gen);
    r.lsd = b.full;
    r.lsd_low = b.low;
    r.lsd_mid = b.mid;
    r.lsd_high = b.high;
    const F0RmseResult f = f0_rmse(ref, gen);
    r.f0_rmse = f.hz;
    r.f0_defined = f.defined;
    return r;
}

}  // namespace fagan
