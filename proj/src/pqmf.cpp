#include "fagan/pqmf.hpp"

#include <cmath>
#include <stdexcept>

#include "fagan/rng.hpp"
#include "fagan/upsample.hpp"

namespace fagan {

namespace {

// Even-length windowed sinc centered at (taps-1)/2, normalized to unit DC gain.
std::vector<double> prototype_filter(int taps, double cutoff, double beta) {
    std::vector<double> p(static_cast<size_t>(taps));
    const double mid = (taps - 1) / 2.0;
    const double denom = bessel_i0(beta);
    double sum = 0.0;
    for (int n = 0; n < taps; ++n) {
        const double t = n - mid;
        const double sinc = std::sin(2.0 * M_PI * cutoff * t) / (M_PI * t);  // t never 0, taps even
        const double r = 2.0 * t / (taps - 1);
        const double win = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / denom;
        p[n] = sinc * win;
        sum += p[n];
    }
    for (double& v : p) v /= sum;
    return p;
}

PqmfBank modulate(int num_bands, int taps, double cutoff, double beta) {
    PqmfBank bank;
    bank.num_bands = num_bands;
    bank.taps_per_filter = taps;
    bank.cutoff = cutoff;
    bank.kaiser_beta = beta;
    bank.prototype = prototype_filter(taps, cutoff, beta);
    bank.analysis_filters.assign(num_bands, std::vector<double>(taps));
    bank.synthesis_filters.assign(num_bands, std::vector<double>(taps));
    const double mid = (taps - 1) / 2.0;
    for (int k = 0; k < num_bands; ++k) {
        const double phase = (k % 2 == 0 ? 1.0 : -1.0) * M_PI / 4.0;
        const double omega = (2 * k + 1) * M_PI / (2.0 * num_bands);
        for (int n = 0; n < taps; ++n) {
            bank.analysis_filters[k][n] =
                2.0 * bank.prototype[n] * std::cos(omega * (n - mid) + phase);
        }
        // Time-reversed analysis filter scaled by the band count.
        for (int n = 0; n < taps; ++n) {
            bank.synthesis_filters[k][n] = num_bands * bank.analysis_filters[k][taps - 1 - n];
        }
    }
    return bank;
}

double roundtrip_error_db(const PqmfBank& bank, const AudioBuffer& probe) {
    SubbandSignals sb = pqmf_analysis(probe, bank);
    AudioBuffer rec = pqmf_synthesis(sb, bank);
    double num = 0.0, den = 0.0;
    // Skip the edge regions the filter transients occupy.
    const size_t guard = static_cast<size_t>(bank.taps_per_filter);
    for (size_t i = guard; i + guard < probe.samples.size(); ++i) {
        const double d = rec.samples[i] - probe.samples[i];
        num += d * d;
        den += probe.samples[i] * probe.samples[i];
    }
    if (den == 0.0) return 0.0;
    return 10.0 * std::log10(std::max(num / den, 1e-300));
}

}  // namespace

PqmfBank design_pqmf(int num_bands, int taps, double kaiser_beta) {
    if (num_bands < 2) throw std::invalid_argument("design_pqmf: need at least 2 bands");
    if (taps < 4 * num_bands || taps % 2 != 0) {
        throw std::invalid_argument("design_pqmf: taps must be even and >= 4*num_bands");
    }

    // Fixed broadband probe for the cutoff scan.
    Rng rng(0x9a5f20c1u);
    AudioBuffer probe;
    probe.sample_rate = 22050;
    probe.samples.resize(4096);
    for (double& s : probe.samples) s = rng.uniform(-1.0, 1.0);

    const double base = 1.0 / (4.0 * num_bands);
    PqmfBank best;
    double best_err = 1e9;
    for (int i = 0; i <= 70; ++i) {
        const double cutoff = base * (0.60 + 0.01 * i);
        PqmfBank cand = modulate(num_bands, taps, cutoff, kaiser_beta);
        const double err = roundtrip_error_db(cand, probe);
        if (err < best_err) {
            best_err = err;
            best = std::move(cand);
        }
    }
    return best;
}

SubbandSignals pqmf_analysis(const AudioBuffer& x, const PqmfBank& bank) {
    if (x.samples.empty()) throw std::invalid_argument("pqmf_analysis: empty input");
    const int K = bank.num_bands;
    const int T = bank.taps_per_filter;
    const size_t padded = (x.samples.size() + K - 1) / K * K;
    const size_t band_len = padded / K;

    SubbandSignals sb;
    sb.source_len = x.samples.size();
    sb.sample_rate = x.sample_rate;
    sb.bands.assign(K, std::vector<double>(band_len, 0.0));
    for (int k = 0; k < K; ++k) {
        const std::vector<double>& h = bank.analysis_filters[k];
        std::vector<double>& band = sb.bands[k];
        for (size_t m = 0; m < band_len; ++m) {
            const long long n = static_cast<long long>(m) * K;
            double acc = 0.0;
            const int t_end = static_cast<int>(std::min<long long>(T, n + 1));
            for (int t = 0; t < t_end; ++t) {
                const size_t idx = static_cast<size_t>(n - t);
                if (idx < x.samples.size()) acc += h[t] * x.samples[idx];
            }
            band[m] = acc;
        }
    }
    return sb;
}

AudioBuffer pqmf_synthesis(const SubbandSignals& sb, const PqmfBank& bank) {
    const int K = bank.num_bands;
    const int T = bank.taps_per_filter;
    if (static_cast<int>(sb.bands.size()) != K) {
        throw std::invalid_argument("pqmf_synthesis: band count does not match bank");
    }
    const size_t band_len = sb.bands[0].size();
    for (const auto& b : sb.bands) {
        if (b.size() != band_len) {
            throw std::invalid_argument("pqmf_synthesis: band length mismatch");
        }
    }

    const size_t full_len = band_len * K + T;
    std::vector<double> acc(full_len, 0.0);
    for (int k = 0; k < K; ++k) {
        const std::vector<double>& f = bank.synthesis_filters[k];
        const std::vector<double>& band = sb.bands[k];
        for (size_t m = 0; m < band_len; ++m) {
            const double v = band[m];
            if (v == 0.0) continue;
            double* dst = acc.data() + m * K;
            for (int t = 0; t < T; ++t) dst[t] += v * f[t];
        }
    }

    const size_t delay = static_cast<size_t>(T - 1);
    const size_t out_len = sb.source_len > 0 ? sb.source_len : band_len * K;
    AudioBuffer out;
    out.sample_rate = sb.sample_rate > 0 ? sb.sample_rate : 22050;
    out.samples.assign(out_len, 0.0);
    for (size_t i = 0; i < out_len; ++i) {
        const size_t j = i + delay;
        if (j < full_len) out.samples[i] = acc[j];
    }
    return out;
}

std::vector<double> pqmf_analysis_backward(const std::vector<std::vector<double>>& grad_bands,
                                           const PqmfBank& bank, size_t source_len) {
    const int K = bank.num_bands;
    const int T = bank.taps_per_filter;
    if (static_cast<int>(grad_bands.size()) != K) {
        throw std::invalid_argument("pqmf_analysis_backward: band count mismatch");
    }
    std::vector<double> grad(source_len, 0.0);
    for (int k = 0; k < K; ++k) {
        const std::vector<double>& h = bank.analysis_filters[k];
        const std::vector<double>& gb = grad_bands[k];
        for (size_t m = 0; m < gb.size(); ++m) {
            const double g = gb[m];
            if (g == 0.0) continue;
            const long long n0 = static_cast<long long>(m) * K;
            for (int t = 0; t < T; ++t) {
                const long long idx = n0 - t;
                if (idx >= 0 && idx < static_cast<long long>(source_len)) {
                    grad[static_cast<size_t>(idx)] += g * h[t];
                }
            }
        }
    }
    return grad;
}

BandGrouping BandGrouping::equal_thirds(int num_bands) {
    BandGrouping g;
    const int a = num_bands / 3;
    const int b = (2 * num_bands) / 3;
    g.ranges[0] = {0, a};
    g.ranges[1] = {a, b};
    g.ranges[2] = {b, num_bands};
    return g;
}

GroupedSubbands group_bands(const SubbandSignals& sb, const BandGrouping& grouping) {
    const int K = static_cast<int>(sb.bands.size());
    std::vector<int> covered(static_cast<size_t>(K), 0);
    for (const BandRange& r : grouping.ranges) {
        if (r.begin < 0 || r.end > K || r.begin >= r.end) {
            throw std::invalid_argument("group_bands: range out of bounds");
        }
        for (int k = r.begin; k < r.end; ++k) ++covered[k];
    }
    for (int k = 0; k < K; ++k) {
        if (covered[k] != 1) {
            throw std::invalid_argument("group_bands: ranges must partition the bands");
        }
    }
    auto take = [&](const BandRange& r) {
        SubbandSignals part;
        part.source_len = sb.source_len;
        part.sample_rate = sb.sample_rate;
        part.bands.assign(sb.bands.begin() + r.begin, sb.bands.begin() + r.end);
        return part;
    };
    return {take(grouping.ranges[0]), take(grouping.ranges[1]), take(grouping.ranges[2])};
}

}  // namespace fagan
