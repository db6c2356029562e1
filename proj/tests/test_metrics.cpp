#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fagan/errors.hpp"
#include "fagan/mel.hpp"
#include "fagan/metrics.hpp"
#include "fagan/rng.hpp"
#include "test_util.hpp"

using namespace fagan;

namespace {

// Straight-line MCD oracle: own DCT, own log-mel path via mel_spectrogram.
double oracle_mcd(const AudioBuffer& x, const AudioBuffer& y) {
    StftConfig cfg;
    const MelSpectrogram a = mel_spectrogram(x, cfg);
    const MelSpectrogram b = mel_spectrogram(y, cfg);
    const int n = a.n_mels;
    double acc = 0.0;
    for (int f = 0; f < a.frames; ++f) {
        double dist2 = 0.0;
        for (int k = 1; k <= 13; ++k) {
            double ca = 0.0, cb = 0.0;
            for (int i = 0; i < n; ++i) {
                const double basis =
                    std::sqrt(2.0 / n) * std::cos(M_PI * (2.0 * i + 1.0) * k / (2.0 * n));
                ca += basis * a.at(f, i);
                cb += basis * b.at(f, i);
            }
            dist2 += (ca - cb) * (ca - cb);
        }
        acc += std::sqrt(dist2);
    }
    return 10.0 * std::sqrt(2.0) / std::log(10.0) * acc / a.frames;
}

}  // namespace

TEST_CASE("mcd identities, gain invariance, oracle agreement") {
    AudioBuffer x = testutil::noise(0.3, 22050, 1, 0.4);
    CHECK(mcd(x, x) == 0.0);

    for (double g : {0.5, 2.0}) {
        AudioBuffer gx = x;
        for (double& v : gx.samples) v *= g;
        CHECK(std::fabs(mcd(x, gx)) <= 1e-9);  // gain lives entirely in c0
    }

    AudioBuffer y = testutil::noise(0.3, 22050, 2, 0.4);
    CHECK(std::fabs(mcd(x, y) - oracle_mcd(x, y)) <= 1e-9);
    CHECK(mcd(x, y) == doctest::Approx(mcd(y, x)));  // symmetric norm

    AudioBuffer shorter = x;
    shorter.samples.pop_back();
    CHECK_THROWS_AS(mcd(x, shorter), std::invalid_argument);
}

TEST_CASE("lsd identities and the log10-2 law") {
    AudioBuffer x = testutil::noise(0.3, 22050, 3, 0.4);
    CHECK(lsd(x, x) == 0.0);

    AudioBuffer gx = x;
    for (double& v : gx.samples) v *= 2.0;
    CHECK(lsd(x, gx) == doctest::Approx(std::log10(2.0)).epsilon(1e-9));

    AudioBuffer y = testutil::noise(0.3, 22050, 4, 0.4);
    CHECK(lsd(x, y) == doctest::Approx(lsd(y, x)));  // symmetric

    // Gain perturbation bound: |lsd(x, g*y) - lsd(x, y)| <= log10 g.
    AudioBuffer gy = y;
    for (double& v : gy.samples) v *= 3.0;
    CHECK(std::fabs(lsd(x, gy) - lsd(x, y)) <= std::log10(3.0) + 1e-12);
}

TEST_CASE("banded lsd: full is bounded by band extremes") {
    AudioBuffer x = testutil::noise(0.3, 22050, 5, 0.4);
    AudioBuffer y = testutil::noise(0.3, 22050, 6, 0.4);
    const BandLsd b = banded_lsd(x, y);
    const double mn = std::min({b.low, b.mid, b.high});
    const double mx = std::max({b.low, b.mid, b.high});
    CHECK(b.full >= mn - 1e-12);
    CHECK(b.full <= mx + 1e-12);
}

TEST_CASE("f0 estimation: pure tone, noise, silence") {
    const AudioBuffer t220 = testutil::tone(220.0, 0.6, 22050, 0.6);
    const F0Track track = estimate_f0(t220);
    REQUIRE(track.f0.size() > 10);
    // Interior frames: skip the first/last few near the signal edges.
    for (size_t i = 3; i + 3 < track.f0.size(); ++i) {
        REQUIRE(track.voicing[i]);
        REQUIRE(std::fabs(track.f0[i] - 220.0) <= 0.5);
    }

    const AudioBuffer wn = testutil::noise(0.6, 22050, 7, 0.5);
    const F0Track noisy = estimate_f0(wn);
    size_t unvoiced = 0;
    for (bool v : noisy.voicing) unvoiced += v ? 0 : 1;
    CHECK(static_cast<double>(unvoiced) / noisy.voicing.size() >= 0.9);

    AudioBuffer silence;
    silence.sample_rate = 22050;
    silence.samples.assign(22050 / 2, 0.0);
    const F0Track quiet = estimate_f0(silence);
    for (bool v : quiet.voicing) REQUIRE_FALSE(v);
}

TEST_CASE("f0 rmse: identity, 220-vs-225, undefined case") {
    const AudioBuffer a = testutil::tone(220.0, 0.6, 22050, 0.6);
    const F0RmseResult same = f0_rmse(a, a);
    CHECK(same.defined);
    CHECK(same.hz == doctest::Approx(0.0));

    const AudioBuffer b = testutil::tone(225.0, 0.6, 22050, 0.6);
    const F0RmseResult near5 = f0_rmse(a, b);
    CHECK(near5.defined);
    CHECK(std::fabs(near5.hz - 5.0) <= 0.5);

    const AudioBuffer wn = testutil::noise(0.6, 22050, 8, 0.5);
    const F0RmseResult undef = f0_rmse(a, wn);
    CHECK_FALSE(undef.defined);
    CHECK(std::isnan(undef.hz));
}

TEST_CASE("aliasing energy: clean tone and zero-stuffed images") {
    const int sr = 22050;
    const AudioBuffer clean = testutil::tone(1000.0, 0.5, sr, 0.7);
    const double clean_db = aliasing_energy(clean, 1000.0, {4512.5, 6512.5, 10025.0});
    CHECK(clean_db <= -60.0);

    // Zero-stuff 2x: the image at rate - f0 replicates the fundamental.
    AudioBuffer stuffed;
    stuffed.sample_rate = 2 * sr;
    stuffed.samples.assign(clean.samples.size() * 2, 0.0);
    for (size_t i = 0; i < clean.samples.size(); ++i) {
        stuffed.samples[2 * i] = clean.samples[i];
    }
    const double img_db = aliasing_energy(stuffed, 1000.0, {sr - 1000.0});
    CHECK(std::fabs(img_db) <= 3.0);  // image within 3 dB of the fundamental

    CHECK_THROWS_AS(
        aliasing_energy(AudioBuffer{{std::vector<double>(100, 0.0)}, sr}, 500.0, {1000.0}),
        NumericError);
}

TEST_CASE("compute_metrics bundles a full report") {
    const AudioBuffer a = testutil::tone(220.0, 0.5, 22050, 0.6);
    const MetricReport same = compute_metrics(a, a);
    CHECK(same.mcd == 0.0);
    CHECK(same.lsd == 0.0);
    CHECK(same.f0_defined);
    CHECK(same.f0_rmse == doctest::Approx(0.0));
    CHECK(same.lsd_low == 0.0);
    CHECK(same.lsd_mid == 0.0);
    CHECK(same.lsd_high == 0.0);
}
