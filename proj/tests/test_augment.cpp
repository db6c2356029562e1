#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "fagan/augment.hpp"
#include "fagan/metrics.hpp"
#include "fagan/rng.hpp"
#include "test_util.hpp"

using namespace fagan;

namespace {

double measured_snr_db(const AudioBuffer& clean, const AudioBuffer& noisy) {
    double sig = 0.0, noise = 0.0;
    for (size_t i = 0; i < clean.samples.size(); ++i) {
        sig += clean.samples[i] * clean.samples[i];
        const double d = noisy.samples[i] - clean.samples[i];
        noise += d * d;
    }
    return 10.0 * std::log10(sig / noise);
}

}  // namespace

TEST_CASE("add_noise hits the requested SNR and is seed-deterministic") {
    const AudioBuffer x = testutil::tone(440.0, 1.0, 22050, 0.5);

    const AudioBuffer y30 = add_noise(x, 30.0, 7);
    CHECK(std::fabs(measured_snr_db(x, y30) - 30.0) <= 0.5);

    const AudioBuffer again = add_noise(x, 30.0, 7);
    REQUIRE(again.samples == y30.samples);

    const AudioBuffer other = add_noise(x, 30.0, 8);
    CHECK(other.samples != y30.samples);

    const AudioBuffer ident = add_noise(x, std::numeric_limits<double>::infinity(), 7);
    REQUIRE(ident.samples == x.samples);
}

TEST_CASE("add_noise realized SNR accurate across [28, 40] over 100 draws") {
    const AudioBuffer x = testutil::noise(0.5, 22050, 4242, 0.4);
    for (uint64_t seed = 1; seed <= 100; ++seed) {
        const double snr = 28.0 + 12.0 * static_cast<double>(seed - 1) / 99.0;
        const AudioBuffer y = add_noise(x, snr, seed);
        REQUIRE(std::fabs(measured_snr_db(x, y) - snr) <= 0.5);
    }
}

TEST_CASE("add_noise_random_snr draws inside [28, 40]") {
    const AudioBuffer x = testutil::tone(300.0, 0.3, 22050, 0.5);
    for (uint64_t seed = 1; seed <= 20; ++seed) {
        double chosen = 0.0;
        const AudioBuffer y = add_noise_random_snr(x, seed, &chosen);
        CHECK(chosen >= 28.0);
        CHECK(chosen <= 40.0);
        CHECK(std::fabs(measured_snr_db(x, y) - chosen) <= 0.5);
    }
}

TEST_CASE("harmonic shift moves tone F0 by the requested ratio") {
    const AudioBuffer t220 = testutil::tone(220.0, 1.0, 22050, 0.6);

    const AudioBuffer same = harmonic_shift(t220, 1.0);
    REQUIRE(same.samples.size() == t220.samples.size());
    const F0RmseResult near0 = f0_rmse(t220, same);
    REQUIRE(near0.defined);
    CHECK(near0.hz <= 0.5);

    const AudioBuffer up = harmonic_shift(t220, 1.5);
    REQUIRE(up.samples.size() == t220.samples.size());
    const F0Track up_track = estimate_f0(up);
    double mean_f0 = 0.0;
    int voiced = 0;
    for (size_t i = 5; i + 15 < up_track.f0.size(); ++i) {
        if (up_track.voicing[i]) {
            mean_f0 += up_track.f0[i];
            ++voiced;
        }
    }
    REQUIRE(voiced > 0);
    CHECK(std::fabs(mean_f0 / voiced - 330.0) <= 1.0);

    const AudioBuffer t440 = testutil::tone(440.0, 1.0, 22050, 0.6);
    const AudioBuffer down = harmonic_shift(t440, 0.5);
    const F0Track down_track = estimate_f0(down);
    mean_f0 = 0.0;
    voiced = 0;
    for (size_t i = 5; i + 15 < down_track.f0.size(); ++i) {
        if (down_track.voicing[i]) {
            mean_f0 += down_track.f0[i];
            ++voiced;
        }
    }
    REQUIRE(voiced > 0);
    CHECK(std::fabs(mean_f0 / voiced - 220.0) <= 1.0);

    CHECK_THROWS_AS(harmonic_shift(t220, 0.0), std::invalid_argument);
}

TEST_CASE("lossy compression proxy: transparency, attenuation, idempotence") {
    const int sr = 22050;

    // 16 bits at Nyquist cutoff: near-transparent.
    const AudioBuffer x = testutil::tone(440.0, 0.5, sr, 0.5);
    const AudioBuffer hi = lossy_compress_proxy(x, sr / 2.0, 16);
    CHECK(measured_snr_db(x, hi) >= 60.0);

    // 10 kHz tone against an 8 kHz cutoff: >= 40 dB down.
    const AudioBuffer t10k = testutil::tone(10000.0, 0.5, sr, 0.5);
    const AudioBuffer cut = lossy_compress_proxy(t10k, 8000.0, 16);
    const double atten =
        20.0 * std::log10(testutil::rms(cut.samples) / testutil::rms(t10k.samples));
    CHECK(atten <= -40.0);

    // Idempotence within one LSB-equivalent RMS.
    const AudioBuffer once = lossy_compress_proxy(x, 8000.0, 8);
    const AudioBuffer twice = lossy_compress_proxy(once, 8000.0, 8);
    double rms_diff = 0.0;
    for (size_t i = 0; i < once.samples.size(); ++i) {
        const double d = twice.samples[i] - once.samples[i];
        rms_diff += d * d;
    }
    rms_diff = std::sqrt(rms_diff / once.samples.size());
    CHECK(rms_diff <= 2.0 / 256.0);

    CHECK_THROWS_AS(lossy_compress_proxy(x, 8000.0, 1), std::invalid_argument);
}

TEST_CASE("rational resampler keeps tone frequency content") {
    const AudioBuffer t500 = testutil::tone(500.0, 0.5, 22050, 0.6);
    const AudioBuffer up = resample_rational(t500, 2, 1);
    CHECK(up.samples.size() == 2 * t500.samples.size());
    // Same physical tone when played at twice the rate.
    AudioBuffer up_rated = up;
    up_rated.sample_rate = 44100;
    const F0Track track = estimate_f0(up_rated);
    int voiced = 0;
    double mean = 0.0;
    for (size_t i = 5; i + 5 < track.f0.size(); ++i) {
        if (track.voicing[i]) {
            mean += track.f0[i];
            ++voiced;
        }
    }
    REQUIRE(voiced > 0);
    CHECK(std::fabs(mean / voiced - 500.0) <= 1.0);
}
