#include "fagan/train.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "fagan/errors.hpp"
#include "fagan/loss_grads.hpp"
#include "fagan/metrics.hpp"
#include "fagan/optim.hpp"
#include "fagan/rng.hpp"

namespace fagan::nets {

TrainConfig TrainConfig::adversarial_defaults() {
    TrainConfig cfg;
    cfg.mode = TrainMode::adversarial;
    cfg.steps = 500;
    cfg.batch = 2;
    cfg.segment = 2048;
    return cfg;
}

namespace {

constexpr int kUpsampleFactor = 16;
// Components stay below the decimated Nyquist (sample_rate / 32).
constexpr double kToneFreqLo = 60.0;
constexpr double kToneFreqHi = 500.0;

std::vector<double> synth_segment(Rng& rng, int segment, int sample_rate) {
    std::vector<double> x(static_cast<size_t>(segment), 0.0);
    const int n_comp = 1 + static_cast<int>(rng.uniform_int(5));
    for (int c = 0; c < n_comp; ++c) {
        const bool chirp = rng.uniform() < 0.3;
        const double f0 = rng.uniform(kToneFreqLo, kToneFreqHi);
        const double f1 = chirp ? rng.uniform(kToneFreqLo, kToneFreqHi) : f0;
        const double amp = rng.uniform(0.2, 1.0);
        const double phase = rng.uniform(0.0, 2.0 * M_PI);
        const double dur = static_cast<double>(segment) / sample_rate;
        for (int i = 0; i < segment; ++i) {
            const double t = static_cast<double>(i) / sample_rate;
            const double ph = 2.0 * M_PI * (f0 * t + 0.5 * (f1 - f0) / dur * t * t) + phase;
            x[static_cast<size_t>(i)] += amp * std::sin(ph);
        }
    }
    double peak = 0.0;
    for (double v : x) peak = std::max(peak, std::fabs(v));
    if (peak > 0.0) {
        const double scale = 0.85 / peak;
        for (double& v : x) v *= scale;
    }
    return x;
}

Tensor decimate_to_tensor(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size()) / kUpsampleFactor;
    Tensor t = Tensor::zeros2(1, n);
    for (int i = 0; i < n; ++i) t.at(0, i) = x[static_cast<size_t>(i) * kUpsampleFactor];
    return t;
}

AudioBuffer to_buffer(const std::vector<double>& x, int sample_rate) {
    AudioBuffer b;
    b.sample_rate = sample_rate;
    b.samples = x;
    return b;
}

AudioBuffer tensor_to_buffer(const Tensor& t, int sample_rate) {
    AudioBuffer b;
    b.sample_rate = sample_rate;
    b.samples.assign(t.data.begin(), t.data.end());
    return b;
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

ToyDataset make_toy_dataset(int train_n, int heldout_n, int segment, int sample_rate,
                            uint64_t seed) {
    if (segment % kUpsampleFactor != 0) {
        throw std::invalid_argument("make_toy_dataset: segment must be a multiple of 16");
    }
    ToyDataset data;
    data.sample_rate = sample_rate;
    data.segment = segment;
    Rng rng(seed);
    for (int i = 0; i < train_n; ++i) data.train.push_back(synth_segment(rng, segment, sample_rate));
    for (int i = 0; i < heldout_n; ++i) {
        data.heldout.push_back(synth_segment(rng, segment, sample_rate));
    }
    const double probe_freqs[] = {100.0, 150.0, 220.0, 300.0, 380.0, 450.0, 500.0};
    for (double f : probe_freqs) {
        std::vector<double> tone(static_cast<size_t>(segment));
        for (int i = 0; i < segment; ++i) {
            tone[static_cast<size_t>(i)] =
                0.7 * std::sin(2.0 * M_PI * f * i / sample_rate);
        }
        data.tone_probes.push_back(std::move(tone));
    }
    return data;
}

HeldoutMetrics evaluate_heldout(ToyGenerator& gen, const ToyDataset& data) {
    HeldoutMetrics m;
    const MultiResConfig mrc = MultiResConfig::defaults();
    for (const std::vector<double>& x : data.heldout) {
        const Tensor in = decimate_to_tensor(x);
        Tensor y = gen.forward(in);
        const AudioBuffer ref = to_buffer(x, data.sample_rate);
        const AudioBuffer out = tensor_to_buffer(y, data.sample_rate);
        m.mel += mel_loss(ref, out);
        m.mr_ri += mr_ri_loss(ref, out, mrc).total;
        m.lsd += banded_lsd(ref, out).full;
    }
    const double n = static_cast<double>(data.heldout.size());
    m.mel /= n;
    m.mr_ri /= n;
    m.lsd /= n;

    double high = 0.0;
    for (const std::vector<double>& x : data.tone_probes) {
        const Tensor in = decimate_to_tensor(x);
        Tensor y = gen.forward(in);
        high += banded_lsd(to_buffer(x, data.sample_rate),
                           tensor_to_buffer(y, data.sample_rate))
                    .high;
    }
    m.lsd_high_tones = high / static_cast<double>(data.tone_probes.size());
    return m;
}

namespace {

struct RegressionTargets {
    std::vector<MelSpectrogram> mel;
    std::vector<MrRiTarget> mrri;
};

RegressionTargets make_targets(const ToyDataset& data, const MelAnalyzer& analyzer,
                               const MultiResConfig& mrc, bool use_mr_ri) {
    RegressionTargets t;
    for (const std::vector<double>& x : data.train) {
        const AudioBuffer b = to_buffer(x, data.sample_rate);
        t.mel.push_back(analyzer.analyze(b));
        if (use_mr_ri) t.mrri.push_back(make_mr_ri_target(b, mrc));
    }
    return t;
}

}  // namespace

TrainOutcome train_toy(const TrainConfig& cfg) {
    validate(cfg.weights);
    if (cfg.steps < 1 || cfg.batch < 1 || cfg.segment < kUpsampleFactor) {
        throw std::invalid_argument("train_toy: bad config");
    }

    const ToyDataset data = make_toy_dataset(cfg.train_segments, cfg.heldout_segments,
                                             cfg.segment, cfg.sample_rate, cfg.seed);

    GeneratorConfig gcfg;
    gcfg.twin_mode = cfg.twin_mode;
    gcfg.init_seed = cfg.seed ^ 0x47454eull;  // generator init stream
    TrainOutcome outcome;
    outcome.generator = std::make_shared<ToyGenerator>(gcfg);
    ToyGenerator& gen = *outcome.generator;

    AdamConfig acfg;
    acfg.lr = cfg.lr;
    acfg.beta1 = cfg.adam_beta1;
    acfg.beta2 = cfg.adam_beta2;
    AdamState adam_g(gen.params(), acfg);

    const StftConfig mel_cfg;  // 1024/1024/256
    const MelAnalyzer analyzer(cfg.sample_rate, mel_cfg, 80);
    const MultiResConfig mrc = MultiResConfig::defaults();
    const RegressionTargets targets = make_targets(data, analyzer, mrc, cfg.use_mr_ri);

    std::unique_ptr<DiscriminatorBank> bank;
    std::unique_ptr<AdamState> adam_d;
    if (cfg.mode == TrainMode::adversarial) {
        DiscriminatorBankConfig dcfg;
        dcfg.init_seed = cfg.seed ^ 0x444953ull;  // discriminator init stream
        bank = std::make_unique<DiscriminatorBank>(dcfg);
        adam_d = std::make_unique<AdamState>(bank->params(), acfg);
    }

    TrainingReport& report = outcome.report;
    report.initial_heldout_mel = evaluate_heldout(gen, data).mel;

    Rng batch_rng(cfg.seed ^ 0x42415443ull);
    const double inv_batch = 1.0 / static_cast<double>(cfg.batch);

    for (int step = 1; step <= cfg.steps; ++step) {
        StepRecord rec;
        rec.step = step;

        std::vector<size_t> batch(static_cast<size_t>(cfg.batch));
        for (size_t& idx : batch) idx = batch_rng.uniform_int(data.train.size());

        // Generated waveforms of this batch (adversarial mode reuses them).
        std::vector<Tensor> inputs, outputs;
        std::vector<AudioBuffer> fakes;
        inputs.reserve(batch.size());

        if (cfg.mode == TrainMode::adversarial) {
            for (size_t idx : batch) {
                inputs.push_back(decimate_to_tensor(data.train[idx]));
                outputs.push_back(gen.forward(inputs.back()));
                fakes.push_back(tensor_to_buffer(outputs.back(), cfg.sample_rate));
            }

            // Discriminator update.
            bank->zero_grad();
            double d_loss = 0.0;
            for (size_t s = 0; s < batch.size(); ++s) {
                const AudioBuffer real = to_buffer(data.train[batch[s]], cfg.sample_rate);
                for (int n = 0; n < bank->count(); ++n) {
                    DiscOutput r = bank->forward_one(n, real);
                    const double cells_r = static_cast<double>(r.score.size());
                    Tensor gs = r.score;
                    double acc = 0.0;
                    for (size_t i = 0; i < gs.data.size(); ++i) {
                        const double v = r.score.data[i];
                        acc += (1.0 - v) * (1.0 - v);
                        gs.data[i] = -2.0 * (1.0 - v) / cells_r * inv_batch;
                    }
                    d_loss += acc / cells_r * inv_batch;
                    bank->backward_one(n, gs, nullptr);

                    DiscOutput f = bank->forward_one(n, fakes[s]);
                    const double cells_f = static_cast<double>(f.score.size());
                    Tensor gf = f.score;
                    acc = 0.0;
                    for (size_t i = 0; i < gf.data.size(); ++i) {
                        const double v = f.score.data[i];
                        acc += v * v;
                        gf.data[i] = 2.0 * v / cells_f * inv_batch;
                    }
                    d_loss += acc / cells_f * inv_batch;
                    bank->backward_one(n, gf, nullptr);
                }
            }
            rec.adv_d = d_loss;
            adam_d->step();
        }

        // Generator update.
        gen.zero_grad();
        for (size_t s = 0; s < batch.size(); ++s) {
            const size_t idx = batch[s];
            if (cfg.mode == TrainMode::regression) {
                inputs.push_back(decimate_to_tensor(data.train[idx]));
                outputs.push_back(gen.forward(inputs.back()));
                fakes.push_back(tensor_to_buffer(outputs.back(), cfg.sample_rate));
            } else {
                // Refresh the forward pass so layer caches match this sample.
                outputs[s] = gen.forward(inputs[s]);
                fakes[s] = tensor_to_buffer(outputs[s], cfg.sample_rate);
            }
            const AudioBuffer& fake = fakes[s];

            std::vector<double> gsig(fake.samples.size(), 0.0);

            const MelGradResult mel = mel_loss_with_grad(analyzer, targets.mel[idx], fake);
            rec.mel += mel.loss * inv_batch;
            for (size_t i = 0; i < gsig.size(); ++i) {
                gsig[i] += cfg.weights.lambda_mel * mel.grad[i];
            }

            if (cfg.use_mr_ri) {
                const MrRiGradResult ri = mr_ri_loss_with_grad(targets.mrri[idx], fake);
                rec.mr_ri += ri.value.total * inv_batch;
                for (size_t i = 0; i < gsig.size(); ++i) {
                    gsig[i] += cfg.weights.lambda_ri * ri.grad[i];
                }
            }

            if (cfg.mode == TrainMode::adversarial) {
                const AudioBuffer real = to_buffer(data.train[idx], cfg.sample_rate);
                for (int n = 0; n < bank->count(); ++n) {
                    DiscOutput r = bank->forward_one(n, real);
                    DiscOutput f = bank->forward_one(n, fake);

                    const double cells = static_cast<double>(f.score.size());
                    Tensor gs = f.score;
                    double adv_acc = 0.0;
                    for (size_t i = 0; i < gs.data.size(); ++i) {
                        const double v = f.score.data[i];
                        adv_acc += (1.0 - v) * (1.0 - v);
                        gs.data[i] = cfg.weights.lambda_g * -2.0 * (1.0 - v) / cells;
                    }
                    rec.adv_g += adv_acc / cells * inv_batch;

                    // Feature matching grads on the fake features.
                    std::vector<Tensor> fgrads;
                    const double layers = static_cast<double>(f.features.size());
                    double fm_acc = 0.0;
                    for (size_t l = 0; l < f.features.size(); ++l) {
                        Tensor fg = f.features[l];
                        const double cells_l = static_cast<double>(fg.size());
                        for (size_t i = 0; i < fg.data.size(); ++i) {
                            const double diff = f.features[l].data[i] - r.features[l].data[i];
                            fm_acc += std::fabs(diff) / cells_l;
                            const double sg = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
                            fg.data[i] = cfg.weights.lambda_fm * sg / (cells_l * layers);
                        }
                        fgrads.push_back(std::move(fg));
                    }
                    rec.fm += fm_acc / layers * inv_batch;

                    const std::vector<double> gd = bank->backward_one(n, gs, &fgrads);
                    for (size_t i = 0; i < gsig.size(); ++i) gsig[i] += gd[i];
                }
            }

            Tensor gy = Tensor::zeros2(1, static_cast<int>(gsig.size()));
            for (size_t i = 0; i < gsig.size(); ++i) {
                gy.at(0, static_cast<int>(i)) = gsig[i] * inv_batch;
            }
            gen.backward(gy);
        }

        rec.total = cfg.weights.lambda_g * rec.adv_g + cfg.weights.lambda_ri * rec.mr_ri +
                    cfg.weights.lambda_mel * rec.mel + cfg.weights.lambda_fm * rec.fm;
        report.steps.push_back(rec);

        if (!finite(rec.total) || !finite(rec.adv_d)) {
            report.diverged = true;
            report.diverged_step = step;
            break;
        }
        adam_g.step();
    }

    report.final_heldout = evaluate_heldout(gen, data);
    return outcome;
}

void write_report_csv(const TrainingReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw FormatError("cannot write report CSV: " + path);
    out << "step,total,mel,mr_ri,adv_g,adv_d,fm\n";
    char line[256];
    for (const StepRecord& r : report.steps) {
        std::snprintf(line, sizeof(line), "%d,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", r.step,
                      r.total, r.mel, r.mr_ri, r.adv_g, r.adv_d, r.fm);
        out << line;
    }
}

}  // namespace fagan::nets
