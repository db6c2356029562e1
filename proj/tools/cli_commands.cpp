// Subcommands: stft, mel, spectrogram-image, metrics, loss ri, pqmf
// split|merge, augment noise|pitch|codec, upsample-demo, train-toy,
// grad-check. Exit codes: 0 ok, 2 usage, 3 input format, 4 numerical.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fagan/audio.hpp"
#include "fagan/augment.hpp"
#include "fagan/checkpoint.hpp"
#include "fagan/demo.hpp"
#include "fagan/errors.hpp"
#include "fagan/gradcheck.hpp"
#include "fagan/losses.hpp"
#include "fagan/mel.hpp"
#include "fagan/metrics.hpp"
#include "fagan/pgm.hpp"
#include "fagan/pqmf.hpp"
#include "fagan/runconfig.hpp"
#include "fagan/stft.hpp"
#include "fagan/train.hpp"

namespace fs = std::filesystem;
using namespace fagan;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitFormat = 3;
constexpr int kExitNumeric = 4;

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = ".";
    uint64_t seed = 0;
    bool seed_set = false;
};

RunConfig load_run_config(const GlobalOpts& g) {
    RunConfig cfg;
    std::string path = g.config_path;
    if (path.empty()) {
        const char* env = std::getenv("FAGAN_CONFIG");
        if (env != nullptr && env[0] != '\0') path = env;
    }
    if (!path.empty()) cfg = RunConfig::load(path);
    if (g.seed_set) cfg.seed = g.seed;
    return cfg;
}

void echo_config(const RunConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::ofstream out(out_dir + "/effective_config.txt", std::ios::trunc);
    out << cfg.to_text();
}

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void write_metrics_csv_header(std::ostream& out) {
    out << "file,mcd,f0_rmse,lsd,lsd_L,lsd_M,lsd_H\n";
}

void write_metrics_row(std::ostream& out, const std::string& name, const MetricReport& r) {
    out << name << ',' << fmt9(r.mcd) << ',' << (r.f0_defined ? fmt9(r.f0_rmse) : "nan")
        << ',' << fmt9(r.lsd) << ',' << fmt9(r.lsd_low) << ',' << fmt9(r.lsd_mid) << ','
        << fmt9(r.lsd_high) << '\n';
}

// ---------------------------------------------------------------------------

int cmd_stft(const GlobalOpts& g, const std::string& input, const std::string& output,
             bool mel_mode) {
    const RunConfig cfg = load_run_config(g);
    echo_config(cfg, g.out_dir);
    const AudioBuffer x = load_wav(input);
    const std::string out_path = g.out_dir + "/" + output;
    if (mel_mode) {
        const MelSpectrogram m =
            mel_spectrogram(x, cfg.stft, cfg.mel_n_mels, cfg.mel_fmin, cfg.mel_fmax);
        write_mel_csv(m, out_path);
    } else {
        write_spectrogram_csv(stft(x, cfg.stft), out_path);
    }
    std::cout << out_path << "\n";
    return kExitOk;
}

int cmd_spectrogram_image(const GlobalOpts& g, const std::string& input,
                          const std::string& output, double db_range) {
    const RunConfig cfg = load_run_config(g);
    echo_config(cfg, g.out_dir);
    const AudioBuffer x = load_wav(input);
    const std::string out_path = g.out_dir + "/" + output;
    write_spectrogram_pgm(stft(x, cfg.stft), out_path, db_range);
    std::cout << out_path << "\n";
    return kExitOk;
}

int cmd_metrics(const GlobalOpts& g, const std::string& ref, const std::string& gen,
                const std::string& output) {
    const RunConfig cfg = load_run_config(g);
    echo_config(cfg, g.out_dir);
    fs::create_directories(g.out_dir);
    const std::string out_path = g.out_dir + "/" + output;
    std::ofstream out(out_path, std::ios::trunc);
    write_metrics_csv_header(out);

    if (fs::is_directory(ref) != fs::is_directory(gen)) {
        throw FormatError("metrics: --ref and --gen must both be files or both directories");
    }
    if (!fs::is_directory(ref)) {
        const MetricReport r = compute_metrics(load_wav(ref), load_wav(gen));
        write_metrics_row(out, fs::path(ref).filename().string(), r);
        write_metrics_row(std::cout, fs::path(ref).filename().string(), r);
        return kExitOk;
    }

    std::map<std::string, fs::path> ref_files, gen_files;
    for (const auto& e : fs::directory_iterator(ref)) {
        if (e.path().extension() == ".wav") ref_files[e.path().filename().string()] = e.path();
    }
    for (const auto& e : fs::directory_iterator(gen)) {
        if (e.path().extension() == ".wav") gen_files[e.path().filename().string()] = e.path();
    }
    for (const auto& [name, path] : ref_files) {
        auto it = gen_files.find(name);
        if (it == gen_files.end()) {
            std::cerr << "metrics: no match for " << name << " (skipped)\n";
            continue;
        }
        const MetricReport r = compute_metrics(load_wav(path.string()),
                                               load_wav(it->second.string()));
        write_metrics_row(out, name, r);  // map iteration is already name-sorted
    }
    for (const auto& [name, path] : gen_files) {
        if (ref_files.find(name) == ref_files.end()) {
            std::cerr << "metrics: no reference for " << name << " (skipped)\n";
        }
    }
    std::cout << out_path << "\n";
    return kExitOk;
}

int cmd_loss_ri(const GlobalOpts& g, const std::string& a_path, const std::string& b_path,
                const std::string& output) {
    const RunConfig cfg = load_run_config(g);
    echo_config(cfg, g.out_dir);
    const AudioBuffer a = load_wav(a_path);
    const AudioBuffer b = load_wav(b_path);

    const RiLossBreakdown single = ri_loss(a, b, cfg.stft);
    const MrRiResult multi = mr_ri_loss(a, b, MultiResConfig::defaults());

    const std::string out_path = g.out_dir + "/" + output;
    std::ofstream out(out_path, std::ios::trunc);
    out << "term,value\n";
    out << "real_l1," << fmt9(single.real_l1) << "\n";
    out << "imag_l1," << fmt9(single.imag_l1) << "\n";
    out << "magnitude_l1," << fmt9(single.magnitude_l1) << "\n";
    out << "spectral_convergence," << fmt9(single.spectral_convergence) << "\n";
    out << "total," << fmt9(single.total) << "\n";
    out << "mr_ri_total," << fmt9(multi.total) << "\n";

    std::cout << "RI loss (" << cfg.stft.window_size << "/" << cfg.stft.hop_size << ")\n"
              << "  real_l1:              " << fmt9(single.real_l1) << "\n"
              << "  imag_l1:              " << fmt9(single.imag_l1) << "\n"
              << "  magnitude_l1:         " << fmt9(single.magnitude_l1) << "\n"
              << "  spectral_convergence: " << fmt9(single.spectral_convergence)
              << (single.sc_defined ? "" : " (undefined: silent reference)") << "\n"
              << "  total:                " << fmt9(single.total) << "\n"
              << "MR-RI total (3 resolutions): " << fmt9(multi.total) << "\n";
    return kExitOk;
}

int cmd_pqmf_split(const GlobalOpts& g, const std::string& input) {
    const RunConfig cfg = load_run_config(g);
    echo_config(cfg, g.out_dir);
    const AudioBuffer x = load_wav(input);
    const PqmfBank bank = design_pqmf(cfg.pqmf_k, cfg.pqmf_taps, cfg.pqmf_beta);
    const SubbandSignals sb = pqmf_analysis(x, bank);

    fs::create_directories(g.out_dir);
    for (int k = 0; k < bank.num_bands; ++k) {
        AudioBuffer band;
        band.sample_rate = std::max(1, x.sample_rate / bank.num_bands);
        band.samples = sb.bands[static_cast<size_t>(k)];
        char name[32];
        std::snprintf(name, sizeof(name), "band_%02d.wav", k);
        save_wav(band, g.out_dir + "/" + name, WavFormat::float32);
    }
    std::ofstream meta(g.out_dir + "/pqmf_meta.txt", std::ios::trunc);
    meta << "source_len = " << sb.source_len << "\n"
         << "sample_rate = " << x.sample_rate << "\n"
         << "pqmf.k = " << cfg.pqmf_k << "\n"
         << "pqmf.taps = " << cfg.pqmf_taps << "\n"
         << "pqmf.beta = " << fmt9(cfg.pqmf_beta) << "\n";
    std::cout << g.out_dir << "/band_00.wav .. band_" << (cfg.pqmf_k - 1) << ".wav\n";
    return kExitOk;
}

int cmd_pqmf_merge(const GlobalOpts& g, const std::string& band_dir,
                   const std::string& output) {
    std::ifstream meta(band_dir + "/pqmf_meta.txt");
    if (!meta) throw FormatError("pqmf merge: missing pqmf_meta.txt in " + band_dir);
    size_t source_len = 0;
    int sample_rate = 0, k = 12, taps = 96;
    double beta = 9.0;
    std::string line;
    while (std::getline(meta, line)) {
        std::istringstream ls(line);
        std::string key, eq;
        ls >> key >> eq;
        if (key == "source_len") ls >> source_len;
        if (key == "sample_rate") ls >> sample_rate;
        if (key == "pqmf.k") ls >> k;
        if (key == "pqmf.taps") ls >> taps;
        if (key == "pqmf.beta") ls >> beta;
    }
    if (sample_rate <= 0) throw FormatError("pqmf merge: bad meta file");

    const PqmfBank bank = design_pqmf(k, taps, beta);
    SubbandSignals sb;
    sb.source_len = source_len;
    sb.sample_rate = sample_rate;
    for (int b = 0; b < k; ++b) {
        char name[32];
        std::snprintf(name, sizeof(name), "band_%02d.wav", b);
        sb.bands.push_back(load_wav(band_dir + "/" + name).samples);
    }
    const AudioBuffer out = pqmf_synthesis(sb, bank);
    fs::create_directories(g.out_dir);
    save_wav(out, g.out_dir + "/" + output, WavFormat::float32);
    std::cout << g.out_dir << "/" << output << "\n";
    return kExitOk;
}

int cmd_augment(const GlobalOpts& g, const std::string& which, const std::string& input,
                const std::string& output, double snr_db, bool snr_set, double ratio,
                double cutoff_hz, int bits, const std::string& codec_cmd) {
    const RunConfig cfg = load_run_config(g);
    echo_config(cfg, g.out_dir);
    const AudioBuffer x = load_wav(input);
    fs::create_directories(g.out_dir);

    AudioBuffer y;
    std::ostringstream sidecar;
    sidecar << "augment = " << which << "\n"
            << "input = " << input << "\n"
            << "seed = " << cfg.seed << "\n";
    if (which == "noise") {
        double chosen = snr_db;
        if (snr_set) {
            y = add_noise(x, snr_db, cfg.seed);
        } else {
            y = add_noise_random_snr(x, cfg.seed, &chosen);
        }
        sidecar << "snr_db = " << fmt9(chosen) << "\n";
    } else if (which == "pitch") {
        y = harmonic_shift(x, ratio);
        sidecar << "pitch_ratio = " << fmt9(ratio) << "\n";
    } else if (which == "codec") {
        if (!codec_cmd.empty()) {
            y = codec_shell_hook(x, codec_cmd, g.out_dir);
            sidecar << "codec_command = " << codec_cmd << "\n";
        } else {
            y = lossy_compress_proxy(x, cutoff_hz, bits);
            sidecar << "cutoff_hz = " << fmt9(cutoff_hz) << "\n"
                    << "bits = " << bits << "\n";
        }
    } else {
        throw std::invalid_argument("augment: unknown mode " + which);
    }

    const std::string out_path = g.out_dir + "/" + output;
    save_wav(y, out_path, WavFormat::float32);
    std::ofstream side(out_path + ".txt", std::ios::trunc);
    side << sidecar.str();
    std::cout << out_path << "\n";
    return kExitOk;
}

int cmd_upsample_demo(const GlobalOpts& g, double tone_hz, int stride) {
    const RunConfig cfg = load_run_config(g);
    echo_config(cfg, g.out_dir);
    UpsampleDemoConfig dcfg;
    dcfg.tone_hz = tone_hz;
    dcfg.stride = stride;
    dcfg.sample_rate = cfg.sample_rate;
    dcfg.seed = cfg.seed;
    const UpsampleDemoResult res = run_upsample_demo(dcfg);

    fs::create_directories(g.out_dir);
    save_wav(res.plain, g.out_dir + "/plain.wav");
    save_wav(res.twin, g.out_dir + "/twin.wav");
    StftConfig img_cfg = cfg.stft;
    write_spectrogram_pgm(stft(res.plain, img_cfg), g.out_dir + "/plain.pgm");
    write_spectrogram_pgm(stft(res.twin, img_cfg), g.out_dir + "/twin.pgm");

    std::ofstream table(g.out_dir + "/aliasing.csv", std::ios::trunc);
    table << "pipeline,aliasing_energy_db\n";
    table << "plain_tconv," << fmt9(res.plain_alias_db) << "\n";
    table << "twin_lowpass," << fmt9(res.twin_alias_db) << "\n";

    std::cout << "tone " << fmt9(tone_hz) << " Hz, stride " << stride << "\n"
              << "  plain transposed conv image energy: " << fmt9(res.plain_alias_db)
              << " dB\n"
              << "  twin deconv + lowpass image energy: " << fmt9(res.twin_alias_db)
              << " dB\n"
              << "  suppression: " << fmt9(res.plain_alias_db - res.twin_alias_db)
              << " dB\n";
    return kExitOk;
}

void print_train_summary(const char* tag, const nets::TrainingReport& r) {
    std::cout << tag << ": initial heldout mel " << fmt9(r.initial_heldout_mel)
              << ", final mel " << fmt9(r.final_heldout.mel) << ", mr_ri "
              << fmt9(r.final_heldout.mr_ri) << ", lsd " << fmt9(r.final_heldout.lsd)
              << ", tone high-band lsd " << fmt9(r.final_heldout.lsd_high_tones) << "\n";
}

int cmd_train_toy(const GlobalOpts& g, const std::string& ablate) {
    const RunConfig cfg = load_run_config(g);
    echo_config(cfg, g.out_dir);
    fs::create_directories(g.out_dir);

    nets::TrainConfig tcfg = cfg.train_config();
    if (tcfg.mode == nets::TrainMode::adversarial) {
        // Keep the user's explicit values but switch the objective.
        tcfg.use_mr_ri = true;
    }

    const nets::TrainOutcome base = nets::train_toy(tcfg);
    nets::write_report_csv(base.report, g.out_dir + "/train_report.csv");
    nets::save_checkpoint(g.out_dir + "/generator.fagn", base.generator->named_params());
    print_train_summary("full", base.report);
    if (base.report.diverged) {
        throw NumericError("train-toy: diverged at step " +
                           std::to_string(base.report.diverged_step));
    }

    if (ablate.empty()) return kExitOk;

    nets::TrainConfig acfg = tcfg;
    if (ablate == "tdconv") {
        acfg.twin_mode = TwinMode::none;
    } else if (ablate == "mrri") {
        acfg.use_mr_ri = false;
    } else {
        throw std::invalid_argument("train-toy: --ablate must be tdconv or mrri");
    }
    const nets::TrainOutcome ab = nets::train_toy(acfg);
    nets::write_report_csv(ab.report, g.out_dir + "/train_report_ablate.csv");
    print_train_summary(ablate == "tdconv" ? "ablate tdconv (plain)" : "ablate mrri",
                        ab.report);
    if (ab.report.diverged) {
        throw NumericError("train-toy: ablated run diverged at step " +
                           std::to_string(ab.report.diverged_step));
    }

    const nets::HeldoutMetrics& f = base.report.final_heldout;
    const nets::HeldoutMetrics& a = ab.report.final_heldout;
    std::ofstream table(g.out_dir + "/ablation.csv", std::ios::trunc);
    table << "metric,full," << (ablate == "tdconv" ? "plain_tconv" : "no_mr_ri") << "\n";
    table << "heldout_mel," << fmt9(f.mel) << ',' << fmt9(a.mel) << "\n";
    table << "heldout_mr_ri," << fmt9(f.mr_ri) << ',' << fmt9(a.mr_ri) << "\n";
    table << "heldout_lsd," << fmt9(f.lsd) << ',' << fmt9(a.lsd) << "\n";
    table << "tone_highband_lsd," << fmt9(f.lsd_high_tones) << ',' << fmt9(a.lsd_high_tones)
          << "\n";

    std::cout << "paired ablation table written to " << g.out_dir << "/ablation.csv\n";
    std::cout << "  metric              full        ablated\n";
    std::cout << "  heldout_lsd         " << fmt9(f.lsd) << "   " << fmt9(a.lsd) << "\n";
    std::cout << "  tone_highband_lsd   " << fmt9(f.lsd_high_tones) << "   "
              << fmt9(a.lsd_high_tones) << "\n";
    return kExitOk;
}

int cmd_grad_check(const GlobalOpts& g) {
    const RunConfig cfg = load_run_config(g);
    (void)cfg;
    const std::vector<nets::GradCheckEntry> entries = nets::grad_check_suite();
    double worst = 0.0;
    for (const auto& e : entries) {
        std::cout << "  " << e.name << ": max relative error " << fmt9(e.max_rel_err)
                  << "\n";
        worst = std::max(worst, e.max_rel_err);
    }
    std::cout << "worst: " << fmt9(worst) << (worst <= 1e-4 ? " (ok)" : " (FAIL)") << "\n";
    if (!(worst <= 1e-4)) throw NumericError("grad-check: tolerance exceeded");
    return kExitOk;
}

}  // namespace

int fagan_cli_main(int argc, char** argv) {
    CLI::App app{"FA-GAN vocoder numerics: analysis, losses, PQMF, metrics, toy training"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--config", g.config_path, "key=value config file (or FAGAN_CONFIG)");
    app.add_option("--out-dir", g.out_dir, "output directory");
    app.add_option("--seed", g.seed, "override the config seed")->each([&](const std::string&) {
        g.seed_set = true;
    });

    std::string input, output, ref, gen, ablate, band_dir, codec_cmd;
    double db_range = 80.0, snr_db = 30.0, ratio = 1.0, cutoff_hz = 8000.0, tone_hz = 1000.0;
    int bits = 8, stride = 4;
    bool snr_set = false;

    CLI::App* c_stft = app.add_subcommand("stft", "WAV -> complex spectrogram CSV");
    c_stft->add_option("--in", input)->required();
    c_stft->add_option("--out", output, "CSV name")->default_val("spectrogram.csv");

    CLI::App* c_mel = app.add_subcommand("mel", "WAV -> log-mel CSV");
    c_mel->add_option("--in", input)->required();
    c_mel->add_option("--out", output, "CSV name")->default_val("mel.csv");

    CLI::App* c_img = app.add_subcommand("spectrogram-image", "WAV -> PGM (P5) image");
    c_img->add_option("--in", input)->required();
    c_img->add_option("--out", output, "PGM name")->default_val("spectrogram.pgm");
    c_img->add_option("--db-range", db_range, "dynamic range in dB")->default_val(80.0);

    CLI::App* c_metrics = app.add_subcommand("metrics", "MCD / F0-RMSE / LSD report");
    c_metrics->add_option("--ref", ref)->required();
    c_metrics->add_option("--gen", gen)->required();
    c_metrics->add_option("--out", output, "CSV name")->default_val("metrics.csv");

    CLI::App* c_loss = app.add_subcommand("loss", "loss computations");
    CLI::App* c_loss_ri = c_loss->add_subcommand("ri", "RI loss breakdown + MR-RI total");
    c_loss_ri->add_option("--a", ref, "reference WAV")->required();
    c_loss_ri->add_option("--b", gen, "generated WAV")->required();
    c_loss_ri->add_option("--out", output, "CSV name")->default_val("ri_loss.csv");

    CLI::App* c_pqmf = app.add_subcommand("pqmf", "PQMF band tools");
    CLI::App* c_split = c_pqmf->add_subcommand("split", "WAV -> one WAV per band");
    c_split->add_option("--in", input)->required();
    CLI::App* c_merge = c_pqmf->add_subcommand("merge", "band WAVs -> WAV");
    c_merge->add_option("--bands", band_dir, "directory from pqmf split")->required();
    c_merge->add_option("--out", output, "WAV name")->default_val("merged.wav");

    CLI::App* c_aug = app.add_subcommand("augment", "data augmentation");
    CLI::App* c_noise = c_aug->add_subcommand("noise", "seeded additive noise at target SNR");
    c_noise->add_option("--in", input)->required();
    c_noise->add_option("--out", output)->default_val("noised.wav");
    c_noise->add_option("--snr", snr_db, "SNR in dB (default: uniform in [28, 40])")
        ->each([&](const std::string&) { snr_set = true; });
    CLI::App* c_pitch = c_aug->add_subcommand("pitch", "harmonic shift (resampling proxy)");
    c_pitch->add_option("--in", input)->required();
    c_pitch->add_option("--out", output)->default_val("shifted.wav");
    c_pitch->add_option("--ratio", ratio, "pitch ratio")->required();
    CLI::App* c_codec = c_aug->add_subcommand("codec", "lossy compression proxy");
    c_codec->add_option("--in", input)->required();
    c_codec->add_option("--out", output)->default_val("compressed.wav");
    c_codec->add_option("--cutoff", cutoff_hz, "low-pass cutoff in Hz")->default_val(8000.0);
    c_codec->add_option("--bits", bits, "mu-law quantizer bits")->default_val(8);
    c_codec->add_option("--command", codec_cmd,
                        "external codec template with {input}/{output} placeholders");

    CLI::App* c_demo = app.add_subcommand("upsample-demo", "plain vs twin upsampling demo");
    c_demo->add_option("--tone", tone_hz, "tone frequency in Hz")->default_val(1000.0);
    c_demo->add_option("--stride", stride, "upsampling stride")->default_val(4);

    CLI::App* c_train = app.add_subcommand("train-toy", "toy training / ablation harness");
    c_train->add_option("--ablate", ablate, "tdconv | mrri");

    app.add_subcommand("grad-check", "finite-difference suite over all layer kinds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(c_stft)) return cmd_stft(g, input, output, false);
        if (app.got_subcommand(c_mel)) return cmd_stft(g, input, output, true);
        if (app.got_subcommand(c_img)) return cmd_spectrogram_image(g, input, output, db_range);
        if (app.got_subcommand(c_metrics)) return cmd_metrics(g, ref, gen, output);
        if (app.got_subcommand(c_loss)) {
            if (c_loss->got_subcommand(c_loss_ri)) return cmd_loss_ri(g, ref, gen, output);
            std::cerr << "loss: missing subcommand (try: loss ri)\n";
            return kExitUsage;
        }
        if (app.got_subcommand(c_pqmf)) {
            if (c_pqmf->got_subcommand(c_split)) return cmd_pqmf_split(g, input);
            if (c_pqmf->got_subcommand(c_merge)) return cmd_pqmf_merge(g, band_dir, output);
            std::cerr << "pqmf: missing subcommand (try: pqmf split|merge)\n";
            return kExitUsage;
        }
        if (app.got_subcommand(c_aug)) {
            std::string which;
            if (c_aug->got_subcommand(c_noise)) which = "noise";
            if (c_aug->got_subcommand(c_pitch)) which = "pitch";
            if (c_aug->got_subcommand(c_codec)) which = "codec";
            if (which.empty()) {
                std::cerr << "augment: missing subcommand (noise|pitch|codec)\n";
                return kExitUsage;
            }
            return cmd_augment(g, which, input, output, snr_db, snr_set, ratio, cutoff_hz,
                               bits, codec_cmd);
        }
        if (app.got_subcommand(c_demo)) return cmd_upsample_demo(g, tone_hz, stride);
        if (app.got_subcommand(c_train)) return cmd_train_toy(g, ablate);
        if (app.got_subcommand("grad-check")) return cmd_grad_check(g);
        std::cerr << "unknown subcommand\n";
        return kExitUsage;
    } catch (const FormatError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitFormat;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFormat;
    }
}
