// End-to-end runs of the fagan binary (path injected by CMake).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "fagan/audio.hpp"
#include "fagan/rng.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace fagan;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(FAGAN_CLI_PATH) + " " + args + " 2>cli_stderr.txt";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::path("cli_out") / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("usage errors exit with code 2") {
    CHECK(run("definitely-not-a-subcommand") == 2);
    CHECK(run("metrics") == 2);  // missing required flags
}

TEST_CASE("missing input file exits with code 3") {
    TempDir dir("missing");
    CHECK(run("stft --in nowhere.wav --out-dir " + dir.str()) == 3);
}

TEST_CASE("stft, mel and spectrogram-image produce deterministic outputs") {
    TempDir dir("analysis");
    const std::string wav = dir.str() + "/in.wav";
    save_wav(testutil::tone(440.0, 0.3, 22050, 0.5), wav);

    REQUIRE(run("stft --in " + wav + " --out s.csv --out-dir " + dir.str()) == 0);
    REQUIRE(run("mel --in " + wav + " --out m.csv --out-dir " + dir.str()) == 0);
    REQUIRE(run("spectrogram-image --in " + wav + " --out s.pgm --out-dir " + dir.str()) == 0);

    const std::string csv1 = slurp(dir.str() + "/s.csv");
    const std::string pgm1 = slurp(dir.str() + "/s.pgm");
    REQUIRE(!csv1.empty());
    REQUIRE(pgm1.substr(0, 2) == "P5");

    // Byte-identical rerun.
    REQUIRE(run("stft --in " + wav + " --out s2.csv --out-dir " + dir.str()) == 0);
    REQUIRE(run("spectrogram-image --in " + wav + " --out s2.pgm --out-dir " + dir.str()) == 0);
    CHECK(slurp(dir.str() + "/s2.csv") == csv1);
    CHECK(slurp(dir.str() + "/s2.pgm") == pgm1);

    // Effective config is echoed and re-loadable.
    const std::string echoed = dir.str() + "/effective_config.txt";
    REQUIRE(fs::exists(echoed));
    REQUIRE(run("stft --in " + wav + " --out s3.csv --config " + echoed + " --out-dir " +
                dir.str()) == 0);
    CHECK(slurp(dir.str() + "/s3.csv") == csv1);
}

TEST_CASE("metrics on identical files reports zeros") {
    TempDir dir("metrics");
    const std::string wav = dir.str() + "/a.wav";
    save_wav(testutil::tone(220.0, 0.4, 22050, 0.5), wav);
    REQUIRE(run("metrics --ref " + wav + " --gen " + wav + " --out m.csv --out-dir " +
                dir.str()) == 0);
    const std::string csv = slurp(dir.str() + "/m.csv");
    CHECK(csv.find("file,mcd,f0_rmse,lsd,lsd_L,lsd_M,lsd_H") == 0);
    CHECK(csv.find("a.wav,0,") != std::string::npos);
}

TEST_CASE("metrics directory mode matches by name and skips unmatched") {
    TempDir dir("metrics_dir");
    fs::create_directories(dir.path / "ref");
    fs::create_directories(dir.path / "gen");
    save_wav(testutil::tone(220.0, 0.3, 22050, 0.5), (dir.path / "ref/x.wav").string());
    save_wav(testutil::tone(220.0, 0.3, 22050, 0.5), (dir.path / "gen/x.wav").string());
    save_wav(testutil::tone(330.0, 0.3, 22050, 0.5), (dir.path / "ref/only_ref.wav").string());
    REQUIRE(run("metrics --ref " + (dir.path / "ref").string() + " --gen " +
                (dir.path / "gen").string() + " --out m.csv --out-dir " + dir.str()) == 0);
    const std::string csv = slurp(dir.str() + "/m.csv");
    CHECK(csv.find("x.wav") != std::string::npos);
    CHECK(csv.find("only_ref.wav") == std::string::npos);
    const std::string err = slurp("cli_stderr.txt");
    CHECK(err.find("only_ref.wav") != std::string::npos);
}

TEST_CASE("loss ri emits the breakdown CSV") {
    TempDir dir("loss");
    const std::string a = dir.str() + "/a.wav";
    const std::string b = dir.str() + "/b.wav";
    save_wav(testutil::noise(0.3, 22050, 1, 0.4), a);
    save_wav(testutil::noise(0.3, 22050, 2, 0.4), b);
    REQUIRE(run("loss ri --a " + a + " --b " + b + " --out l.csv --out-dir " + dir.str()) ==
            0);
    const std::string csv = slurp(dir.str() + "/l.csv");
    CHECK(csv.find("real_l1,") != std::string::npos);
    CHECK(csv.find("mr_ri_total,") != std::string::npos);
}

TEST_CASE("pqmf split and merge round trip through WAV files") {
    TempDir dir("pqmf");
    const std::string wav = dir.str() + "/in.wav";
    const AudioBuffer x = testutil::noise(0.5, 22050, 5, 0.4);
    save_wav(x, wav);
    REQUIRE(run("pqmf split --in " + wav + " --out-dir " + dir.str()) == 0);
    REQUIRE(fs::exists(dir.path / "band_00.wav"));
    REQUIRE(fs::exists(dir.path / "band_11.wav"));
    REQUIRE(fs::exists(dir.path / "pqmf_meta.txt"));

    REQUIRE(run("pqmf merge --bands " + dir.str() + " --out merged.wav --out-dir " +
                dir.str()) == 0);
    const AudioBuffer merged = load_wav(dir.str() + "/merged.wav");
    REQUIRE(merged.samples.size() == x.samples.size());
    double num = 0.0, den = 0.0;
    for (size_t i = 200; i + 200 < x.samples.size(); ++i) {
        const double d = merged.samples[i] - x.samples[i];
        num += d * d;
        den += x.samples[i] * x.samples[i];
    }
    CHECK(10.0 * std::log10(num / den) <= -30.0);  // float32 WAV round trip in the path
}

TEST_CASE("augment subcommands write WAV plus sidecar") {
    TempDir dir("augment");
    const std::string wav = dir.str() + "/in.wav";
    save_wav(testutil::tone(440.0, 0.4, 22050, 0.5), wav);

    REQUIRE(run("augment noise --in " + wav + " --out n.wav --snr 32 --seed 5 --out-dir " +
                dir.str()) == 0);
    REQUIRE(fs::exists(dir.path / "n.wav"));
    const std::string sidecar = slurp(dir.str() + "/n.wav.txt");
    CHECK(sidecar.find("snr_db = 32") != std::string::npos);
    CHECK(sidecar.find("seed = 5") != std::string::npos);

    REQUIRE(run("augment pitch --in " + wav + " --out p.wav --ratio 1.5 --out-dir " +
                dir.str()) == 0);
    REQUIRE(run("augment codec --in " + wav + " --out c.wav --out-dir " + dir.str()) == 0);

    // Determinism: same seed, same bytes.
    REQUIRE(run("augment noise --in " + wav + " --out n2.wav --snr 32 --seed 5 --out-dir " +
                dir.str()) == 0);
    CHECK(slurp(dir.str() + "/n.wav") == slurp(dir.str() + "/n2.wav"));
}

TEST_CASE("upsample-demo writes wavs, images, and the comparison table") {
    TempDir dir("demo");
    REQUIRE(run("upsample-demo --tone 1000 --stride 4 --out-dir " + dir.str()) == 0);
    REQUIRE(fs::exists(dir.path / "plain.wav"));
    REQUIRE(fs::exists(dir.path / "twin.wav"));
    REQUIRE(fs::exists(dir.path / "plain.pgm"));
    REQUIRE(fs::exists(dir.path / "twin.pgm"));
    const std::string table = slurp(dir.str() + "/aliasing.csv");
    CHECK(table.find("plain_tconv,") != std::string::npos);
    CHECK(table.find("twin_lowpass,") != std::string::npos);
}

TEST_CASE("train-toy smoke run via config file") {
    TempDir dir("train");
    const std::string cfg_path = dir.str() + "/run.cfg";
    {
        std::ofstream cfg(cfg_path);
        cfg << "seed = 9\n"
            << "train.steps = 3\n"
            << "train.batch = 1\n"
            << "train.segment = 1024\n"
            << "train.train_segments = 3\n"
            << "train.heldout_segments = 1\n";
    }
    REQUIRE(run("train-toy --config " + cfg_path + " --out-dir " + dir.str()) == 0);
    REQUIRE(fs::exists(dir.path / "train_report.csv"));
    REQUIRE(fs::exists(dir.path / "generator.fagn"));
    const std::string report = slurp(dir.str() + "/train_report.csv");
    CHECK(report.find("step,total,mel,mr_ri,adv_g,adv_d,fm") == 0);
}

TEST_CASE("unknown config keys are rejected with exit code 2") {
    TempDir dir("badcfg");
    const std::string cfg_path = dir.str() + "/bad.cfg";
    {
        std::ofstream cfg(cfg_path);
        cfg << "no_such_key = 1\n";
    }
    const std::string wav = dir.str() + "/in.wav";
    save_wav(testutil::tone(440.0, 0.2, 22050, 0.5), wav);
    CHECK(run("stft --in " + wav + " --config " + cfg_path + " --out-dir " + dir.str()) == 2);
}
