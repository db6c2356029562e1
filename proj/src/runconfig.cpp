#include "fagan/runconfig.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fagan/errors.hpp"
#include "fagan/mel.hpp"

namespace fagan {

namespace {

std::string trim(const std::string& s) {
    const size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer for " + key + ": " + value);
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad number for " + key + ": " + value);
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("config: bad boolean for " + key + ": " + value);
}

}  // namespace

RunConfig RunConfig::from_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: expected key=value at line " +
                                        std::to_string(line_no));
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "sample_rate") {
            cfg.sample_rate = static_cast<int>(parse_int(key, value));
        } else if (key == "seed") {
            cfg.seed = static_cast<uint64_t>(parse_int(key, value));
        } else if (key == "stft.fft_size") {
            cfg.stft.fft_size = static_cast<int>(parse_int(key, value));
        } else if (key == "stft.window_size") {
            cfg.stft.window_size = static_cast<int>(parse_int(key, value));
        } else if (key == "stft.hop_size") {
            cfg.stft.hop_size = static_cast<int>(parse_int(key, value));
        } else if (key == "stft.window") {
            if (value == "hann") {
                cfg.stft.window = WindowKind::hann;
            } else if (value == "rectangular") {
                cfg.stft.window = WindowKind::rectangular;
            } else {
                throw std::invalid_argument("config: stft.window must be hann|rectangular");
            }
        } else if (key == "stft.center") {
            cfg.stft.center_padding = parse_bool(key, value);
        } else if (key == "mel.n_mels") {
            cfg.mel_n_mels = static_cast<int>(parse_int(key, value));
        } else if (key == "mel.fmin") {
            cfg.mel_fmin = parse_double(key, value);
        } else if (key == "mel.fmax") {
            cfg.mel_fmax = parse_double(key, value);
        } else if (key == "pqmf.k") {
            cfg.pqmf_k = static_cast<int>(parse_int(key, value));
        } else if (key == "pqmf.taps") {
            cfg.pqmf_taps = static_cast<int>(parse_int(key, value));
        } else if (key == "pqmf.beta") {
            cfg.pqmf_beta = parse_double(key, value);
        } else if (key == "loss.lambda_g") {
            cfg.weights.lambda_g = parse_double(key, value);
        } else if (key == "loss.lambda_ri") {
            cfg.weights.lambda_ri = parse_double(key, value);
        } else if (key == "loss.lambda_mel") {
            cfg.weights.lambda_mel = parse_double(key, value);
        } else if (key == "loss.lambda_fm") {
            cfg.weights.lambda_fm = parse_double(key, value);
        } else if (key == "train.mode") {
            if (value == "regression") {
                cfg.train.mode = nets::TrainMode::regression;
            } else if (value == "adversarial") {
                cfg.train.mode = nets::TrainMode::adversarial;
            } else {
                throw std::invalid_argument("config: train.mode must be regression|adversarial");
            }
        } else if (key == "train.steps") {
            cfg.train.steps = static_cast<int>(parse_int(key, value));
        } else if (key == "train.batch") {
            cfg.train.batch = static_cast<int>(parse_int(key, value));
        } else if (key == "train.segment") {
            cfg.train.segment = static_cast<int>(parse_int(key, value));
        } else if (key == "train.lr") {
            cfg.train.lr = parse_double(key, value);
        } else if (key == "train.train_segments") {
            cfg.train.train_segments = static_cast<int>(parse_int(key, value));
        } else if (key == "train.heldout_segments") {
            cfg.train.heldout_segments = static_cast<int>(parse_int(key, value));
        } else {
            throw std::invalid_argument("config: unknown key " + key);
        }
    }

    // Validate against module invariants.
    if (cfg.sample_rate <= 0) throw std::invalid_argument("config: sample_rate must be positive");
    validate(cfg.stft);
    validate(cfg.weights);
    if (cfg.mel_n_mels <= 0) throw std::invalid_argument("config: mel.n_mels must be positive");
    const double fmax = cfg.mel_fmax > 0.0 ? cfg.mel_fmax : cfg.sample_rate / 2.0;
    if (!(cfg.mel_fmin >= 0.0 && cfg.mel_fmin < fmax && fmax <= cfg.sample_rate / 2.0)) {
        throw std::invalid_argument("config: bad mel band edges");
    }
    if (cfg.pqmf_k < 2 || cfg.pqmf_taps < 4 * cfg.pqmf_k || cfg.pqmf_taps % 2 != 0) {
        throw std::invalid_argument("config: bad pqmf settings");
    }
    if (cfg.train.steps < 1 || cfg.train.batch < 1 || cfg.train.segment < 16 ||
        cfg.train.segment % 16 != 0 || !(cfg.train.lr > 0.0)) {
        throw std::invalid_argument("config: bad train settings");
    }
    return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open config: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return from_text(text.str());
}

std::string RunConfig::to_text() const {
    std::ostringstream out;
    char num[64];
    auto put_d = [&](const char* key, double v) {
        std::snprintf(num, sizeof(num), "%.9g", v);
        out << key << " = " << num << "\n";
    };
    out << "sample_rate = " << sample_rate << "\n";
    out << "seed = " << seed << "\n";
    out << "stft.fft_size = " << stft.fft_size << "\n";
    out << "stft.window_size = " << stft.window_size << "\n";
    out << "stft.hop_size = " << stft.hop_size << "\n";
    out << "stft.window = " << (stft.window == WindowKind::hann ? "hann" : "rectangular")
        << "\n";
    out << "stft.center = " << (stft.center_padding ? "true" : "false") << "\n";
    out << "mel.n_mels = " << mel_n_mels << "\n";
    put_d("mel.fmin", mel_fmin);
    put_d("mel.fmax", mel_fmax);
    out << "pqmf.k = " << pqmf_k << "\n";
    out << "pqmf.taps = " << pqmf_taps << "\n";
    put_d("pqmf.beta", pqmf_beta);
    put_d("loss.lambda_g", weights.lambda_g);
    put_d("loss.lambda_ri", weights.lambda_ri);
    put_d("loss.lambda_mel", weights.lambda_mel);
    put_d("loss.lambda_fm", weights.lambda_fm);
    out << "train.mode = "
        << (train.mode == nets::TrainMode::regression ? "regression" : "adversarial") << "\n";
    out << "train.steps = " << train.steps << "\n";
    out << "train.batch = " << train.batch << "\n";
    out << "train.segment = " << train.segment << "\n";
    put_d("train.lr", train.lr);
    out << "train.train_segments = " << train.train_segments << "\n";
    out << "train.heldout_segments = " << train.heldout_segments << "\n";
    return out.str();
}

nets::TrainConfig RunConfig::train_config() const {
    nets::TrainConfig cfg = train;
    cfg.seed = seed;
    cfg.sample_rate = sample_rate;
    cfg.weights = weights;
    return cfg;
}

}  // namespace fagan
