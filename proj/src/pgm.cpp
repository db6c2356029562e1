#include "fagan/pgm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include "fagan/errors.hpp"

namespace fagan {

void write_spectrogram_pgm(const ComplexSpectrogram& spec, const std::string& path,
                           double db_range) {
    if (db_range <= 0.0) throw std::invalid_argument("write_spectrogram_pgm: bad range");

    std::vector<double> db(spec.cells());
    double peak = -1e300;
    for (size_t c = 0; c < spec.cells(); ++c) {
        const double mag = std::hypot(spec.real[c], spec.imag[c]);
        db[c] = 20.0 * std::log10(std::max(mag, 1e-12));
        peak = std::max(peak, db[c]);
    }
    const double floor_db = peak - db_range;

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write PGM: " + path);
    out << "P5\n" << spec.frames << " " << spec.bins << "\n255\n";
    for (int row = 0; row < spec.bins; ++row) {
        const int b = spec.bins - 1 - row;  // frequency ascending upward
        for (int f = 0; f < spec.frames; ++f) {
            const double v = db[static_cast<size_t>(f) * spec.bins + b];
            const double t = std::clamp((v - floor_db) / db_range, 0.0, 1.0);
            const unsigned char px = static_cast<unsigned char>(std::lround(t * 255.0));
            out.put(static_cast<char>(px));
        }
    }
    if (!out) throw FormatError("short write on PGM: " + path);
}

}  // namespace fagan
