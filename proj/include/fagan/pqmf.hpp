#pragma once

#include <array>
#include <vector>

#include "fagan/audio.hpp"

namespace fagan {

// Cosine-modulated near-perfect-reconstruction filter bank.
struct PqmfBank {
    int num_bands = 0;
    int taps_per_filter = 0;
    double cutoff = 0.0;  // tuned prototype cutoff, cycles/sample
    double kaiser_beta = 9.0;
    std::vector<double> prototype;
    std::vector<std::vector<double>> analysis_filters;
    std::vector<std::vector<double>> synthesis_filters;
};

// K bands of equal length ceil(len/K) at rate sample_rate/K.
struct SubbandSignals {
    std::vector<std::vector<double>> bands;
    size_t source_len = 0;
    int sample_rate = 0;  // rate of the full-band source
};

// Kaiser-windowed sinc prototype; the cutoff is tuned by scanning candidates
// around 1/(4K) and keeping the lowest round-trip error.
PqmfBank design_pqmf(int num_bands, int taps, double kaiser_beta = 9.0);

SubbandSignals pqmf_analysis(const AudioBuffer& x, const PqmfBank& bank);

// Zero-stuff, filter, sum; output trimmed to source_len after compensating
// the (taps-1)-sample group delay of the analysis/synthesis chain.
AudioBuffer pqmf_synthesis(const SubbandSignals& sb, const PqmfBank& bank);

// Adjoint of pqmf_analysis, used when gradients flow through the band split.
std::vector<double> pqmf_analysis_backward(const std::vector<std::vector<double>>& grad_bands,
                                           const PqmfBank& bank, size_t source_len);

struct BandRange {
    int begin = 0;
    int end = 0;  // exclusive
};

struct BandGrouping {
    std::array<BandRange, 3> ranges;  // low, mid, high

    static BandGrouping equal_thirds(int num_bands);
};

struct GroupedSubbands {
    SubbandSignals low, mid, high;
};

// Partition of the band indices; throws on overlapping or non-covering ranges.
GroupedSubbands group_bands(const SubbandSignals& sb, const BandGrouping& grouping);

}  // namespace fagan
