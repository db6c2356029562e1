#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fagan/layers.hpp"

namespace fagan::nets {

// Central-difference comparison against the analytic backward pass. The
// relative error uses max(1e-8, |a| + |fd|) as denominator.
double grad_check_layer(Layer& layer, const Tensor& input, uint64_t seed,
                        double eps = 1e-5);

struct GradCheckEntry {
    std::string name;
    double max_rel_err = 0.0;
};

// One entry per layer kind (20 seeds each, sizes <= 32) plus the end-to-end
// toy generator with the RI loss head and the standalone loss heads.
std::vector<GradCheckEntry> grad_check_suite(double eps = 1e-5);

// End-to-end: toy generator driving ri_loss on a 64-sample target.
double grad_check_generator_ri(uint64_t seed, double eps = 1e-5);

// Loss heads w.r.t. a 64-sample input, perturbed per sample.
double grad_check_ri_loss(uint64_t seed, double eps = 1e-5);
double grad_check_mel_loss(uint64_t seed, double eps = 1e-5);

}  // namespace fagan::nets
