#pragma once

#include <cstdint>
#include <vector>

#include "fagan/tensor.hpp"

namespace fagan::nets {

struct AdamConfig {
    double lr = 2e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Standard bias-corrected Adam over a fixed parameter set. Moments are
// shaped like the parameters; step() consumes the accumulated gradients.
class AdamState {
public:
    AdamState(std::vector<Tensor*> params, const AdamConfig& cfg);

    void step();
    int64_t t() const { return t_; }
    const AdamConfig& config() const { return cfg_; }

private:
    std::vector<Tensor*> params_;
    std::vector<std::vector<double>> m_;
    std::vector<std::vector<double>> v_;
    AdamConfig cfg_;
    int64_t t_ = 0;
};

}  // namespace fagan::nets
