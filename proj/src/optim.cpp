#include "fagan/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace fagan::nets {

AdamState::AdamState(std::vector<Tensor*> params, const AdamConfig& cfg)
    : params_(std::move(params)), cfg_(cfg) {
    if (!(cfg.lr > 0.0) || !(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0) ||
        !(cfg.beta2 >= 0.0 && cfg.beta2 < 1.0) || !(cfg.eps > 0.0)) {
        throw std::invalid_argument("AdamState: bad config");
    }
    m_.reserve(params_.size());
    v_.reserve(params_.size());
    for (const Tensor* p : params_) {
        m_.emplace_back(p->data.size(), 0.0);
        v_.emplace_back(p->data.size(), 0.0);
    }
}

void AdamState::step() {
    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (size_t p = 0; p < params_.size(); ++p) {
        Tensor& t = *params_[p];
        std::vector<double>& m = m_[p];
        std::vector<double>& v = v_[p];
        for (size_t i = 0; i < t.data.size(); ++i) {
            const double g = t.grad[i];
            m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g;
            v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g * g;
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            t.data[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
        }
    }
}

}  // namespace fagan::nets
