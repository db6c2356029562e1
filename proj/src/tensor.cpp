#include "fagan/tensor.hpp"

#include <cmath>
#include <string>

#include "fagan/errors.hpp"

namespace fagan::nets {

Tensor Tensor::zeros1(int n) {
    Tensor t;
    t.rank = 1;
    t.dims = {n, 1, 1};
    t.data.assign(static_cast<size_t>(n), 0.0);
    t.grad.assign(static_cast<size_t>(n), 0.0);
    return t;
}

Tensor Tensor::zeros2(int c, int n) {
    Tensor t;
    t.rank = 2;
    t.dims = {c, n, 1};
    t.data.assign(static_cast<size_t>(c) * n, 0.0);
    t.grad.assign(static_cast<size_t>(c) * n, 0.0);
    return t;
}

Tensor Tensor::zeros3(int c, int h, int w) {
    Tensor t;
    t.rank = 3;
    t.dims = {c, h, w};
    t.data.assign(static_cast<size_t>(c) * h * w, 0.0);
    t.grad.assign(static_cast<size_t>(c) * h * w, 0.0);
    return t;
}

void Tensor::zero_grad() { grad.assign(data.size(), 0.0); }

void check_finite(const Tensor& t, const char* where) {
    for (double v : t.data) {
        if (!std::isfinite(v)) {
            throw NumericError(std::string("non-finite activation in ") + where);
        }
    }
}

}  // namespace fagan::nets
