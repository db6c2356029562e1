#pragma once

#include <array>
#include <vector>

namespace fagan::nets {

// Dense array up to rank 3 with a paired gradient buffer. Row-major:
// rank 1 (n), rank 2 (channels, length), rank 3 (channels, height, width).
struct Tensor {
    std::array<int, 3> dims{1, 1, 1};
    int rank = 1;
    std::vector<double> data;
    std::vector<double> grad;

    Tensor() = default;

    static Tensor zeros1(int n);
    static Tensor zeros2(int c, int n);
    static Tensor zeros3(int c, int h, int w);

    size_t size() const { return data.size(); }

    double& at(int i) { return data[static_cast<size_t>(i)]; }
    double& at(int c, int i) { return data[static_cast<size_t>(c) * dims[1] + i]; }
    double& at(int c, int h, int w) {
        return data[(static_cast<size_t>(c) * dims[1] + h) * dims[2] + w];
    }
    double at(int i) const { return data[static_cast<size_t>(i)]; }
    double at(int c, int i) const { return data[static_cast<size_t>(c) * dims[1] + i]; }
    double at(int c, int h, int w) const {
        return data[(static_cast<size_t>(c) * dims[1] + h) * dims[2] + w];
    }

    void zero_grad();
    bool same_shape(const Tensor& other) const {
        return rank == other.rank && dims == other.dims;
    }
};

// Throws NumericError if any data entry is non-finite.
void check_finite(const Tensor& t, const char* where);

}  // namespace fagan::nets
