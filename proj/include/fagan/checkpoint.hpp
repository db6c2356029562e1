#pragma once

#include <string>
#include <vector>

#include "fagan/tensor.hpp"

namespace fagan::nets {

struct NamedParam {
    std::string name;
    Tensor* tensor = nullptr;
};

// Flat binary checkpoint: magic "FAGN", version u32, count u32, then per
// parameter: name length u32 + UTF-8 name, rank u32 + dims u32, f64 data.
// All fields little-endian.
void save_checkpoint(const std::string& path, const std::vector<NamedParam>& params);

// Loads into the given parameter set; names and shapes must match exactly.
void load_checkpoint(const std::string& path, const std::vector<NamedParam>& params);

}  // namespace fagan::nets
