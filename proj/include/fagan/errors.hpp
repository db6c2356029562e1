#pragma once

#include <stdexcept>
#include <string>

namespace fagan {

// Malformed or unsupported input data (WAV headers, CSV, checkpoints).
struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite values, divergence, degenerate denominators.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fagan
