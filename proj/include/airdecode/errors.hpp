#pragma once

#include <stdexcept>
#include <string>

namespace airdecode {

// Bad user-supplied configuration (orders, priors, labels, flag values).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid data fed to training or metrics (empty corpus, short text, ...).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// File problems: missing paths, malformed or wrong-version model files.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Violated numeric contracts (non-normalized distribution, degenerate
// composition). These indicate internal bugs, not user mistakes.
struct NumericsError : std::runtime_error {
  explicit NumericsError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace airdecode
