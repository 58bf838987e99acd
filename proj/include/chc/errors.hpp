#pragma once

#include <stdexcept>
#include <string>

namespace chc {

// Bad user input: config files, CLI values, incompatible snapshots.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Solver breakdown: non-finite state, singular systems, failed iterations.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem and serialization failures.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace chc
