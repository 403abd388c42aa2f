#pragma once

#include <stdexcept>
#include <string>

namespace qwg {

// thrown for malformed configs / inputs; CLI maps it to exit code 2
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// thrown when a validated-geometry precondition is violated; CLI maps it to exit code 2
struct AssumptionError : std::runtime_error {
  explicit AssumptionError(const std::string& msg) : std::runtime_error(msg) {}
};

// thrown on solver non-convergence or downstream pipeline failure; CLI maps it to exit code 3
struct SolveError : std::runtime_error {
  explicit SolveError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qwg
