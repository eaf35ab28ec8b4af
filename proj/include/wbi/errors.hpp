#pragma once

#include <stdexcept>
#include <string>

namespace wbi {

/// Bad input data, configuration, or contract violation (CLI exit code 2).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Solver or estimator failure during an otherwise valid computation
/// (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace wbi
