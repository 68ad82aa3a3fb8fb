#pragma once

#include <stdexcept>
#include <string>

namespace hypwave {

// Invalid parameter value (out of its admissible range).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Two operands live on different radial grids.
class GridMismatch : public std::invalid_argument {
 public:
  GridMismatch() : std::invalid_argument("fields are defined on different grids") {}
  using std::invalid_argument::invalid_argument;
};

// A norm or integral was requested on a region that holds no grid nodes.
class EmptyRegion : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Configuration problem; `key` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// The integrator produced a non-finite value or crossed the amplitude ceiling.
class BlowUp : public std::runtime_error {
 public:
  explicit BlowUp(double t)
      : std::runtime_error("blow-up detected at t = " + std::to_string(t)), time_(t) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace hypwave
