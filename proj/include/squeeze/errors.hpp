#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace squeeze {

// Invalid user input: bad parameter values, malformed config, unsupported options.
class ConfigError : public std::runtime_error {
public:
  struct Field {
    std::string name;
    std::string message;
  };

  explicit ConfigError(std::string msg) : std::runtime_error(std::move(msg)) {}
  ConfigError(std::string msg, std::vector<Field> fields)
      : std::runtime_error(std::move(msg)), fields_(std::move(fields)) {}

  const std::vector<Field>& fields() const noexcept { return fields_; }

private:
  std::vector<Field> fields_;
};

// A numerical routine could not meet its tolerance or produced a degenerate result.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(std::string msg, double estimate = 0.0)
      : std::runtime_error(std::move(msg)), estimate_(estimate) {}

  // Achieved error estimate (or offending value) when one is available.
  double estimate() const noexcept { return estimate_; }

private:
  double estimate_;
};

class CapacityError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

// Mean spin too small for the Wineland parameter to be meaningful.
class DegeneratePolarization : public NumericalError {
public:
  using NumericalError::NumericalError;
};

} // namespace squeeze
