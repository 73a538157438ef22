#pragma once

#include <stdexcept>
#include <string>

namespace coopemit {

/// Invalid physical or numerical parameters supplied by the caller.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure (eigensolver, normalization, integrator) failed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Run configuration could not be parsed or failed validation.
class ConfigError : public std::runtime_error {
 public:
  enum class Kind { parse, validation };

  ConfigError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace coopemit
