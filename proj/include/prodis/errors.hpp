#pragma once

#include <stdexcept>
#include <string>

namespace prodis {

// Configuration could not be parsed or refers to unknown ids.  CLI exit 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A documented invariant of a measure, model or parameter set is violated.
// CLI exit 3.
class InvariantViolation : public std::runtime_error {
 public:
  explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

// A statistical check failed (or could not run) under strict mode.  CLI exit 4.
class CheckFailure : public std::runtime_error {
 public:
  explicit CheckFailure(const std::string& what) : std::runtime_error(what) {}
};

// Operation asked of a model that cannot support it (e.g. exact joint
// probabilities for a model with no closed-form law).
class UnsupportedModel : public std::runtime_error {
 public:
  explicit UnsupportedModel(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace prodis
