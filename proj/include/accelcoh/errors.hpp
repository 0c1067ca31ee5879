#pragma once

#include <stdexcept>
#include <string>

namespace accelcoh {

// Bumped whenever a change alters any computed number; invalidates caches.
inline constexpr int kEngineVersion = 1;

/// Argument outside the mathematical domain of a function (poles, x <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Iterative numerics failed to converge. The message carries diagnostics.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A ModeSpec (or sweep point) violates its parameter invariants.
class InvalidSpec : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Bad user configuration (ranges, file contents, flags).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace accelcoh
