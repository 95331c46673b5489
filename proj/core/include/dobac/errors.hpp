#pragma once

#include <stdexcept>
#include <string>

namespace dobac {

// Invalid or inconsistent configuration (bad dimensions, non-SPD gains,
// unstable reference dynamics, malformed files, unknown keys, ...).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : ConfigError {
  explicit DimensionMismatch(const std::string& msg) : ConfigError(msg) {}
};

// A stage derivative evaluated to NaN or Inf.
struct NonFiniteDerivative : std::runtime_error {
  NonFiniteDerivative(const std::string& msg, double t)
      : std::runtime_error(msg), t(t) {}
  double t;
};

// State norm exceeded the divergence guard.
struct Diverged : std::runtime_error {
  Diverged(const std::string& msg, double t) : std::runtime_error(msg), t(t) {}
  double t;
};

// Parameter estimate found outside the admissible projection region.
struct OutsideSet : std::runtime_error {
  explicit OutsideSet(const std::string& msg) : std::runtime_error(msg) {}
};

// Gain-matching equations have no solution for the given (A, A_r, b).
struct Unmatchable : std::runtime_error {
  explicit Unmatchable(const std::string& msg) : std::runtime_error(msg) {}
};

// P fails to certify the reference dynamics (Q not symmetric positive definite).
struct NotLyapunov : std::runtime_error {
  explicit NotLyapunov(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested metrics window lies outside the logged time range.
struct WindowOutOfRange : std::runtime_error {
  explicit WindowOutOfRange(const std::string& msg) : std::runtime_error(msg) {}
};

// Log files with incompatible schema versions were combined.
struct SchemaMismatch : std::runtime_error {
  explicit SchemaMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem read/write failure.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace dobac
