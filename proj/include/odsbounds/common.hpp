#pragma once
// Shared constants, error types and formatting helpers.

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace odsbounds {

// Tolerance for probability normalization checks.
inline constexpr double kProbTol = 1e-9;
// Slack applied when testing whether theta violates an interval.
inline constexpr double kViolationSlack = 1e-12;
// Crossing beyond this marks an instance as inconsistent with the assumed diagram.
inline constexpr double kInconsistencyTol = 1e-9;

// Input failed a structural or normalization check (CLI exit code 2).
struct validation_error : std::runtime_error {
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Data incompatible with the assumed diagram: refined bounds cross (CLI exit code 3).
struct inconsistent_error : std::runtime_error {
  explicit inconsistent_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Fixed 10-significant-digit formatting, used for all emitted numbers so that
// reruns are byte-identical.
inline std::string fmt_g10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

inline double clamp_to_unit_interval(double v) {
  if (v < -1.0) return -1.0;
  if (v > 1.0) return 1.0;
  return v;
}

inline double expit(double t) { return 1.0 / (1.0 + std::exp(-t)); }

inline double logit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace odsbounds
