#pragma once

#include <cmath>
#include <compare>
#include <stdexcept>
#include <string>

namespace vht {

/// Raised when an operation is invoked outside its documented preconditions.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised for malformed or inconsistent scenario configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Longest scenario horizon, in seconds. Keeps double-precision resolution of
/// the reference timeline below 10 fs.
inline constexpr double kMaxHorizon = 1e4;

/// A point on the reference ("true") timeline, in seconds.
class SimTime {
 public:
  constexpr SimTime() = default;
  explicit SimTime(double seconds) : s_(seconds) {
    if (!(seconds >= 0.0) || !std::isfinite(seconds)) {
      throw ContractViolation("SimTime must be finite and non-negative, got " +
                              std::to_string(seconds));
    }
  }

  constexpr double seconds() const { return s_; }

  friend constexpr auto operator<=>(SimTime, SimTime) = default;

  SimTime operator+(double dt) const { return SimTime(s_ + dt); }
  friend double operator-(SimTime a, SimTime b) { return a.s_ - b.s_; }

 private:
  double s_ = 0.0;
};

inline void check_horizon(double horizon) {
  if (!(horizon > 0.0) || horizon > kMaxHorizon) {
    throw ConfigError("horizon must be in (0, " + std::to_string(kMaxHorizon) +
                      "] s, got " + std::to_string(horizon));
  }
}

}  // namespace vht
