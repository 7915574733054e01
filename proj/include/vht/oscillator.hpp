#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vht/rng.hpp"
#include "vht/sim_time.hpp"

namespace vht {

/// Sanity bound on any skew profile value.
inline constexpr double kMaxSkewPpm = 500.0;

enum class SkewKind { constant, ramp, sinusoid, piecewise_linear };

struct SkewBreakpoint {
  double t = 0.0;    // seconds
  double ppm = 0.0;
};

/// Prescribed frequency error s(t) in ppm, with a closed-form integral.
class SkewProfile {
 public:
  SkewProfile() = default;

  static SkewProfile constant(double ppm);
  /// s(t) = base + slope * t
  static SkewProfile ramp(double base_ppm, double slope_ppm_per_s);
  /// s(t) = base + amplitude * sin(2 pi t / period)
  static SkewProfile sinusoid(double base_ppm, double amplitude_ppm, double period_s);
  /// Linear interpolation between breakpoints; held constant outside them.
  static SkewProfile piecewise_linear(std::vector<SkewBreakpoint> points);

  SkewKind kind() const { return kind_; }
  double ppm_at(double t) const;
  /// Integral of s over [0, t], in ppm * s.
  double integral(double t) const;
  /// Largest |s(t)| over [0, horizon].
  double max_abs_ppm(double horizon) const;

 private:
  SkewKind kind_ = SkewKind::constant;
  double base_ = 0.0;
  double slope_ = 0.0;
  double amplitude_ = 0.0;
  double period_ = 1.0;
  std::vector<SkewBreakpoint> points_;
  std::vector<double> prefix_;  // integral up to each breakpoint
};

struct OscillatorSpec {
  std::uint32_t id = 0;
  std::uint64_t f_nom = 0;     // Hz
  SkewProfile skew;
  double jitter_std = 0.0;     // s, per edge
  double wander_std = 0.0;     // ppm per grid step
  double wander_grid = 0.1;    // s
};

/// Continuous-phase crystal model. Edges are numbered from 1; Theta(0) = 0.
///
/// Phase: Theta(t) = f_nom * (t + 1e-6 * int_0^t (skew + wander)).
/// Edge n fires at Theta^-1(n) plus an independent per-edge jitter drawn from
/// a normal saturated at +-3 sigma. 3 sigma < 0.45 periods keeps edges
/// ordered, which lets count_edges look only at the edges around Theta(t).
class Oscillator {
 public:
  Oscillator(OscillatorSpec spec, std::uint64_t seed, double horizon);

  const OscillatorSpec& spec() const { return spec_; }
  double horizon() const { return horizon_; }

  /// Cycles elapsed by t. Throws beyond the horizon.
  double phase(SimTime t) const;
  /// Instantaneous frequency error (profile + wander), ppm.
  double skew_ppm(SimTime t) const;
  /// Theta^-1(n): the un-jittered instant of edge n.
  double nominal_edge_time(std::uint64_t n) const;
  /// Jitter offset of edge n, seconds.
  double edge_jitter(std::uint64_t n) const;
  SimTime edge_time(std::uint64_t n) const;
  /// max{n : edge_time(n) <= t}
  std::uint64_t count_edges(SimTime t) const;

 private:
  double phase_unchecked(double t) const;
  double wander_ppm(double t) const;
  double wander_integral(double t) const;

  OscillatorSpec spec_;
  CounterRng rng_;
  double horizon_;
  double limit_;  // phase may be evaluated slightly past the horizon
  std::vector<double> wander_;         // ppm at grid points
  std::vector<double> wander_prefix_;  // integral at grid points
};

}  // namespace vht
