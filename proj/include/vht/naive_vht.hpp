#pragma once

#include <optional>
#include <vector>

#include "vht/oscillator.hpp"
#include "vht/rational.hpp"
#include "vht/timer.hpp"

namespace vht {

/// Longest time the wakeup offset measurement may take.
inline constexpr double kOffsetBudget = 500e-6;

/// One slow edge sampled during offset measurement.
struct OffsetSample {
  SimTime edge;
  Ticks l0 = 0;  // slow counter at the edge
  Ticks h0 = 0;  // fast counter captured at the edge
};

struct OffsetMeasurement {
  /// mean(l0 * phi0 - h0) over the samples, exact, in fast ticks.
  Rational offset;
  std::vector<OffsetSample> samples;
  /// Instant of the last sampled edge; the clock is usable from here on.
  SimTime ready;
  /// Mean instant of the sampled edges, where the offset estimate is centred.
  double centre = 0.0;
};

/// Samples the n_avg slow edges strictly after `from`. Both timers must be
/// running.
OffsetMeasurement compute_offset(const TimerCounter& fast, const TimerCounter& slow,
                                 const VhtRatio& ratio, SimTime from, int n_avg);

/// Offset-only jitter-compensated VHT. The fast clock is resynchronized to
/// the slow one at every wakeup and then used alone; there is no skew
/// correction, so the reported time drifts with the fast/slow skew blend.
class NaiveVht {
 public:
  NaiveVht(const Oscillator& fast, const Oscillator& slow, int n_avg = 8);

  const VhtRatio& ratio() const { return ratio_; }
  int n_avg() const { return n_avg_; }

  /// Starts both timers and measures the first offset.
  void power_up(SimTime t);
  void enter_sleep(SimTime t);
  void wakeup(SimTime t);

  bool awake() const { return awake_; }
  const OffsetMeasurement& last_offset() const { return *offset_; }
  SimTime last_wakeup() const { return last_wakeup_; }

  /// fast counter + offset, rounded. Throws while asleep or before the offset
  /// measurement completed.
  Ticks get_time(SimTime t) const;
  /// The same reading before the final rounding.
  Rational exact_time(SimTime t) const;
  /// Fast counter value at which an event for `target` must fire: the first
  /// value whose get_time reading reaches the target.
  Ticks compare_value_for(Ticks target) const;
  SimTime event_time(Ticks target) const;

 private:
  void check_usable(SimTime t) const;

  const Oscillator* fast_;
  const Oscillator* slow_;
  VhtRatio ratio_;
  int n_avg_;
  TimerCounter fast_timer_;
  TimerCounter slow_timer_;
  std::optional<OffsetMeasurement> offset_;
  SimTime last_wakeup_{};
  bool awake_ = false;
};

/// Expected naive-VHT error against the slow timeline, seconds:
/// 1e-6 * int_{t_w}^{t} (s_h - s_l) dtau. Quantization is not included.
double predict_naive_error(const SkewProfile& fast_skew, const SkewProfile& slow_skew,
                           double t_w, double t);

}  // namespace vht
