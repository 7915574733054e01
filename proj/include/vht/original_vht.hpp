#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vht/oscillator.hpp"
#include "vht/rational.hpp"
#include "vht/stats.hpp"
#include "vht/timer.hpp"

namespace vht {

/// Register values the timestamping ISR works with.
struct CaptureReadings {
  Ticks l0 = 0;  // slow counter captured at the event
  Ticks h0 = 0;  // fast counter captured at the latest slow edge, as read by the ISR
  Ticks h1 = 0;  // fast counter captured at the event
};

/// l0 * phi0 + ((h1 - h0) mod phi0), exact.
Rational original_vht_timestamp_exact(const CaptureReadings& r, const VhtRatio& ratio);
/// The same, rounded to the nearest fast tick.
Ticks original_vht_timestamp(const CaptureReadings& r, const VhtRatio& ratio);

struct EventTimestamp {
  SimTime t_event;
  CaptureReadings readings;
  Ticks vht = 0;
  /// Slow-clock timeline position of the event in fast ticks: Theta_l(t) * phi0.
  double truth = 0.0;
  Ticks truth_ticks = 0;
  /// (vht - truth) / f_h
  double error_s = 0.0;
  /// vht - f_h * t, in seconds: error against the reference timeline.
  double reference_error_s = 0.0;
  bool race = false;
};

/// Two-timer VHT timestamping with three capture channels: the event feeds a
/// capture on each timer, and a second fast-timer capture is wired to the slow
/// clock so it holds h0 for the latest slow edge. The ISR reads h0 after its
/// latency, so a slow edge in between overwrites it.
class OriginalVht {
 public:
  OriginalVht(const Oscillator& fast, const Oscillator& slow, InterruptLatencyModel latency,
              std::uint64_t seed, ResourceLedger* ledger = nullptr);

  const VhtRatio& ratio() const { return ratio_; }

  /// Starts both timers from zero.
  void start(SimTime t);

  EventTimestamp timestamp_event(SimTime t_event, std::uint64_t event_index);

  /// Ledger accounting for a timekeeper operation built on this scheme:
  /// timestamp inputs need a capture on both timers, outputs a compare on both.
  void reserve_timestamp_input(Purpose purpose);
  void reserve_event_output(Purpose purpose);

 private:
  const Oscillator* fast_;
  const Oscillator* slow_;
  VhtRatio ratio_;
  InterruptLatencyModel latency_;
  CounterRng rng_;
  ResourceLedger* ledger_;
  TimerCounter fast_timer_;
  TimerCounter slow_timer_;
  CaptureChannel h0_capture_;
  CaptureChannel h1_capture_;
  CaptureChannel l0_capture_;
};

struct RaceCensus {
  std::size_t events = 0;
  std::size_t races = 0;
  std::vector<double> race_errors_s;
  SampleStats non_race;  // error statistics, seconds
  double race_fraction() const {
    return events == 0 ? 0.0 : static_cast<double>(races) / static_cast<double>(events);
  }
};

RaceCensus race_census(std::span<const EventTimestamp> stamps);

/// Timestamps every event (indices follow the span order) and summarizes.
RaceCensus race_census(OriginalVht& vht, std::span<const SimTime> events,
                       std::vector<EventTimestamp>* stamps = nullptr);

}  // namespace vht
