#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vht/oscillator.hpp"
#include "vht/rng.hpp"
#include "vht/sim_time.hpp"

namespace vht {

using Ticks = std::int64_t;

/// Hardware counter incremented on each edge of its clock. Stopping holds the
/// value; starting again resumes counting from it.
class TimerCounter {
 public:
  explicit TimerCounter(const Oscillator& clock) : clock_(&clock) {}

  const Oscillator& clock() const { return *clock_; }
  bool running() const { return running_; }

  void start(SimTime t);
  void stop(SimTime t);
  /// Restart counting from zero at t.
  void reset(SimTime t);

  Ticks read(SimTime t) const;
  /// Value held while stopped.
  Ticks held() const { return held_; }
  /// Clock edge number at which the counter reaches value v.
  std::uint64_t edge_for_value(Ticks v) const;
  /// Instant at which the counter reaches value v.
  SimTime time_of_value(Ticks v) const { return clock_->edge_time(edge_for_value(v)); }
  /// Absolute edge count corresponding to counter value 0.
  std::int64_t reset_count() const { return reset_count_; }

 private:
  const Oscillator* clock_;
  std::int64_t reset_count_ = 0;
  Ticks held_ = 0;
  bool running_ = false;
};

/// Input capture unit. A new capture overwrites the previous one. When wired
/// to a clock signal it captures on every rising edge of that clock.
class CaptureChannel {
 public:
  explicit CaptureChannel(const TimerCounter& timer, const Oscillator* edge_source = nullptr)
      : timer_(&timer), edge_source_(edge_source) {}

  /// Latch the counter value at t_event.
  Ticks capture(SimTime t_event);
  /// Register contents as seen by software at t. For an edge-wired channel
  /// this is the capture of the most recent source edge <= t.
  Ticks read_register(SimTime t) const;
  std::optional<Ticks> last_value() const { return last_; }

 private:
  const TimerCounter* timer_;
  const Oscillator* edge_source_;
  std::optional<Ticks> last_;
};

/// Output compare unit: fires when the counter equals compare_value. Arming
/// a value the counter has already reached is an error (no catch-up).
class CompareChannel {
 public:
  explicit CompareChannel(const TimerCounter& timer) : timer_(&timer) {}

  void arm(Ticks value, SimTime now);
  void disarm() { armed_ = false; }
  bool armed() const { return armed_; }
  Ticks compare_value() const { return value_; }
  SimTime fire_time() const;

 private:
  const TimerCounter* timer_;
  Ticks value_ = 0;
  bool armed_ = false;
};

struct InterruptLatencyModel {
  double fixed = 1e-6;
  double jitter_uniform_max = 1e-6;
};

/// Instant at which the ISR for an event at t_event inspects the registers.
SimTime isr_read_time(const InterruptLatencyModel& lat, SimTime t_event,
                      const CounterRng& rng, RngKey key);

enum class Scheme { original_vht, jitter_compensated_vht };
enum class ChannelKind { capture, compare };
enum class TimerSide { fast, slow };

/// Rows of the channel-count comparison, in table order.
enum class Purpose {
  internal,
  os_get_time,
  os_set_event,
  radio_get_hw_event_timestamp,
  radio_set_hw_event,
  application_line,
};

inline constexpr Purpose kAllPurposes[] = {
    Purpose::internal,           Purpose::os_get_time,
    Purpose::os_set_event,       Purpose::radio_get_hw_event_timestamp,
    Purpose::radio_set_hw_event, Purpose::application_line,
};

std::string_view to_string(Scheme s);
std::string_view to_string(Purpose p);

struct ChannelAllocation {
  Scheme scheme;
  ChannelKind kind;
  TimerSide timer;
  Purpose purpose;
  std::string label;
};

struct LedgerCounts {
  std::map<Purpose, int> per_purpose;  // every purpose present, zero if unused
  int total = 0;
};

class ResourceLedger {
 public:
  void allocate(Scheme scheme, ChannelKind kind, TimerSide timer, Purpose purpose,
                std::string label);
  const std::vector<ChannelAllocation>& allocations() const { return allocations_; }
  LedgerCounts count(Scheme scheme) const;
  /// CSV with columns scheme,purpose,channels; one row per purpose plus total.
  std::string to_csv(std::initializer_list<Scheme> schemes) const;

 private:
  std::vector<ChannelAllocation> allocations_;
};

}  // namespace vht
