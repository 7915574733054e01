#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vht/controller.hpp"
#include "vht/event_queue.hpp"
#include "vht/naive_vht.hpp"
#include "vht/oscillator.hpp"
#include "vht/rational.hpp"
#include "vht/timer.hpp"

namespace vht {

/// A hardware event requested inside a planned deep-sleep window, or a sleep
/// window planned over a pending hardware event.
class ScheduleConflict : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NodeMode { powered_off, settling, active, deep_sleep };
std::string_view to_string(NodeMode m);

struct NodeConfig {
  ControllerDesign design = reference_design();
  int n_avg = 8;
  /// Minimum time after power-up before deep sleep is allowed.
  double settle_hold = 14.0;
  /// Minimum awake time after a wakeup; negative means T_hl.
  double forced_active = -1.0;
  /// Delay between the slow compare match and the skew-update ISR.
  InterruptLatencyModel isr_latency{};
  std::uint64_t seed = 1;
  /// Entity number for the node's random streams.
  std::uint32_t entity = 0x4e0de;
};

/// One piece of the virtual clock: V(h) = v_base + (h - h_base) * (1 + gamma)
/// for fast counter values h from h_base on, installed at t_start.
struct ClockSegment {
  SimTime t_start;
  Ticks h_base = 0;
  double v_base = 0.0;
  double gamma = 0.0;
  /// Fast oscillator edge number of counter value 0 while this segment is live.
  std::int64_t reset_count = 0;
  std::size_t span = 0;  // index of the awake span
};

struct TraceRow {
  double t = 0.0;
  NodeMode mode = NodeMode::powered_off;
  double e_hl = 0.0;  // s
  double u_hl = 0.0;  // s
  double gamma_ppm = 0.0;
  double offset_ticks = 0.0;  // V(h) - h at the anchor
};

struct UpdateRecord {
  std::uint64_t k = 0;
  SimTime t_match;  // slow compare match
  SimTime t_isr;
  Ticks slow_target = 0;
  Ticks h_capture = 0;
  double e_ticks = 0.0;
  double e_hl = 0.0;
  double u_hl = 0.0;
  double gamma = 0.0;
};

struct ModeResidency {
  std::map<NodeMode, double> seconds;
  double total = 0.0;
  double fraction(NodeMode m) const;
};

/// Jitter-compensated VHT node. The slow clock is the master timeline; VHT
/// time is in fast ticks of that timeline (slow count * phi0). Every P slow
/// ticks a slow compare match captures the fast counter, the controller turns
/// the phase error into a rate correction, and the virtual clock is re-anchored
/// at the ISR instant so its output never steps. Operations act at queue.now().
class CompleteVhtNode {
 public:
  using Callback = std::function<void(SimTime fired, Ticks target)>;
  using EventHandle = std::uint64_t;

  CompleteVhtNode(const Oscillator& fast, const Oscillator& slow, EventQueue& queue,
                  NodeConfig cfg = {}, ResourceLedger* ledger = nullptr);
  CompleteVhtNode(const CompleteVhtNode&) = delete;
  CompleteVhtNode& operator=(const CompleteVhtNode&) = delete;

  const VhtRatio& ratio() const { return ratio_; }
  const NodeConfig& config() const { return cfg_; }
  /// Skew-update period in slow ticks: round(T_hl * f_l).
  Ticks period_ticks() const { return period_ticks_; }
  double period() const { return period_s_; }
  NodeMode mode() const { return mode_; }
  double gamma() const { return gamma_; }
  double preserved_gamma() const { return preserved_gamma_; }
  std::uint64_t updates() const { return updates_; }

  /// Books the channels of one timekeeper operation in the ledger and enables it.
  void configure(Purpose p);

  void power_up();
  /// Empty when sleep is allowed now, otherwise the reason.
  std::optional<std::string> sleep_refusal() const;
  /// Turns the fast oscillator off until the slow timeline reaches wake_at.
  void enter_deep_sleep(Ticks wake_at);
  void wakeup();
  /// Plans a sleep over [sleep_at, wake_at) on the VHT timeline. Entry is
  /// attempted at sleep_at; if refused then, the node stays awake.
  void schedule_deep_sleep(Ticks sleep_at, Ticks wake_at);
  std::uint64_t refused_sleeps() const { return refused_sleeps_; }

  /// VHT time at t <= now. Throws during deep sleep, before power-up, and
  /// while an offset measurement is running.
  Ticks get_time(SimTime t) const;
  double virtual_time(SimTime t) const;

  EventHandle set_event(Ticks target, Callback cb);
  EventHandle set_hw_event(Ticks target, Callback cb);
  bool cancel_event(EventHandle h);
  std::size_t pending_events() const;
  /// Compare value the event for target needs under the current mapping.
  Ticks compare_value_for(Ticks target) const;

  /// Captures the fast counter at t_event <= now and maps it through the
  /// virtual clock that was live then.
  Ticks get_hw_event_timestamp(SimTime t_event);

  /// Instant at which an event for target fires, given the mapping history
  /// so far. Exact for targets reached before the latest update.
  SimTime resolve_fire_time(Ticks target) const;

  void set_update_hook(std::function<void(const UpdateRecord&)> hook) { hook_ = std::move(hook); }
  const std::vector<TraceRow>& trace() const { return trace_; }
  std::string trace_csv() const;
  const std::vector<ClockSegment>& segments() const { return segments_; }
  /// Time spent in each mode over [t_begin, t_end).
  ModeResidency residency(SimTime t_begin, SimTime t_end) const;
  const std::vector<std::pair<SimTime, NodeMode>>& transitions() const { return transitions_; }

 private:
  struct Span {
    SimTime usable_from;
    std::optional<SimTime> slept_at;
  };
  struct Pending {
    Ticks target = 0;
    bool hardware = false;
    bool internal = false;
    Callback cb;
    EventId qid;
  };

  const ClockSegment& segment_at(SimTime t) const;
  double value_at(const ClockSegment& s, Ticks h) const;
  Ticks compare_value_in(const ClockSegment& s, Ticks target) const;
  void require_awake(const char* op) const;
  void install_segment(SimTime t, Ticks h_base, double v_base);
  void schedule_update(Ticks slow_target);
  void on_update(Ticks slow_target, SimTime t_match, SimTime t_isr);
  EventHandle arm(Ticks target, bool hardware, bool internal, Callback cb);
  void rearm_all();
  void fire(EventHandle h);
  void set_mode(NodeMode m, SimTime t);
  void record(SimTime t, double e, double u);
  SimTime isr_time(SimTime t_match);

  const Oscillator* fast_;
  const Oscillator* slow_;
  EventQueue* queue_;
  NodeConfig cfg_;
  ResourceLedger* ledger_;
  VhtRatio ratio_;
  Ticks period_ticks_;
  double period_s_;
  double forced_active_;
  CounterRng rng_;
  TimerCounter fast_timer_;
  TimerCounter slow_timer_;
  CompareChannel slow_compare_;
  DiscreteController ctrl_;

  NodeMode mode_ = NodeMode::powered_off;
  std::vector<std::pair<SimTime, NodeMode>> transitions_;
  std::vector<ClockSegment> segments_;
  std::vector<Span> spans_;
  double gamma_ = 0.0;
  double preserved_gamma_ = 0.0;
  double preserved_u_ = 0.0;
  std::uint64_t updates_ = 0;
  std::uint64_t updates_since_wake_ = 0;
  SimTime powered_at_{};
  SimTime woke_at_{};
  std::optional<EventId> update_event_;
  std::map<Purpose, bool> configured_;
  std::map<EventHandle, Pending> pending_;
  EventHandle next_handle_ = 1;
  std::vector<std::pair<Ticks, Ticks>> sleep_windows_;
  std::uint64_t refused_sleeps_ = 0;
  std::uint64_t isr_draws_ = 0;
  std::function<void(const UpdateRecord&)> hook_;
  std::vector<TraceRow> trace_;
};

}  // namespace vht
