#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <utility>

#include "vht/sim_time.hpp"

namespace vht {

/// Handle to a scheduled event; usable with EventQueue::cancel.
struct EventId {
  SimTime time;
  std::uint64_t seq = 0;
  friend auto operator<=>(const EventId&, const EventId&) = default;
};

/// Discrete-event scheduler. Events fire in nondecreasing time order, ties in
/// insertion order. Actions may schedule further events.
class EventQueue {
 public:
  using Action = std::function<void()>;

  SimTime now() const { return now_; }

  /// Throws ContractViolation if t < now().
  EventId schedule(SimTime t, Action action);

  /// Returns false if the event already fired or was cancelled.
  bool cancel(const EventId& id);

  /// Dispatches every event with time <= t_end, then sets now() = t_end.
  void run_until(SimTime t_end);

  std::size_t pending() const { return events_.size(); }
  std::uint64_t dispatched() const { return dispatched_; }

 private:
  SimTime now_{};
  std::uint64_t next_seq_ = 0;
  std::uint64_t dispatched_ = 0;
  std::map<EventId, Action> events_;
};

}  // namespace vht
