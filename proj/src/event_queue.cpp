#include "vht/event_queue.hpp"

#include <string>

namespace vht {

EventId EventQueue::schedule(SimTime t, Action action) {
  if (t < now_) {
    throw ContractViolation("schedule: event at t=" + std::to_string(t.seconds()) +
                            " is before now=" + std::to_string(now_.seconds()));
  }
  EventId id{t, next_seq_++};
  events_.emplace(id, std::move(action));
  return id;
}

bool EventQueue::cancel(const EventId& id) { return events_.erase(id) > 0; }

void EventQueue::run_until(SimTime t_end) {
  if (t_end < now_) {
    throw ContractViolation("run_until: target time is in the past");
  }
  while (!events_.empty()) {
    auto it = events_.begin();
    if (it->first.time > t_end) break;
    now_ = it->first.time;
    Action action = std::move(it->second);
    events_.erase(it);
    ++dispatched_;
    action();
  }
  now_ = t_end;
}

}  // namespace vht
