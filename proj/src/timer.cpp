#include "vht/timer.hpp"

#include <sstream>

namespace vht {

void TimerCounter::start(SimTime t) {
  if (running_) throw ContractViolation("timer already running");
  reset_count_ = static_cast<std::int64_t>(clock_->count_edges(t)) - held_;
  running_ = true;
}

void TimerCounter::stop(SimTime t) {
  if (!running_) throw ContractViolation("timer already stopped");
  held_ = read(t);
  running_ = false;
}

void TimerCounter::reset(SimTime t) {
  held_ = 0;
  if (running_) reset_count_ = static_cast<std::int64_t>(clock_->count_edges(t));
}

Ticks TimerCounter::read(SimTime t) const {
  if (!running_) throw ContractViolation("read of a stopped timer");
  return static_cast<std::int64_t>(clock_->count_edges(t)) - reset_count_;
}

std::uint64_t TimerCounter::edge_for_value(Ticks v) const {
  const std::int64_t edge = v + reset_count_;
  if (edge < 1) throw ContractViolation("counter value precedes the first clock edge");
  return static_cast<std::uint64_t>(edge);
}

Ticks CaptureChannel::capture(SimTime t_event) {
  last_ = timer_->read(t_event);
  return *last_;
}

Ticks CaptureChannel::read_register(SimTime t) const {
  if (edge_source_ == nullptr) {
    if (!last_) throw ContractViolation("capture register read before any capture");
    return *last_;
  }
  const std::uint64_t m = edge_source_->count_edges(t);
  if (m == 0) return 0;
  return timer_->read(edge_source_->edge_time(m));
}

void CompareChannel::arm(Ticks value, SimTime now) {
  if (!timer_->running()) throw ContractViolation("arming a compare channel on a stopped timer");
  if (timer_->read(now) >= value) {
    throw ContractViolation("compare value " + std::to_string(value) + " already passed");
  }
  value_ = value;
  armed_ = true;
}

SimTime CompareChannel::fire_time() const {
  if (!armed_) throw ContractViolation("compare channel not armed");
  return timer_->time_of_value(value_);
}

SimTime isr_read_time(const InterruptLatencyModel& lat, SimTime t_event,
                      const CounterRng& rng, RngKey key) {
  if (!(lat.fixed >= 0.0) || !(lat.jitter_uniform_max >= 0.0)) {
    throw ConfigError("interrupt latency parameters must be >= 0");
  }
  double delay = lat.fixed;
  if (lat.jitter_uniform_max > 0.0) delay += lat.jitter_uniform_max * rng.uniform(key);
  return t_event + delay;
}

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::original_vht:
      return "vht";
    case Scheme::jitter_compensated_vht:
      return "jcvht";
  }
  return "?";
}

std::string_view to_string(Purpose p) {
  switch (p) {
    case Purpose::internal:
      return "internal";
    case Purpose::os_get_time:
      return "os_get_time";
    case Purpose::os_set_event:
      return "os_set_event";
    case Purpose::radio_get_hw_event_timestamp:
      return "radio_get_hw_event_timestamp";
    case Purpose::radio_set_hw_event:
      return "radio_set_hw_event";
    case Purpose::application_line:
      return "application_line";
  }
  return "?";
}

void ResourceLedger::allocate(Scheme scheme, ChannelKind kind, TimerSide timer, Purpose purpose,
                              std::string label) {
  allocations_.push_back({scheme, kind, timer, purpose, std::move(label)});
}

LedgerCounts ResourceLedger::count(Scheme scheme) const {
  LedgerCounts c;
  for (Purpose p : kAllPurposes) c.per_purpose[p] = 0;
  for (const auto& a : allocations_) {
    if (a.scheme != scheme) continue;
    ++c.per_purpose[a.purpose];
    ++c.total;
  }
  return c;
}

std::string ResourceLedger::to_csv(std::initializer_list<Scheme> schemes) const {
  std::ostringstream os;
  os << "scheme,purpose,channels\n";
  for (Scheme s : schemes) {
    const LedgerCounts c = count(s);
    for (Purpose p : kAllPurposes) {
      os << to_string(s) << ',' << to_string(p) << ',' << c.per_purpose.at(p) << '\n';
    }
    os << to_string(s) << ",total," << c.total << '\n';
  }
  return os.str();
}

}  // namespace vht
