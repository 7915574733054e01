#include "vht/complete_vht.hpp"

#include <algorithm>
#include <cmath>

#include "vht/csv.hpp"

namespace vht {

std::string_view to_string(NodeMode m) {
  switch (m) {
    case NodeMode::powered_off:
      return "powered_off";
    case NodeMode::settling:
      return "settling";
    case NodeMode::active:
      return "active";
    case NodeMode::deep_sleep:
      return "deep_sleep";
  }
  return "?";
}

double ModeResidency::fraction(NodeMode m) const {
  auto it = seconds.find(m);
  return it == seconds.end() || total <= 0.0 ? 0.0 : it->second / total;
}

namespace {

Ticks round_half_up(double x) { return static_cast<Ticks>(std::floor(x + 0.5)); }

}  // namespace

CompleteVhtNode::CompleteVhtNode(const Oscillator& fast, const Oscillator& slow, EventQueue& queue,
                                 NodeConfig cfg, ResourceLedger* ledger)
    : fast_(&fast),
      slow_(&slow),
      queue_(&queue),
      cfg_(cfg),
      ledger_(ledger),
      ratio_(fast.spec().f_nom, slow.spec().f_nom),
      period_ticks_(round_nearest(cfg.design.T_hl * Rational(static_cast<std::int64_t>(slow.spec().f_nom)))),
      period_s_(static_cast<double>(period_ticks_) / static_cast<double>(slow.spec().f_nom)),
      forced_active_(cfg.forced_active < 0.0 ? to_double(cfg.design.T_hl) : cfg.forced_active),
      rng_(cfg.seed),
      fast_timer_(fast),
      slow_timer_(slow),
      slow_compare_(slow_timer_),
      ctrl_(discretize(cfg.design)) {
  if (period_ticks_ < 1) throw ConfigError("T_hl is shorter than one slow tick");
  if (cfg.n_avg < 1) throw ConfigError("n_avg must be >= 1");
  if (static_cast<double>(cfg.n_avg) / static_cast<double>(ratio_.f_l()) > kOffsetBudget) {
    throw ConfigError("n_avg = " + std::to_string(cfg.n_avg) +
                      " slow edges exceeds the 500 us offset measurement budget");
  }
  if (!(cfg.settle_hold >= 0.0)) throw ConfigError("settle_hold must be >= 0");
  if (ledger_ != nullptr) {
    ledger_->allocate(Scheme::jitter_compensated_vht, ChannelKind::compare, TimerSide::slow,
                      Purpose::internal, "period end / wakeup compare");
    ledger_->allocate(Scheme::jitter_compensated_vht, ChannelKind::capture, TimerSide::fast,
                      Purpose::internal, "capture of the period-end match");
  }
}

void CompleteVhtNode::configure(Purpose p) {
  if (p == Purpose::internal) throw ContractViolation("internal channels are always booked");
  if (configured_[p]) throw ContractViolation(std::string("already configured: ") + std::string(to_string(p)));
  configured_[p] = true;
  if (ledger_ == nullptr) return;
  const auto s = Scheme::jitter_compensated_vht;
  switch (p) {
    case Purpose::os_get_time:
      break;  // computed from the running fast counter
    case Purpose::os_set_event:
    case Purpose::radio_set_hw_event:
      ledger_->allocate(s, ChannelKind::compare, TimerSide::fast, p, "event compare");
      break;
    case Purpose::radio_get_hw_event_timestamp:
    case Purpose::application_line:
      ledger_->allocate(s, ChannelKind::capture, TimerSide::fast, p, "event capture");
      break;
    case Purpose::internal:
      break;
  }
}

SimTime CompleteVhtNode::isr_time(SimTime t_match) {
  return isr_read_time(cfg_.isr_latency, t_match, rng_,
                       {make_stream(cfg_.entity, RngPurpose::isr_latency), isr_draws_++});
}

void CompleteVhtNode::set_mode(NodeMode m, SimTime t) {
  mode_ = m;
  transitions_.emplace_back(t, m);
  record(t, 0.0, ctrl_.last_output());
}

void CompleteVhtNode::record(SimTime t, double e, double u) {
  TraceRow r;
  r.t = t.seconds();
  r.mode = mode_;
  r.e_hl = e;
  r.u_hl = u;
  r.gamma_ppm = gamma_ * 1e6;
  if (!segments_.empty()) {
    r.offset_ticks = segments_.back().v_base - static_cast<double>(segments_.back().h_base);
  }
  trace_.push_back(r);
}

void CompleteVhtNode::install_segment(SimTime t, Ticks h_base, double v_base) {
  segments_.push_back({t, h_base, v_base, gamma_, fast_timer_.reset_count(), spans_.size() - 1});
}

double CompleteVhtNode::value_at(const ClockSegment& s, Ticks h) const {
  return s.v_base + static_cast<double>(h - s.h_base) * (1.0 + s.gamma);
}

void CompleteVhtNode::power_up() {
  if (mode_ != NodeMode::powered_off) throw ContractViolation("node already powered up");
  const SimTime t = queue_->now();
  fast_timer_.start(t);
  slow_timer_.start(t);
  ctrl_.reset();
  gamma_ = 0.0;
  const auto m = compute_offset(fast_timer_, slow_timer_, ratio_, t, cfg_.n_avg);
  const Ticks h_last = m.samples.back().h0;
  spans_.push_back({m.ready, std::nullopt});
  install_segment(m.ready, h_last, static_cast<double>(h_last) + to_double(m.offset));
  powered_at_ = t;
  woke_at_ = t;
  updates_since_wake_ = 0;
  set_mode(NodeMode::settling, t);
  queue_->schedule(t + cfg_.settle_hold, [this] {
    if (mode_ == NodeMode::settling) set_mode(NodeMode::active, queue_->now());
  });
  schedule_update(period_ticks_);
}

void CompleteVhtNode::schedule_update(Ticks slow_target) {
  slow_compare_.arm(slow_target, queue_->now());
  const SimTime t_match = slow_compare_.fire_time();
  const SimTime t_isr = isr_time(t_match);
  update_event_ = queue_->schedule(
      t_isr, [this, slow_target, t_match, t_isr] { on_update(slow_target, t_match, t_isr); });
}

void CompleteVhtNode::on_update(Ticks slow_target, SimTime t_match, SimTime t_isr) {
  update_event_.reset();
  slow_compare_.disarm();
  UpdateRecord rec;
  rec.k = updates_;
  rec.t_match = t_match;
  rec.t_isr = t_isr;
  rec.slow_target = slow_target;
  rec.h_capture = fast_timer_.read(t_match);
  const double expected = static_cast<double>(slow_target) * static_cast<double>(ratio_.num()) /
                          static_cast<double>(ratio_.den());
  rec.e_ticks = expected - value_at(segments_.back(), rec.h_capture);
  rec.e_hl = rec.e_ticks / static_cast<double>(ratio_.f_h());
  rec.u_hl = ctrl_.step(rec.e_hl);
  gamma_ = rec.u_hl / period_s_;
  rec.gamma = gamma_;

  const Ticks h_isr = fast_timer_.read(t_isr);
  install_segment(t_isr, h_isr, value_at(segments_.back(), h_isr));
  ++updates_;
  ++updates_since_wake_;
  record(t_isr, rec.e_hl, rec.u_hl);
  rearm_all();
  schedule_update(slow_target + period_ticks_);
  if (hook_) hook_(rec);
}

std::optional<std::string> CompleteVhtNode::sleep_refusal() const {
  switch (mode_) {
    case NodeMode::powered_off:
      return "not powered";
    case NodeMode::deep_sleep:
      return "already in deep sleep";
    case NodeMode::settling:
      return "still settling";
    case NodeMode::active:
      break;
  }
  if (updates_since_wake_ == 0 || queue_->now() - woke_at_ < forced_active_) {
    return "forced active after wakeup";
  }
  for (const auto& [h, p] : pending_) {
    if (!p.internal) return "fast-clock events armed";
  }
  return std::nullopt;
}

void CompleteVhtNode::enter_deep_sleep(Ticks wake_at) {
  if (auto why = sleep_refusal()) throw ContractViolation("deep sleep refused: " + *why);
  const SimTime t = queue_->now();
  if (wake_at <= get_time(t)) throw ContractViolation("wakeup time is not in the future");
  for (const auto& [h, p] : pending_) {
    if (p.internal && p.target < wake_at) {
      throw ContractViolation("an internal event is due during the requested sleep");
    }
  }
  // first slow count whose VHT time reaches wake_at
  const Rational slow_exact = Rational(wake_at) / ratio_.phi0();
  Ticks s_wake = slow_exact.numerator() / slow_exact.denominator();
  if (Rational(s_wake) < slow_exact) ++s_wake;
  if (s_wake <= slow_timer_.read(t)) throw ContractViolation("wakeup time is not in the future");

  if (update_event_) queue_->cancel(*update_event_);
  update_event_.reset();
  slow_compare_.disarm();
  preserved_u_ = ctrl_.last_output();
  preserved_gamma_ = gamma_;
  fast_timer_.stop(t);
  spans_.back().slept_at = t;
  for (auto& [h, p] : pending_) queue_->cancel(p.qid);
  set_mode(NodeMode::deep_sleep, t);

  slow_compare_.arm(s_wake, t);
  const SimTime t_isr = isr_time(slow_compare_.fire_time());
  queue_->schedule(t_isr, [this] { wakeup(); });
}

void CompleteVhtNode::wakeup() {
  if (mode_ != NodeMode::deep_sleep) throw ContractViolation("wakeup of a node that is not asleep");
  const SimTime t = queue_->now();
  slow_compare_.disarm();
  const ClockSegment before = segments_.back();
  const Ticks h_sleep = fast_timer_.held();
  fast_timer_.start(t);
  gamma_ = preserved_gamma_;
  ctrl_.hold(preserved_u_);

  const auto m = compute_offset(fast_timer_, slow_timer_, ratio_, t, cfg_.n_avg);
  const Ticks h_last = m.samples.back().h0;
  const double phi0 = ratio_.value();
  double acc = 0.0;
  for (const auto& s : m.samples) {
    acc += static_cast<double>(s.l0) * phi0 - static_cast<double>(s.h0 - h_last) * (1.0 + gamma_);
  }
  double v_base = acc / static_cast<double>(m.samples.size());
  v_base = std::max(v_base, value_at(before, h_sleep));

  spans_.push_back({m.ready, std::nullopt});
  install_segment(m.ready, h_last, v_base);
  woke_at_ = t;
  updates_since_wake_ = 0;
  set_mode(NodeMode::active, t);
  rearm_all();
  schedule_update(m.samples.back().l0 + period_ticks_);
}

void CompleteVhtNode::schedule_deep_sleep(Ticks sleep_at, Ticks wake_at) {
  if (sleep_at >= wake_at) throw ContractViolation("sleep window must end after it starts");
  for (const auto& [h, p] : pending_) {
    if (p.hardware && p.target >= sleep_at && p.target < wake_at) {
      throw ScheduleConflict("hardware event at " + std::to_string(p.target) +
                             " falls inside the planned sleep window");
    }
  }
  arm(sleep_at, false, true, [this, wake_at](SimTime, Ticks) {
    if (sleep_refusal()) {
      ++refused_sleeps_;
      return;
    }
    enter_deep_sleep(wake_at);
  });
  sleep_windows_.emplace_back(sleep_at, wake_at);
}

void CompleteVhtNode::require_awake(const char* op) const {
  if (mode_ == NodeMode::powered_off) throw ContractViolation(std::string(op) + ": node is not powered");
  if (mode_ == NodeMode::deep_sleep) {
    throw ContractViolation(std::string(op) + ": fast clock is off during deep sleep");
  }
}

const ClockSegment& CompleteVhtNode::segment_at(SimTime t) const {
  if (t > queue_->now()) throw ContractViolation("VHT query beyond the current simulation time");
  if (segments_.empty() || t < segments_.front().t_start) {
    throw ContractViolation("VHT not available before the power-up offset measurement completes");
  }
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](SimTime x, const ClockSegment& s) { return x < s.t_start; });
  const ClockSegment& s = *(it - 1);
  const auto& sp = spans_[s.span];
  if (sp.slept_at && t >= *sp.slept_at) {
    throw ContractViolation("VHT query during deep sleep or a wakeup offset measurement");
  }
  return s;
}

double CompleteVhtNode::virtual_time(SimTime t) const {
  const ClockSegment& s = segment_at(t);
  const Ticks h = static_cast<Ticks>(fast_->count_edges(t)) - s.reset_count;
  return value_at(s, h);
}

Ticks CompleteVhtNode::get_time(SimTime t) const { return round_half_up(virtual_time(t)); }

Ticks CompleteVhtNode::compare_value_in(const ClockSegment& s, Ticks target) const {
  // smallest h >= h_base with floor(V(h) + 1/2) >= target
  const double thr = static_cast<double>(target) - 0.5;
  if (s.v_base >= thr) return s.h_base;
  Ticks h = s.h_base + static_cast<Ticks>(std::ceil((thr - s.v_base) / (1.0 + s.gamma)));
  while (value_at(s, h) < thr) ++h;
  while (h - 1 >= s.h_base && value_at(s, h - 1) >= thr) --h;
  return h;
}

Ticks CompleteVhtNode::compare_value_for(Ticks target) const {
  require_awake("compare_value_for");
  return compare_value_in(segments_.back(), target);
}

CompleteVhtNode::EventHandle CompleteVhtNode::arm(Ticks target, bool hardware, bool internal,
                                                  Callback cb) {
  require_awake("set_event");
  const SimTime now = queue_->now();
  if (now < segments_.back().t_start) {
    throw ContractViolation("set_event: offset measurement still running");
  }
  if (target <= get_time(now)) {
    throw ContractViolation("event target " + std::to_string(target) + " is not in the future");
  }
  const EventHandle id = next_handle_++;
  const Ticks h = compare_value_in(segments_.back(), target);
  const SimTime t_fire = std::max(now, fast_timer_.time_of_value(h));
  Pending p{target, hardware, internal, std::move(cb), {}};
  p.qid = queue_->schedule(t_fire, [this, id] { fire(id); });
  pending_.emplace(id, std::move(p));
  return id;
}

CompleteVhtNode::EventHandle CompleteVhtNode::set_event(Ticks target, Callback cb) {
  if (!configured_[Purpose::os_set_event]) throw ContractViolation("set_event is not configured");
  return arm(target, false, false, std::move(cb));
}

CompleteVhtNode::EventHandle CompleteVhtNode::set_hw_event(Ticks target, Callback cb) {
  if (!configured_[Purpose::radio_set_hw_event]) {
    throw ContractViolation("set_hw_event is not configured");
  }
  for (const auto& [a, b] : sleep_windows_) {
    if (target >= a && target < b) {
      throw ScheduleConflict("hardware event at " + std::to_string(target) +
                             " falls inside a planned sleep window");
    }
  }
  return arm(target, true, false, std::move(cb));
}

bool CompleteVhtNode::cancel_event(EventHandle h) {
  auto it = pending_.find(h);
  if (it == pending_.end()) return false;
  queue_->cancel(it->second.qid);
  pending_.erase(it);
  return true;
}

std::size_t CompleteVhtNode::pending_events() const {
  return static_cast<std::size_t>(
      std::count_if(pending_.begin(), pending_.end(), [](const auto& kv) { return !kv.second.internal; }));
}

void CompleteVhtNode::rearm_all() {
  const SimTime now = queue_->now();
  for (auto& [id, p] : pending_) {
    queue_->cancel(p.qid);
    const Ticks h = compare_value_in(segments_.back(), p.target);
    const SimTime t_fire = std::max(now, fast_timer_.time_of_value(h));
    p.qid = queue_->schedule(t_fire, [this, id = id] { fire(id); });
  }
}

void CompleteVhtNode::fire(EventHandle h) {
  auto it = pending_.find(h);
  if (it == pending_.end()) return;
  Pending p = std::move(it->second);
  pending_.erase(it);
  if (p.cb) p.cb(queue_->now(), p.target);
}

Ticks CompleteVhtNode::get_hw_event_timestamp(SimTime t_event) {
  if (!configured_[Purpose::radio_get_hw_event_timestamp] && !configured_[Purpose::application_line]) {
    throw ContractViolation("hardware event capture is not configured");
  }
  const ClockSegment& s = segment_at(t_event);
  const Ticks h = static_cast<Ticks>(fast_->count_edges(t_event)) - s.reset_count;
  return round_half_up(value_at(s, h));
}

SimTime CompleteVhtNode::resolve_fire_time(Ticks target) const {
  if (segments_.empty()) throw ContractViolation("resolve_fire_time: node never powered up");
  const double thr = static_cast<double>(target) - 0.5;
  auto it = std::partition_point(segments_.begin(), segments_.end(),
                                 [thr](const ClockSegment& s) { return s.v_base <= thr; });
  if (it == segments_.begin()) throw ContractViolation("target precedes the first usable VHT time");
  const ClockSegment& s = *(it - 1);
  const Ticks h = compare_value_in(s, target);
  const SimTime t = std::max(s.t_start, fast_->edge_time(static_cast<std::uint64_t>(h + s.reset_count)));
  const auto& sp = spans_[s.span];
  if (sp.slept_at && t >= *sp.slept_at) throw ContractViolation("target falls inside a deep sleep");
  return t;
}

std::string CompleteVhtNode::trace_csv() const {
  CsvWriter w{"t", "mode", "e_hl", "u_hl", "gamma_ppm", "offset_ticks"};
  for (const auto& r : trace_) {
    w.cell(r.t).cell(to_string(r.mode)).cell(r.e_hl).cell(r.u_hl).cell(r.gamma_ppm).cell(r.offset_ticks);
    w.end_row();
  }
  return w.str();
}

ModeResidency CompleteVhtNode::residency(SimTime t_begin, SimTime t_end) const {
  ModeResidency r;
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    SimTime a = std::max(transitions_[i].first, t_begin);
    SimTime b = i + 1 < transitions_.size() ? transitions_[i + 1].first : t_end;
    b = std::min(b, t_end);
    if (!(a < b)) continue;
    r.seconds[transitions_[i].second] += b - a;
    r.total += b - a;
  }
  return r;
}

}  // namespace vht
