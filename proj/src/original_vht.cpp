#include "vht/original_vht.hpp"

#include <cmath>

namespace vht {

Rational original_vht_timestamp_exact(const CaptureReadings& r, const VhtRatio& ratio) {
  // With phi0 = p/q: (x mod p/q) = ((x*q) mod p) / q.
  const std::int64_t p = ratio.num();
  const std::int64_t q = ratio.den();
  return Rational(r.l0 * p + emod((r.h1 - r.h0) * q, p), q);
}

Ticks original_vht_timestamp(const CaptureReadings& r, const VhtRatio& ratio) {
  return round_nearest(original_vht_timestamp_exact(r, ratio));
}

OriginalVht::OriginalVht(const Oscillator& fast, const Oscillator& slow,
                         InterruptLatencyModel latency, std::uint64_t seed,
                         ResourceLedger* ledger)
    : fast_(&fast),
      slow_(&slow),
      ratio_(fast.spec().f_nom, slow.spec().f_nom),
      latency_(latency),
      rng_(seed),
      ledger_(ledger),
      fast_timer_(fast),
      slow_timer_(slow),
      h0_capture_(fast_timer_, &slow),
      h1_capture_(fast_timer_),
      l0_capture_(slow_timer_) {
  if (ledger_ != nullptr) {
    ledger_->allocate(Scheme::original_vht, ChannelKind::capture, TimerSide::fast,
                      Purpose::internal, "slow clock edge capture (h0)");
  }
}

void OriginalVht::start(SimTime t) {
  fast_timer_.start(t);
  slow_timer_.start(t);
}

EventTimestamp OriginalVht::timestamp_event(SimTime t_event, std::uint64_t event_index) {
  EventTimestamp ts;
  ts.t_event = t_event;
  ts.readings.h1 = h1_capture_.capture(t_event);
  ts.readings.l0 = l0_capture_.capture(t_event);
  const SimTime t_read = isr_read_time(
      latency_, t_event, rng_, {make_stream(slow_->spec().id, RngPurpose::isr_latency), event_index});
  ts.readings.h0 = h0_capture_.read_register(t_read);

  ts.vht = original_vht_timestamp(ts.readings, ratio_);
  const double f_h = static_cast<double>(ratio_.f_h());
  ts.truth = (slow_->phase(t_event) - static_cast<double>(slow_timer_.reset_count())) *
             ratio_.value();
  ts.truth_ticks = std::llround(ts.truth);
  ts.error_s = (static_cast<double>(ts.vht) - ts.truth) / f_h;
  ts.reference_error_s = (static_cast<double>(ts.vht) - f_h * t_event.seconds()) / f_h;
  ts.race = std::abs(static_cast<double>(ts.vht) - ts.truth) > 0.5 * ratio_.value();
  return ts;
}

void OriginalVht::reserve_timestamp_input(Purpose purpose) {
  if (ledger_ == nullptr) return;
  ledger_->allocate(Scheme::original_vht, ChannelKind::capture, TimerSide::fast, purpose,
                    "event capture (h1)");
  ledger_->allocate(Scheme::original_vht, ChannelKind::capture, TimerSide::slow, purpose,
                    "event capture (l0)");
}

void OriginalVht::reserve_event_output(Purpose purpose) {
  if (ledger_ == nullptr) return;
  ledger_->allocate(Scheme::original_vht, ChannelKind::compare, TimerSide::slow, purpose,
                    "coarse compare");
  ledger_->allocate(Scheme::original_vht, ChannelKind::compare, TimerSide::fast, purpose,
                    "fine compare");
}

RaceCensus race_census(std::span<const EventTimestamp> stamps) {
  RaceCensus c;
  std::vector<double> clean;
  clean.reserve(stamps.size());
  for (const auto& s : stamps) {
    ++c.events;
    if (s.race) {
      ++c.races;
      c.race_errors_s.push_back(s.error_s);
    } else {
      clean.push_back(s.error_s);
    }
  }
  c.non_race = summarize(clean);
  return c;
}

RaceCensus race_census(OriginalVht& vht, std::span<const SimTime> events,
                       std::vector<EventTimestamp>* stamps) {
  std::vector<EventTimestamp> local;
  auto& out = stamps != nullptr ? *stamps : local;
  out.clear();
  out.reserve(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) out.push_back(vht.timestamp_event(events[i], i));
  return race_census(out);
}

}  // namespace vht
