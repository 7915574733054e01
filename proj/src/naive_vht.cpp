#include "vht/naive_vht.hpp"

#include <string>

namespace vht {

OffsetMeasurement compute_offset(const TimerCounter& fast, const TimerCounter& slow,
                                 const VhtRatio& ratio, SimTime from, int n_avg) {
  if (n_avg < 1) throw ContractViolation("compute_offset: n_avg must be >= 1");
  const Oscillator& slow_osc = slow.clock();
  const std::uint64_t m = slow_osc.count_edges(from);
  OffsetMeasurement out;
  out.samples.reserve(static_cast<std::size_t>(n_avg));
  __int128 sum = 0;  // in units of 1/den ticks
  double centre = 0.0;
  for (int i = 1; i <= n_avg; ++i) {
    const SimTime edge = slow_osc.edge_time(m + static_cast<std::uint64_t>(i));
    OffsetSample s{edge, slow.read(edge), fast.read(edge)};
    sum += static_cast<__int128>(s.l0) * ratio.num() - static_cast<__int128>(s.h0) * ratio.den();
    centre += edge.seconds();
    out.samples.push_back(s);
  }
  out.offset = Rational(static_cast<std::int64_t>(sum), ratio.den() * n_avg);
  out.ready = out.samples.back().edge;
  out.centre = centre / n_avg;
  return out;
}

NaiveVht::NaiveVht(const Oscillator& fast, const Oscillator& slow, int n_avg)
    : fast_(&fast),
      slow_(&slow),
      ratio_(fast.spec().f_nom, slow.spec().f_nom),
      n_avg_(n_avg),
      fast_timer_(fast),
      slow_timer_(slow) {
  if (n_avg < 1) throw ConfigError("n_avg must be >= 1");
  if (static_cast<double>(n_avg) / static_cast<double>(ratio_.f_l()) > kOffsetBudget) {
    throw ConfigError("n_avg = " + std::to_string(n_avg) +
                      " slow edges exceeds the 500 us offset measurement budget");
  }
}

void NaiveVht::power_up(SimTime t) {
  if (slow_timer_.running()) throw ContractViolation("NaiveVht already powered up");
  slow_timer_.start(t);
  wakeup(t);
}

void NaiveVht::enter_sleep(SimTime t) {
  if (!awake_) throw ContractViolation("NaiveVht is not awake");
  fast_timer_.stop(t);
  awake_ = false;
}

void NaiveVht::wakeup(SimTime t) {
  if (awake_) throw ContractViolation("NaiveVht is already awake");
  fast_timer_.start(t);
  offset_ = compute_offset(fast_timer_, slow_timer_, ratio_, t, n_avg_);
  last_wakeup_ = t;
  awake_ = true;
}

void NaiveVht::check_usable(SimTime t) const {
  if (!awake_) throw ContractViolation("NaiveVht: fast clock is off during sleep");
  if (t < offset_->ready) throw ContractViolation("NaiveVht: offset measurement still running");
}

Ticks NaiveVht::get_time(SimTime t) const { return round_nearest(exact_time(t)); }

Rational NaiveVht::exact_time(SimTime t) const {
  check_usable(t);
  return Rational(fast_timer_.read(t)) + offset_->offset;
}

Ticks NaiveVht::compare_value_for(Ticks target) const {
  // smallest h with round(h + offset) >= target, i.e. h + offset >= target - 1/2
  const Rational threshold = Rational(target) - Rational(1, 2) - offset_->offset;
  std::int64_t h = threshold.numerator() / threshold.denominator();
  if (Rational(h) < threshold) ++h;
  while (Rational(h - 1) >= threshold) --h;
  return h;
}

SimTime NaiveVht::event_time(Ticks target) const {
  if (!awake_) throw ContractViolation("NaiveVht: fast clock is off during sleep");
  return fast_timer_.time_of_value(compare_value_for(target));
}

double predict_naive_error(const SkewProfile& fast_skew, const SkewProfile& slow_skew,
                           double t_w, double t) {
  if (t < t_w) throw ContractViolation("predict_naive_error: t precedes the wakeup");
  return 1e-6 * ((fast_skew.integral(t) - fast_skew.integral(t_w)) -
                 (slow_skew.integral(t) - slow_skew.integral(t_w)));
}

}  // namespace vht
