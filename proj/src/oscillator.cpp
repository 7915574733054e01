#include "vht/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vht {

SkewProfile SkewProfile::constant(double ppm) {
  SkewProfile p;
  p.kind_ = SkewKind::constant;
  p.base_ = ppm;
  return p;
}

SkewProfile SkewProfile::ramp(double base_ppm, double slope_ppm_per_s) {
  SkewProfile p;
  p.kind_ = SkewKind::ramp;
  p.base_ = base_ppm;
  p.slope_ = slope_ppm_per_s;
  return p;
}

SkewProfile SkewProfile::sinusoid(double base_ppm, double amplitude_ppm, double period_s) {
  if (!(period_s > 0.0)) throw ConfigError("sinusoid skew period must be > 0");
  SkewProfile p;
  p.kind_ = SkewKind::sinusoid;
  p.base_ = base_ppm;
  p.amplitude_ = amplitude_ppm;
  p.period_ = period_s;
  return p;
}

SkewProfile SkewProfile::piecewise_linear(std::vector<SkewBreakpoint> points) {
  if (points.empty()) throw ConfigError("piecewise-linear skew needs at least one breakpoint");
  if (points.front().t < 0.0) throw ConfigError("skew breakpoints must have t >= 0");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].t > points[i - 1].t)) {
      throw ConfigError("skew breakpoints must be strictly increasing in t");
    }
  }
  SkewProfile p;
  p.kind_ = SkewKind::piecewise_linear;
  p.points_ = std::move(points);
  p.prefix_.resize(p.points_.size());
  p.prefix_[0] = p.points_[0].ppm * p.points_[0].t;
  for (std::size_t i = 1; i < p.points_.size(); ++i) {
    const auto& a = p.points_[i - 1];
    const auto& b = p.points_[i];
    p.prefix_[i] = p.prefix_[i - 1] + 0.5 * (a.ppm + b.ppm) * (b.t - a.t);
  }
  return p;
}

double SkewProfile::ppm_at(double t) const {
  switch (kind_) {
    case SkewKind::constant:
      return base_;
    case SkewKind::ramp:
      return base_ + slope_ * t;
    case SkewKind::sinusoid:
      return base_ + amplitude_ * std::sin(2.0 * std::numbers::pi * t / period_);
    case SkewKind::piecewise_linear: {
      if (t <= points_.front().t) return points_.front().ppm;
      if (t >= points_.back().t) return points_.back().ppm;
      const auto it = std::upper_bound(points_.begin(), points_.end(), t,
                                       [](double v, const SkewBreakpoint& b) { return v < b.t; });
      const auto& b = *it;
      const auto& a = *(it - 1);
      return a.ppm + (b.ppm - a.ppm) * (t - a.t) / (b.t - a.t);
    }
  }
  return 0.0;
}

double SkewProfile::integral(double t) const {
  switch (kind_) {
    case SkewKind::constant:
      return base_ * t;
    case SkewKind::ramp:
      return base_ * t + 0.5 * slope_ * t * t;
    case SkewKind::sinusoid: {
      const double w = 2.0 * std::numbers::pi / period_;
      return base_ * t + amplitude_ / w * (1.0 - std::cos(w * t));
    }
    case SkewKind::piecewise_linear: {
      if (t <= points_.front().t) return points_.front().ppm * t;
      if (t >= points_.back().t) return prefix_.back() + points_.back().ppm * (t - points_.back().t);
      const auto it = std::upper_bound(points_.begin(), points_.end(), t,
                                       [](double v, const SkewBreakpoint& b) { return v < b.t; });
      const std::size_t i = static_cast<std::size_t>(it - points_.begin()) - 1;
      const auto& a = points_[i];
      const auto& b = points_[i + 1];
      const double tau = t - a.t;
      return prefix_[i] + a.ppm * tau + 0.5 * (b.ppm - a.ppm) * tau * tau / (b.t - a.t);
    }
  }
  return 0.0;
}

double SkewProfile::max_abs_ppm(double horizon) const {
  switch (kind_) {
    case SkewKind::constant:
      return std::abs(base_);
    case SkewKind::ramp:
      return std::max(std::abs(base_), std::abs(base_ + slope_ * horizon));
    case SkewKind::sinusoid:
      return std::abs(base_) + std::abs(amplitude_);
    case SkewKind::piecewise_linear: {
      double m = 0.0;
      for (const auto& p : points_) m = std::max(m, std::abs(p.ppm));
      return m;
    }
  }
  return 0.0;
}

Oscillator::Oscillator(OscillatorSpec spec, std::uint64_t seed, double horizon)
    : spec_(std::move(spec)), rng_(seed), horizon_(horizon) {
  check_horizon(horizon);
  if (spec_.f_nom == 0) throw ConfigError("oscillator f_nom must be > 0");
  if (!(spec_.jitter_std >= 0.0)) throw ConfigError("oscillator jitter_std must be >= 0");
  const double period = 1.0 / static_cast<double>(spec_.f_nom);
  if (!(3.0 * spec_.jitter_std < 0.45 * period)) {
    throw ConfigError("oscillator " + std::to_string(spec_.id) +
                      ": 3*jitter_std must be below 0.45 periods to keep edges ordered");
  }
  if (!(spec_.wander_std >= 0.0)) throw ConfigError("oscillator wander_std must be >= 0");
  if (spec_.wander_std > 0.0 && !(spec_.wander_grid > 0.0)) {
    throw ConfigError("oscillator wander_grid must be > 0");
  }

  limit_ = horizon_ + 1.0 + 4.0 * period;

  if (spec_.wander_std > 0.0) {
    const auto steps = static_cast<std::size_t>(std::ceil(limit_ / spec_.wander_grid)) + 2;
    wander_.resize(steps + 1);
    wander_prefix_.resize(steps + 1);
    const std::uint64_t stream = make_stream(spec_.id, RngPurpose::wander);
    wander_[0] = 0.0;
    wander_prefix_[0] = 0.0;
    for (std::size_t k = 1; k <= steps; ++k) {
      wander_[k] = wander_[k - 1] + rng_.gaussian({stream, k}, 0.0, spec_.wander_std);
      wander_prefix_[k] =
          wander_prefix_[k - 1] + 0.5 * (wander_[k - 1] + wander_[k]) * spec_.wander_grid;
    }
  }

  double wander_peak = 0.0;
  for (double w : wander_) wander_peak = std::max(wander_peak, std::abs(w));
  if (spec_.skew.max_abs_ppm(limit_) + wander_peak > kMaxSkewPpm) {
    throw ConfigError("oscillator " + std::to_string(spec_.id) + ": skew exceeds " +
                      std::to_string(kMaxSkewPpm) + " ppm within the horizon");
  }
}

double Oscillator::wander_ppm(double t) const {
  if (wander_.empty()) return 0.0;
  const double g = spec_.wander_grid;
  const auto k = std::min(static_cast<std::size_t>(t / g), wander_.size() - 2);
  const double tau = t - static_cast<double>(k) * g;
  return wander_[k] + (wander_[k + 1] - wander_[k]) * tau / g;
}

double Oscillator::wander_integral(double t) const {
  if (wander_.empty()) return 0.0;
  const double g = spec_.wander_grid;
  const auto k = std::min(static_cast<std::size_t>(t / g), wander_.size() - 2);
  const double tau = t - static_cast<double>(k) * g;
  return wander_prefix_[k] + wander_[k] * tau + 0.5 * (wander_[k + 1] - wander_[k]) * tau * tau / g;
}

double Oscillator::phase_unchecked(double t) const {
  const double f = static_cast<double>(spec_.f_nom);
  return f * t + f * 1e-6 * (spec_.skew.integral(t) + wander_integral(t));
}

double Oscillator::phase(SimTime t) const {
  if (t.seconds() > horizon_) {
    throw ContractViolation("phase: t=" + std::to_string(t.seconds()) + " is beyond the horizon");
  }
  return phase_unchecked(t.seconds());
}

double Oscillator::skew_ppm(SimTime t) const {
  return spec_.skew.ppm_at(t.seconds()) + wander_ppm(t.seconds());
}

double Oscillator::nominal_edge_time(std::uint64_t n) const {
  if (n == 0) throw ContractViolation("edge numbers start at 1");
  const double f = static_cast<double>(spec_.f_nom);
  const double target = static_cast<double>(n);
  double t = target / f;
  if (t > limit_) throw ContractViolation("edge " + std::to_string(n) + " is beyond the horizon");
  for (int it = 0; it < 8; ++it) {
    const double rate = f * (1.0 + 1e-6 * (spec_.skew.ppm_at(t) + wander_ppm(t)));
    const double dt = (phase_unchecked(t) - target) / rate;
    t -= dt;
    if (std::abs(dt) <= 1e-17 * t) break;
  }
  return t;
}

double Oscillator::edge_jitter(std::uint64_t n) const {
  if (spec_.jitter_std == 0.0) return 0.0;
  return spec_.jitter_std * rng_.clamped_normal({make_stream(spec_.id, RngPurpose::edge_jitter), n}, 3.0);
}

SimTime Oscillator::edge_time(std::uint64_t n) const {
  return SimTime(nominal_edge_time(n) + edge_jitter(n));
}

std::uint64_t Oscillator::count_edges(SimTime t) const {
  if (t.seconds() > limit_) throw ContractViolation("count_edges: t is beyond the horizon");
  std::uint64_t c = static_cast<std::uint64_t>(std::floor(phase_unchecked(t.seconds())));
  while (edge_time(c + 1) <= t) ++c;
  while (c >= 1 && edge_time(c) > t) --c;
  return c;
}

}  // namespace vht
