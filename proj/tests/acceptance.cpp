// Acceptance gate: one PASS/FAIL line per criterion, thresholds pinned here.
//
//   acceptance [--only N]
//
// Exit status 0 only when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vht/complete_vht.hpp"
#include "vht/config.hpp"
#include "vht/controller.hpp"
#include "vht/experiments.hpp"
#include "vht/naive_vht.hpp"
#include "vht/original_vht.hpp"

using namespace vht;

namespace {

constexpr double kFh = 48e6;
constexpr double kFl = 32768.0;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (detail.tellp() > 0) detail << "; ";
    detail << (ok ? "" : "[x] ") << what;
  }
};

std::string sci(double x, int digits = 4) {
  std::ostringstream o;
  o.precision(digits);
  o << x;
  return o.str();
}

ScenarioConfig mc_scenario() {
  ScenarioConfig c = default_scenario();
  c.horizon = 110.0;
  c.latency = {2e-6, 0.0};
  c.mc.events = 100000;
  c.mc.window = 100.0;
  return c;
}

OscillatorSpec osc(std::uint32_t id, std::uint64_t f, double ppm, double jitter) {
  OscillatorSpec s;
  s.id = id;
  s.f_nom = f;
  s.skew = SkewProfile::constant(ppm);
  s.jitter_std = jitter;
  return s;
}

void ac1(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_mc(mc_scenario());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double sd = r.census.non_race.std;
  v.require(std::abs(sd - 60.4e-9) <= 0.02 * 60.4e-9, "non-race std " + sci(sd * 1e9) + " ns vs 60.4 ns +-2%");
  v.require(secs < 10.0, "runtime " + sci(secs, 3) + " s < 10 s");
}

void ac2(Verdict& v) {
  const auto r = run_mc(mc_scenario());
  const auto& c = r.census;
  const double predicted = 2e-6 * kFl;
  double worst = 0.0;
  for (double e : c.race_errors_s) worst = std::max(worst, std::abs(std::abs(e) - 1.0 / kFl) * kFh);
  v.require(c.races > 0 && worst <= 1.0,
            std::to_string(c.races) + " races, worst |error| deviation from 1/32768 s " + sci(worst, 3) +
                " fast ticks (<= 1)");
  v.require(std::abs(c.race_fraction() - predicted) <= 0.01,
            "race fraction " + sci(100 * c.race_fraction(), 3) + " % vs " + sci(100 * predicted, 3) + " % +-1 pp");
  const VhtRatio ten(10, 1);
  const bool examples = original_vht_timestamp({1, 1, 11}, ten) == 10 && original_vht_timestamp({1, 11, 11}, ten) == 10;
  v.require(examples, "worked race examples give 10 (truth 20)");
}

void ac3(Verdict& v) {
  const auto tf = discretize(reference_design()).transfer();
  const std::vector<Rational> num{Rational(26), Rational(-25), Rational(0)};
  const std::vector<Rational> den{Rational(125), Rational(-150), Rational(25)};
  v.require(tf.num.coeffs == num && tf.den.coeffs == den, "coefficients (26, -25, 0)/(125, -150, 25)");
  const double pm = phase_margin_deg(25.0 / 4.0, 16.0);
  v.require(pm >= 77.0 && pm <= 77.7, "phase margin " + sci(pm, 6) + " deg in [77.0, 77.7]");
}

void ac4(Verdict& v) {
  ScenarioConfig c = default_scenario();
  c.horizon = 70.0;
  c.slow.jitter_std = 0.0;
  c.settle.band = 1e-3;
  const auto r = run_settle(c);
  v.require(std::abs(r.model.settling_s - 14.0) <= 2.0,
            "0.1% settling " + sci(r.model.settling_s, 4) + " s vs 14 +-2 s (1% band: " +
                sci(r.model_settling_1pct, 4) + " s; node " + sci(r.node_settling, 4) + " s)");
}

void ac5(Verdict& v) {
  const double a = min_sync_period(48e6, 0.1), b = min_sync_period(48e6, 1.0);
  v.require(std::abs(a - 0.2083) < 5e-5, "0.1 ppm: " + sci(a, 6) + " s vs 0.2083 s");
  v.require(std::abs(b - 0.0208) < 5e-5, "1 ppm: " + sci(b, 6) + " s vs 0.0208 s");
}

void ac6(Verdict& v) {
  const auto r = cmd_resources(default_scenario());
  for (const auto& c : r.checks) v.require(c.pass, c.name + " (" + c.detail + ")");
}

void ac7(Verdict& v) {
  ScenarioConfig c = default_scenario();
  c.horizon = 800.0;
  const auto rows = run_duty(c);
  for (const auto& [period, want] : {std::pair{10.0, 98.0}, std::pair{60.0, 99.7}}) {
    const auto it = std::find_if(rows.begin(), rows.end(), [p = period](const DutyRow& r) { return r.period == p; });
    if (it == rows.end()) {
      v.require(false, "no row for " + sci(period) + " s");
      continue;
    }
    const double a = round_sig3(100 * it->deep_sleep_fraction), s = round_sig3(100 * it->sim_deep_sleep_fraction);
    v.require(a == want && s == want,
              sci(period) + " s: " + sci(a) + " % analytic, " + sci(s) + " % simulated vs " + sci(want) + " %");
  }
}

void ac8(Verdict& v) {
  ScenarioConfig c = default_scenario();
  c.horizon = 1000.0;
  c.intervals.repetitions = 100000;
  c.intervals.warmup = 60.0;
  const auto rows = run_interval_jitter(c);
  double lo = INFINITY, hi = 0.0;
  for (double d : {1e-3, 1e-2, 1e-1}) {
    const double s = find_interval(rows, "complete-vht", d).error.std;
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  const double longest = find_interval(rows, "complete-vht", 10.0).error.std;
  v.require(hi <= 15e-9, "complete-vht std <= 15 ns up to 100 ms (max " + sci(hi * 1e9, 3) + " ns)");
  v.require(hi <= 1.5 * lo, "flat up to 100 ms: max/min " + sci(hi / lo, 3) + " <= 1.5");
  v.require(longest > hi, "10 s std " + sci(longest * 1e9, 3) + " ns > short-interval max");
  bool above = true;
  std::string worst;
  for (double d : c.intervals.deltas) {
    const double o = find_interval(rows, "original-vht", d).error.std;
    const double s = find_interval(rows, "slow", d).error.std;
    if (o < s) {
      above = false;
      worst += " " + sci(d);
    }
  }
  v.require(above, "original-vht std >= slow std at every interval" + (above ? "" : " (fails at" + worst + ")"));
}

void ac9(Verdict& v) {
  std::mt19937_64 gen(2024);
  std::size_t mismatches = 0, queries = 0;
  for (int k = 0; k < 1000; ++k) {
    OscillatorSpec s;
    s.id = static_cast<std::uint32_t>(k);
    s.f_nom = std::uniform_int_distribution<std::uint64_t>(1, 1000)(gen);
    s.skew = SkewProfile::sinusoid(std::uniform_real_distribution<double>(-100, 100)(gen), 20.0, 3.0);
    s.jitter_std = std::uniform_real_distribution<double>(0.0, 0.15)(gen) / static_cast<double>(s.f_nom);
    const Oscillator o(s, 7, 10.0);
    std::vector<double> edges;
    // every edge that can land at or before 9.4 s, given the 0.45-period jitter clamp
    for (std::uint64_t n = 1; n <= static_cast<std::uint64_t>(o.phase(SimTime(9.5))) + 1; ++n) {
      edges.push_back(o.edge_time(n).seconds());
    }
    std::vector<double> ts{0.0};
    for (double e : edges) ts.insert(ts.end(), {e, std::nextafter(e, 0.0)});
    for (int i = 0; i < 50; ++i) ts.push_back(std::uniform_real_distribution<double>(0.0, 9.4)(gen));
    for (double t : ts) {
      const auto brute = static_cast<std::uint64_t>(std::count_if(edges.begin(), edges.end(), [t](double e) { return e <= t; }));
      ++queries;
      if (o.count_edges(SimTime(t)) != brute) ++mismatches;
    }
  }
  v.require(mismatches == 0, "count_edges vs enumeration: " + std::to_string(mismatches) + " mismatches in " +
                                 std::to_string(queries) + " queries over 1000 clocks");

  std::uniform_real_distribution<double> ppm(-100.0, 100.0);
  double worst = 0.0, worst_rounded = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double sh = ppm(gen), sl = ppm(gen);
    const Oscillator fast(osc(1, 48000000, sh, 0.0), 3, 61.0);
    const Oscillator slow(osc(2, 32768, sl, 0.0), 3, 61.0);
    NaiveVht n(fast, slow);
    const SimTime t_on(std::uniform_real_distribution<double>(0.0, 1.0)(gen));
    n.power_up(t_on);
    // the slow counter starts at power-up
    const double l_on = static_cast<double>(slow.count_edges(t_on));
    const double tw = n.last_offset().centre;
    for (int i = 0; i < 20; ++i) {
      const SimTime t(std::uniform_real_distribution<double>(n.last_offset().ready.seconds(), 60.0)(gen));
      const double truth = (slow.phase(t) - l_on) * n.ratio().value();
      const double pred = predict_naive_error(fast.spec().skew, slow.spec().skew, tw, t.seconds()) * kFh;
      worst = std::max(worst, std::abs(to_double(n.exact_time(t)) - truth - pred));
      worst_rounded = std::max(worst_rounded, std::abs(static_cast<double>(n.get_time(t)) - truth - pred));
    }
  }
  v.require(worst <= 1.0, "naive error vs prediction: worst " + sci(worst, 3) + " fast ticks (<= 1) before the output rounding, " +
                             sci(worst_rounded, 3) + " after");
}

std::size_t monotonicity_violations(std::size_t pairs) {
  const Oscillator fast(osc(1, 48000000, -37.0, 0.0), 11, 300.0);
  const Oscillator slow(osc(2, 32768, 12.0, 60e-9), 11, 300.0);
  EventQueue q;
  CompleteVhtNode node(fast, slow, q);
  node.power_up();
  q.run_until(SimTime(16.0));
  for (int k = 0; k < 10; ++k) {
    const Ticks now = node.get_time(q.now());
    node.enter_deep_sleep(now + static_cast<Ticks>((2.0 + k) * kFh));
    q.run_until(q.now() + 2.0 + k + 3.0 + 0.37 * k);
  }
  std::vector<std::pair<double, double>> awake;
  double from = node.segments().front().t_start.seconds();
  for (const auto& [t, m] : node.transitions()) {
    if (m == NodeMode::deep_sleep) awake.emplace_back(from, t.seconds());
    if (m == NodeMode::active && !awake.empty()) from = t.seconds() + 1e-3;
  }
  awake.emplace_back(from, q.now().seconds());
  std::mt19937_64 gen(5);
  auto pick = [&] {
    const auto& [a, b] = awake[std::uniform_int_distribution<std::size_t>(0, awake.size() - 1)(gen)];
    return std::uniform_real_distribution<double>(a, std::nextafter(b, a))(gen);
  };
  std::size_t bad = 0;
  for (std::size_t i = 0; i < pairs; ++i) {
    double a = pick(), b;
    // half the pairs are close together, where a segment boundary is most likely to bite
    if (i % 2 == 0) {
      b = pick();
    } else {
      b = a + std::uniform_real_distribution<double>(0.0, 2.0 / kFh)(gen);
      bool inside = false;
      for (const auto& [lo, hi] : awake) inside = inside || (b >= lo && b < hi);
      if (!inside) b = a;
    }
    if (b < a) std::swap(a, b);
    if (node.get_time(SimTime(a)) > node.get_time(SimTime(b))) ++bad;
  }
  return bad;
}

ScenarioConfig replay_scenario() {
  ScenarioConfig c = default_scenario();
  c.horizon = 200.0;
  c.mc.events = 20000;
  c.mc.window = 50.0;
  c.intervals.repetitions = 5000;
  c.intervals.warmup = 30.0;
  c.settle.duration = 40.0;
  c.duty.cycles = 3;
  return c;
}

void ac10(Verdict& v) {
  const std::size_t bad = monotonicity_violations(1000000);
  v.require(bad == 0, "get_time monotone over 1e6 pairs across 10 sleeps: " + std::to_string(bad) + " violations");

  const auto cfg = replay_scenario();
  std::string differs;
  for (const auto& name : command_names()) {
    const auto a = run_command(name, cfg), b = run_command(name, cfg);
    if (a.files != b.files || a.summary != b.summary) differs += " " + name;
  }
  v.require(differs.empty(), "byte-identical replay of " + std::to_string(command_names().size()) + " commands" +
                                 (differs.empty() ? "" : " (differs:" + differs + ")"));

  const auto c = discretize(reference_design());
  std::mt19937_64 gen(8);
  std::normal_distribution<double> n(0.0, 1.0);
  const std::size_t N = 2000;
  std::vector<double> d1(N), d2(N), mix(N);
  for (std::size_t i = 0; i < N; ++i) {
    d1[i] = n(gen);
    d2[i] = n(gen);
    mix[i] = 3.0 * d1[i] - 0.5 * d2[i];
  }
  const auto u1 = closed_loop_sim(c, d1, N), u2 = closed_loop_sim(c, d2, N), um = closed_loop_sim(c, mix, N);
  double dev = 0.0;
  for (std::size_t i = 0; i < N; ++i) dev = std::max(dev, std::abs(um[i] - (3.0 * u1[i] - 0.5 * u2[i])));
  v.require(dev <= 1e-9, "closed loop superposition, max deviation " + sci(dev, 3));
  const bool pole = c.transfer().den.at(Rational(1)) == Rational(0) && c.transfer().num.at(Rational(1)) != Rational(0);
  v.require(pole && c.has_integral_action(), "controller has a pole at z = 1");
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
      if (only < 1 || only > 10) {
        std::cerr << "acceptance: --only takes 1..10\n";
        return 2;
      }
    } else {
      std::cerr << "usage: acceptance [--only N]\n";
      return 2;
    }
  }
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
      {"Monte Carlo jitter propagation", ac1}, {"race condition", ac2},
      {"controller coefficients", ac3},        {"settling", ac4},
      {"sync-period formula", ac5},            {"resource ledger", ac6},
      {"duty cycle", ac7},                     {"jitter attenuation shape", ac8},
      {"oracle equivalence", ac9},             {"property suite", ac10},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i + 1) != only) continue;
    Verdict v;
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    std::cout << (v.pass ? "PASS" : "FAIL") << " AC" << i + 1 << " " << criteria[i].first << ": " << v.detail.str()
              << std::endl;
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
