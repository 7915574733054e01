#include "vht/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "vht/complete_vht.hpp"
#include "vht/csv.hpp"
#include "vht/naive_vht.hpp"

namespace vht {

namespace {

constexpr std::uint64_t kMcEntity = 0xE7E7;
constexpr std::uint64_t kIntervalEntity = 0x1A7E0;

std::string ns(double seconds) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f ns", seconds * 1e9);
  return buf;
}

std::string num(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

void require_fits(double needed, const ScenarioConfig& cfg, const std::string& what) {
  if (needed > cfg.horizon) {
    throw ConfigError(what + " needs " + num(needed) + " s but [scenario] horizon is " +
                      num(cfg.horizon) + " s");
  }
}

}  // namespace

bool CommandResult::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckLine& c) { return c.pass; });
}

// ---- Monte Carlo ----

McResult run_mc(const ScenarioConfig& cfg) {
  require_fits(cfg.mc.window + 1e-3, cfg, "[mc] window");
  const Oscillator fast(cfg.fast, cfg.seed, cfg.horizon);
  const Oscillator slow(cfg.slow, cfg.seed, cfg.horizon);
  OriginalVht vht(fast, slow, cfg.latency, cfg.seed);
  vht.start(SimTime(0.0));
  const CounterRng rng(cfg.seed);
  std::vector<SimTime> events;
  events.reserve(cfg.mc.events);
  for (std::uint64_t i = 0; i < cfg.mc.events; ++i) {
    events.emplace_back(cfg.mc.window * rng.uniform({make_stream(kMcEntity, RngPurpose::event_times), i}));
  }
  McResult r;
  r.census = race_census(vht, events, &r.stamps);
  return r;
}

std::string mc_csv(const McResult& r) {
  CsvWriter w{"t_event", "vht_ticks", "truth_ticks", "error_seconds", "race_flag", "l0", "h0", "h1"};
  for (const auto& s : r.stamps) {
    w.cell(s.t_event.seconds()).cell(s.vht).cell(s.truth_ticks).cell(s.error_s).cell(s.race ? 1 : 0);
    w.cell(s.readings.l0).cell(s.readings.h0).cell(s.readings.h1);
    w.end_row();
  }
  return w.str();
}

double race_window_prediction(const ScenarioConfig& cfg) {
  return cfg.latency.fixed * static_cast<double>(cfg.slow.f_nom);
}

// ---- interval jitter ----

double fast_tick_floor(const ScenarioConfig& cfg) {
  return std::sqrt(1.0 / 6.0) / static_cast<double>(cfg.fast.f_nom);
}

std::vector<IntervalRow> run_interval_jitter(const ScenarioConfig& cfg) {
  const auto& ic = cfg.intervals;
  const double max_delta = *std::max_element(ic.deltas.begin(), ic.deltas.end());
  const double run_end = cfg.horizon - 1.0;
  const double lo = ic.warmup;
  if (!(lo + max_delta + 1.0 < run_end)) {
    throw ConfigError("[intervals] interval of " + num(max_delta) + " s after a " + num(lo) +
                      " s warmup does not fit in the horizon");
  }
  const Oscillator fast(cfg.fast, cfg.seed, cfg.horizon);
  const Oscillator slow(cfg.slow, cfg.seed, cfg.horizon);
  const double f_h = static_cast<double>(cfg.fast.f_nom);
  const double f_l = static_cast<double>(cfg.slow.f_nom);
  auto wants = [&](std::string_view c) {
    return std::find(ic.clocks.begin(), ic.clocks.end(), c) != ic.clocks.end();
  };

  EventQueue queue;
  std::optional<CompleteVhtNode> node;
  if (wants("complete-vht")) {
    node.emplace(fast, slow, queue, cfg.node);
    node->power_up();
    queue.run_until(SimTime(run_end));
  }
  std::optional<NaiveVht> naive;
  if (wants("naive-vht")) {
    naive.emplace(fast, slow, cfg.node.n_avg);
    naive->power_up(SimTime(0.0));
  }
  std::optional<OriginalVht> original;
  if (wants("original-vht")) {
    original.emplace(fast, slow, cfg.latency, cfg.seed);
    original->start(SimTime(0.0));
  }

  const CounterRng rng(cfg.seed);
  std::vector<IntervalRow> rows;
  for (std::size_t di = 0; di < ic.deltas.size(); ++di) {
    const double delta = ic.deltas[di];
    const double hi = run_end - delta - 0.5;
    const std::int64_t n_l = std::llround(delta * f_l);
    std::vector<double> starts(ic.repetitions);
    for (std::uint64_t i = 0; i < ic.repetitions; ++i) {
      starts[i] = lo + (hi - lo) * rng.uniform({make_stream(kIntervalEntity + di, RngPurpose::interval_starts), i});
    }
    for (const auto& clock : ic.clocks) {
      std::vector<double> err;
      err.reserve(starts.size());
      for (std::uint64_t i = 0; i < starts.size(); ++i) {
        const SimTime t0(starts[i]);
        if (clock == "slow") {
          const std::uint64_t m = slow.count_edges(t0) + 1;
          err.push_back((slow.edge_time(m + static_cast<std::uint64_t>(n_l)) - slow.edge_time(m)) -
                        static_cast<double>(n_l) / f_l);
        } else if (clock == "fast") {
          const auto a = fast.count_edges(t0);
          const auto b = fast.count_edges(t0 + delta);
          err.push_back(static_cast<double>(b - a) / f_h - delta);
        } else if (clock == "naive-vht") {
          err.push_back(static_cast<double>(naive->get_time(t0 + delta) - naive->get_time(t0)) / f_h - delta);
        } else if (clock == "complete-vht") {
          err.push_back(static_cast<double>(node->get_time(t0 + delta) - node->get_time(t0)) / f_h - delta);
        } else {
          const std::uint64_t idx = 2 * (di * ic.repetitions + i);
          const auto a = original->timestamp_event(t0, idx);
          const auto b = original->timestamp_event(t0 + delta, idx + 1);
          if (a.race || b.race) continue;
          err.push_back(static_cast<double>(b.vht - a.vht) / f_h - delta);
        }
      }
      rows.push_back({delta, clock, summarize(err)});
    }
  }
  return rows;
}

std::string interval_csv(const std::vector<IntervalRow>& rows) {
  CsvWriter w{"delta_s", "clock", "std_s", "mean_s", "n"};
  for (const auto& r : rows) {
    w.cell(r.delta).cell(r.clock).cell(r.error.std).cell(r.error.mean);
    w.cell(static_cast<std::uint64_t>(r.error.count));
    w.end_row();
  }
  return w.str();
}

const IntervalRow& find_interval(const std::vector<IntervalRow>& rows, std::string_view clock,
                                 double delta) {
  for (const auto& r : rows) {
    if (r.clock == clock && r.delta == delta) return r;
  }
  throw ContractViolation("no interval row for " + std::string(clock) + " at " + num(delta) + " s");
}

// ---- settling ----

SettleResult run_settle(const ScenarioConfig& cfg) {
  SettleResult r;
  const double T = to_double(cfg.node.design.T_hl);
  r.model = rate_settling(discretize(cfg.node.design), T, cfg.settle.band, cfg.settle.steps);
  r.model_settling_1pct = settling_time(r.model.residual, 1e-2, T);

  const double horizon = cfg.settle.duration + 2.0;
  check_horizon(horizon);
  OscillatorSpec fs = cfg.fast;
  OscillatorSpec ss = cfg.slow;
  fs.skew = SkewProfile::constant(-cfg.settle.relative_skew_ppm);
  ss.skew = SkewProfile::constant(0.0);
  const Oscillator fast(fs, cfg.seed, horizon);
  const Oscillator slow(ss, cfg.seed, horizon);
  EventQueue q;
  CompleteVhtNode node(fast, slow, q, cfg.node);
  node.set_update_hook([&r](const UpdateRecord& u) { r.node_updates.push_back(u); });
  node.power_up();
  q.run_until(SimTime(cfg.settle.duration));
  r.node_trace = node.trace();
  r.node_gamma_expected = 1.0 / (1.0 - cfg.settle.relative_skew_ppm * 1e-6) - 1.0;

  std::vector<double> resid;
  for (const auto& u : r.node_updates) {
    resid.push_back((u.gamma - r.node_gamma_expected) / r.node_gamma_expected);
    if (u.t_isr.seconds() <= cfg.settle.probe_time) r.node_residual_at_probe = resid.back();
  }
  std::size_t last_out = resid.size();
  for (std::size_t k = resid.size(); k-- > 0;) {
    if (!(std::abs(resid[k]) < cfg.settle.band)) {
      last_out = k;
      break;
    }
  }
  if (last_out == resid.size()) r.node_settling = 0.0;
  else if (last_out + 1 >= resid.size()) r.node_settling = std::numeric_limits<double>::infinity();
  else r.node_settling = r.node_updates[last_out + 1].t_isr.seconds();
  return r;
}

// ---- duty cycle ----

double round_sig3(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return std::strtod(buf, nullptr);
}

double average_current_uA(const DutyConfig& d, double period) {
  if (d.active > period) throw ConfigError("[duty] active time exceeds the period");
  return (d.current_deep_sleep_uA * (period - d.active) +
          d.current_active_uA * (d.active - d.radio_time) + d.current_radio_uA * d.radio_time) /
         period;
}

std::vector<DutyRow> run_duty(const ScenarioConfig& cfg, bool simulate) {
  std::vector<DutyRow> rows;
  for (double period : cfg.duty.periods) {
    DutyRow row;
    row.period = period;
    row.active = cfg.duty.active;
    row.deep_sleep_fraction = 1.0 - cfg.duty.active / period;
    row.avg_current_uA = average_current_uA(cfg.duty, period);
    if (simulate) {
      // cycle boundaries on the VHT timeline, first one after settling
      const double first = std::ceil((cfg.node.settle_hold + 1.0) / period) * period;
      const std::uint64_t cycles = std::max<std::uint64_t>(cfg.duty.cycles, 1);
      const double t_end = first + static_cast<double>(cycles) * period + 1.0;
      const double horizon = t_end + 2.0 * period + 2.0;
      check_horizon(horizon);
      const Oscillator fast(cfg.fast, cfg.seed, horizon);
      const Oscillator slow(cfg.slow, cfg.seed, horizon);
      NodeConfig nc = cfg.node;
      nc.forced_active = cfg.duty.active;
      EventQueue q;
      CompleteVhtNode node(fast, slow, q, nc);
      const double f_h = static_cast<double>(cfg.fast.f_nom);
      node.set_update_hook([&](const UpdateRecord&) {
        if (node.sleep_refusal()) return;
        q.schedule(q.now(), [&] {
          if (node.sleep_refusal()) return;
          const double now_vht = static_cast<double>(node.get_time(q.now())) / f_h;
          const double k = std::max(0.0, std::floor((now_vht - first) / period) + 1.0);
          node.enter_deep_sleep(std::llround((first + k * period) * f_h));
        });
      });
      node.power_up();
      q.run_until(SimTime(t_end));
      std::vector<SimTime> wakes;
      NodeMode prev = NodeMode::powered_off;
      for (const auto& [t, m] : node.transitions()) {
        if (prev == NodeMode::deep_sleep && m == NodeMode::active) wakes.push_back(t);
        prev = m;
      }
      if (wakes.size() < cycles + 1) throw ContractViolation("duty simulation recorded too few cycles");
      const auto res = node.residency(wakes.front(), wakes[cycles]);
      row.sim_deep_sleep_fraction = res.fraction(NodeMode::deep_sleep);
      row.sim_active_per_cycle = res.seconds.count(NodeMode::active) != 0
                                     ? res.seconds.at(NodeMode::active) / static_cast<double>(cycles)
                                     : 0.0;
    }
    rows.push_back(row);
  }
  return rows;
}

// ---- commands ----

CommandResult cmd_mc_jitter(const ScenarioConfig& cfg) {
  const McResult r = run_mc(cfg);
  CommandResult out;
  out.files.emplace_back("mc_jitter.csv", mc_csv(r));
  const auto& c = r.census;
  out.summary.push_back("events " + std::to_string(c.events));
  out.summary.push_back("races " + std::to_string(c.races) + " (" + num(100.0 * c.race_fraction()) + " %)");
  out.summary.push_back("non-race error mean " + ns(c.non_race.mean) + ", std " + ns(c.non_race.std));
  const double target = 60.4e-9;
  const double tol = 0.02 * target;
  out.checks.push_back({"mc-jitter non-race std", std::abs(c.non_race.std - target) <= tol,
                        ns(c.non_race.std) + " vs 60.400 ns +-2%"});
  return out;
}

CommandResult cmd_race_census(const ScenarioConfig& cfg) {
  const McResult r = run_mc(cfg);
  const auto& c = r.census;
  const double f_h = static_cast<double>(cfg.fast.f_nom);
  const double slow_period = 1.0 / static_cast<double>(cfg.slow.f_nom);
  CommandResult out;
  CsvWriter w{"index", "t_event", "error_s"};
  double worst = 0.0;
  for (std::size_t i = 0; i < r.stamps.size(); ++i) {
    const auto& s = r.stamps[i];
    if (!s.race) continue;
    w.cell(static_cast<std::uint64_t>(i)).cell(s.t_event.seconds()).cell(s.error_s);
    w.end_row();
    worst = std::max(worst, std::abs(std::abs(s.error_s) - slow_period) * f_h);
  }
  out.files.emplace_back("race_census.csv", w.str());
  const double predicted = race_window_prediction(cfg);
  out.summary.push_back("races " + std::to_string(c.races) + " of " + std::to_string(c.events));
  out.summary.push_back("race fraction " + num(100.0 * c.race_fraction()) + " %, window prediction " +
                        num(100.0 * predicted) + " %");
  if (!c.race_errors_s.empty()) {
    const auto m = summarize(c.race_errors_s);
    out.summary.push_back("race errors from " + num(m.min * 1e6) + " us to " + num(m.max * 1e6) + " us");
  }
  out.checks.push_back({"race fraction", std::abs(c.race_fraction() - predicted) <= 0.01,
                        num(100.0 * c.race_fraction()) + " % vs " + num(100.0 * predicted) + " % +-1 pp"});
  out.checks.push_back({"race magnitude", c.races > 0 && worst <= 1.0,
                        c.races == 0 ? std::string("no races observed")
                                     : "worst deviation from " + num(slow_period * 1e6) + " us is " +
                                           num(worst) + " fast ticks (limit 1)"});
  return out;
}

CommandResult cmd_interval_jitter(const ScenarioConfig& cfg) {
  const auto rows = run_interval_jitter(cfg);
  CommandResult out;
  out.files.emplace_back("interval_jitter.csv", interval_csv(rows));
  for (const auto& r : rows) out.summary.push_back(r.clock + " delta " + num(r.delta) + " s: std " + ns(r.error.std));

  auto has = [&](std::string_view clock) {
    return std::find(cfg.intervals.clocks.begin(), cfg.intervals.clocks.end(), clock) !=
           cfg.intervals.clocks.end();
  };
  if (has("complete-vht")) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, longest = 0.0, longest_std = 0.0;
    for (const auto& r : rows) {
      if (r.clock != "complete-vht") continue;
      if (r.delta <= 0.1) {
        lo = std::min(lo, r.error.std);
        hi = std::max(hi, r.error.std);
      }
      if (r.delta > longest) {
        longest = r.delta;
        longest_std = r.error.std;
      }
    }
    if (hi > 0.0) {
      out.checks.push_back({"complete-vht short-interval std", hi <= 15e-9,
                            "max " + ns(hi) + " for delta <= 100 ms (limit 15 ns)"});
      out.checks.push_back({"complete-vht flat up to 100 ms", hi <= 1.5 * lo,
                            "max/min " + num(hi / lo) + " (limit 1.5)"});
      if (longest > 0.1) {
        out.checks.push_back({"complete-vht grows at long intervals", longest_std > hi,
                              ns(longest_std) + " at " + num(longest) + " s vs " + ns(hi)});
      }
    }
  }
  if (has("original-vht") && has("slow")) {
    bool ok = true;
    std::string worst;
    for (double d : cfg.intervals.deltas) {
      const double o = find_interval(rows, "original-vht", d).error.std;
      const double s = find_interval(rows, "slow", d).error.std;
      if (!(o >= s)) {
        ok = false;
        worst += " " + num(d) + " s";
      }
    }
    out.checks.push_back({"original-vht never below slow clock", ok,
                          ok ? std::string("holds at every delta") : "violated at" + worst});
  }
  return out;
}

CommandResult cmd_settle(const ScenarioConfig& cfg) {
  const SettleResult r = run_settle(cfg);
  const double T = to_double(cfg.node.design.T_hl);
  CommandResult out;
  {
    CsvWriter w{"k", "t", "residual"};
    for (std::size_t k = 0; k < r.model.residual.size(); ++k) {
      w.cell(static_cast<std::uint64_t>(k)).cell(static_cast<double>(k) * T).cell(r.model.residual[k]);
      w.end_row();
    }
    out.files.emplace_back("settle_model.csv", w.str());
  }
  {
    CsvWriter w{"t", "mode", "e_hl", "u_hl", "gamma_ppm", "offset_ticks"};
    for (const auto& t : r.node_trace) {
      w.cell(t.t).cell(to_string(t.mode)).cell(t.e_hl).cell(t.u_hl).cell(t.gamma_ppm).cell(t.offset_ticks);
      w.end_row();
    }
    out.files.emplace_back("settle_trace.csv", w.str());
  }
  out.summary.push_back("model settling to " + num(100.0 * cfg.settle.band) + " % residual rate error: " +
                        num(r.model.settling_s) + " s");
  out.summary.push_back("model settling to 1 % residual rate error: " + num(r.model_settling_1pct) + " s");
  out.summary.push_back("node settling to " + num(100.0 * cfg.settle.band) + " %: " + num(r.node_settling) + " s");
  out.summary.push_back("node residual at " + num(cfg.settle.probe_time) + " s: " +
                        num(100.0 * r.node_residual_at_probe) + " % (" +
                        num(r.node_residual_at_probe * r.node_gamma_expected * 1e6) + " ppm)");
  out.checks.push_back({"settling time", std::abs(r.model.settling_s - cfg.settle.target) <= cfg.settle.tolerance,
                        num(r.model.settling_s) + " s vs " + num(cfg.settle.target) + " +- " +
                            num(cfg.settle.tolerance) + " s"});
  return out;
}

CommandResult cmd_controller_dse(const ScenarioConfig& cfg) {
  const DseGrid grid{cfg.dse.omega_c, cfg.dse.alpha, cfg.dse.beta, cfg.node.design.T_hl};
  const auto rows = explore_design_space(grid, cfg.dse.sort);
  CommandResult out;
  out.files.emplace_back("dse.csv", dse_to_csv(rows));
  out.summary.push_back("designs explored " + std::to_string(rows.size()));
  const auto ref = std::find_if(rows.begin(), rows.end(), [](const DseRow& r) { return r.reference; });
  const std::size_t expected = grid.omega_c.size() * grid.alpha.size() * grid.beta.size();
  out.checks.push_back({"dse grid size", rows.size() == expected,
                        std::to_string(rows.size()) + " rows for " + std::to_string(expected) + " points"});
  if (ref == rows.end()) {
    out.checks.push_back({"dse reference design", false, "(5/4, 25/4, 16) not in the grid"});
    return out;
  }
  out.summary.push_back("reference design: settling " + num(ref->settling_s) + " s, phase margin " +
                        num(ref->phase_margin_deg) + " deg, |L(100 wc)| " + num(ref->hf_gain_at_100wc));
  out.checks.push_back({"dse reference phase margin",
                        ref->phase_margin_deg >= 77.0 && ref->phase_margin_deg <= 77.7,
                        num(ref->phase_margin_deg) + " deg in [77.0, 77.7]"});
  out.checks.push_back({"dse reference settling", std::abs(ref->settling_s - 14.0) <= 2.0,
                        num(ref->settling_s) + " s vs 14 +- 2 s"});
  return out;
}

ResourceLedger build_resource_ledger() {
  ResourceLedger ledger;
  OscillatorSpec fs;
  fs.id = 1;
  fs.f_nom = 48'000'000;
  OscillatorSpec ss;
  ss.id = 2;
  ss.f_nom = 32'768;
  const Oscillator fast(fs, 1, 1.0);
  const Oscillator slow(ss, 1, 1.0);

  OriginalVht vht(fast, slow, {}, 1, &ledger);
  vht.reserve_event_output(Purpose::os_set_event);
  vht.reserve_timestamp_input(Purpose::radio_get_hw_event_timestamp);
  vht.reserve_event_output(Purpose::radio_set_hw_event);
  vht.reserve_timestamp_input(Purpose::application_line);

  EventQueue q;
  CompleteVhtNode node(fast, slow, q, {}, &ledger);
  for (Purpose p : kAllPurposes) {
    if (p != Purpose::internal) node.configure(p);
  }
  return ledger;
}

CommandResult cmd_resources(const ScenarioConfig&) {
  const ResourceLedger ledger = build_resource_ledger();
  CommandResult out;
  out.files.emplace_back("resources.csv",
                         ledger.to_csv({Scheme::jitter_compensated_vht, Scheme::original_vht}));
  const std::map<Purpose, std::pair<int, int>> table{
      {Purpose::internal, {2, 1}},
      {Purpose::os_get_time, {0, 0}},
      {Purpose::os_set_event, {1, 2}},
      {Purpose::radio_get_hw_event_timestamp, {1, 2}},
      {Purpose::radio_set_hw_event, {1, 2}},
      {Purpose::application_line, {1, 2}},
  };
  const auto jc = ledger.count(Scheme::jitter_compensated_vht);
  const auto ov = ledger.count(Scheme::original_vht);
  bool rows_ok = true;
  for (const auto& [p, want] : table) {
    rows_ok = rows_ok && jc.per_purpose.at(p) == want.first && ov.per_purpose.at(p) == want.second;
  }
  out.summary.push_back("jcvht total " + std::to_string(jc.total) + ", vht total " + std::to_string(ov.total));
  out.checks.push_back({"resource totals", jc.total == 6 && ov.total == 9,
                        std::to_string(jc.total) + " vs 6 and " + std::to_string(ov.total) + " vs 9"});
  out.checks.push_back({"resource rows", rows_ok, rows_ok ? "every row matches" : "row mismatch"});
  return out;
}

CommandResult cmd_duty(const ScenarioConfig& cfg) {
  const auto rows = run_duty(cfg);
  CommandResult out;
  CsvWriter w{"period_s", "active_s", "deep_sleep_fraction", "sim_deep_sleep_fraction",
              "sim_active_per_cycle_s", "avg_current_uA"};
  for (const auto& r : rows) {
    w.cell(r.period).cell(r.active).cell(r.deep_sleep_fraction).cell(r.sim_deep_sleep_fraction);
    w.cell(r.sim_active_per_cycle).cell(r.avg_current_uA);
    w.end_row();
    out.summary.push_back("period " + num(r.period) + " s: deep sleep " + num(100.0 * r.deep_sleep_fraction) +
                          " % (simulated " + num(100.0 * r.sim_deep_sleep_fraction) + " %), average current " +
                          num(r.avg_current_uA) + " uA");
    const double a = round_sig3(100.0 * r.deep_sleep_fraction);
    const double s = round_sig3(100.0 * r.sim_deep_sleep_fraction);
    out.checks.push_back({"duty " + num(r.period) + " s simulated vs analytic", a == s,
                          num(s) + " % vs " + num(a) + " % (3 s.f.)"});
    for (const auto& [period, want] : {std::pair{10.0, 98.0}, std::pair{60.0, 99.7}}) {
      if (r.period == period && r.active == 0.2) {
        out.checks.push_back({"duty " + num(period) + " s deep-sleep fraction", a == want && s == want,
                              num(a) + " % analytic, " + num(s) + " % simulated vs " + num(want) + " %"});
      }
    }
  }
  out.files.emplace_back("duty.csv", w.str());
  return out;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"mc-jitter", "interval-jitter", "race-census", "settle",
                                              "controller-dse", "resources", "duty"};
  return names;
}

CommandResult run_command(std::string_view name, const ScenarioConfig& cfg) {
  if (name == "mc-jitter") return cmd_mc_jitter(cfg);
  if (name == "interval-jitter") return cmd_interval_jitter(cfg);
  if (name == "race-census") return cmd_race_census(cfg);
  if (name == "settle") return cmd_settle(cfg);
  if (name == "controller-dse") return cmd_controller_dse(cfg);
  if (name == "resources") return cmd_resources(cfg);
  if (name == "duty") return cmd_duty(cfg);
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

}  // namespace vht
