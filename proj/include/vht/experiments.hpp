#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vht/config.hpp"
#include "vht/original_vht.hpp"
#include "vht/stats.hpp"

namespace vht {

/// One pass/fail verdict against a pinned threshold.
struct CheckLine {
  std::string name;
  bool pass = false;
  std::string detail;

  std::string str() const { return std::string(pass ? "PASS " : "FAIL ") + name + ": " + detail; }
};

struct CommandResult {
  std::vector<std::pair<std::string, std::string>> files;  // name, contents
  std::vector<std::string> summary;
  std::vector<CheckLine> checks;

  bool all_pass() const;
};

// ---- Monte Carlo timestamping (original VHT) ----

struct McResult {
  std::vector<EventTimestamp> stamps;
  RaceCensus census;
};

/// cfg.mc.events events uniform on [0, cfg.mc.window), timestamped by the
/// original VHT with cfg.latency.
McResult run_mc(const ScenarioConfig& cfg);
std::string mc_csv(const McResult& r);

/// Share of events expected to race when the ISR latency is a fraction of the
/// slow period: latency * f_l.
double race_window_prediction(const ScenarioConfig& cfg);

// ---- interval jitter ----

struct IntervalRow {
  double delta = 0.0;
  std::string clock;
  SampleStats error;  // measured length minus nominal, seconds
};

/// Each clock is read at two reference instants Delta apart and the reading
/// difference compared with Delta: counter reads for the fast clock, get_time
/// for the two jitter-compensated VHTs, event timestamps for the original VHT
/// (intervals with a racing end are dropped). The slow clock is measured edge
/// to edge, since reading it would only show its own 30 us quantization.
std::vector<IntervalRow> run_interval_jitter(const ScenarioConfig& cfg);
std::string interval_csv(const std::vector<IntervalRow>& rows);
const IntervalRow& find_interval(const std::vector<IntervalRow>& rows, std::string_view clock,
                                 double delta);

/// Interval-std quantization floor of a clock read with one-fast-tick
/// resolution at both ends: (1 / f_h) * sqrt(1 / 6).
double fast_tick_floor(const ScenarioConfig& cfg);

// ---- settling ----

struct SettleResult {
  SettlingResult model;           // closed-loop model, cfg.settle.band
  double model_settling_1pct = 0.0;
  std::vector<TraceRow> node_trace;
  std::vector<UpdateRecord> node_updates;
  double node_gamma_expected = 0.0;
  double node_residual_at_probe = 0.0;  // (gamma - expected) / expected
  double node_settling = 0.0;           // node rate residual held below band
};

SettleResult run_settle(const ScenarioConfig& cfg);

// ---- duty cycle ----

struct DutyRow {
  double period = 0.0;
  double active = 0.0;
  double deep_sleep_fraction = 0.0;      // 1 - active / period
  double sim_deep_sleep_fraction = 0.0;  // node state machine residency
  double sim_active_per_cycle = 0.0;
  double avg_current_uA = 0.0;
};

/// Sum of I_i f_i over deep sleep, CPU-active and radio-active time.
double average_current_uA(const DutyConfig& d, double period);
/// Analytic rows always; the simulated columns only when simulate is set.
std::vector<DutyRow> run_duty(const ScenarioConfig& cfg, bool simulate = true);
/// x rounded to three significant figures.
double round_sig3(double x);

// ---- commands ----

CommandResult cmd_mc_jitter(const ScenarioConfig& cfg);
CommandResult cmd_interval_jitter(const ScenarioConfig& cfg);
CommandResult cmd_race_census(const ScenarioConfig& cfg);
CommandResult cmd_settle(const ScenarioConfig& cfg);
CommandResult cmd_controller_dse(const ScenarioConfig& cfg);
CommandResult cmd_resources(const ScenarioConfig& cfg);
CommandResult cmd_duty(const ScenarioConfig& cfg);

const std::vector<std::string>& command_names();
/// Throws ConfigError for an unknown command.
CommandResult run_command(std::string_view name, const ScenarioConfig& cfg);

/// Ledger with all four timekeeper operations configured on both schemes.
ResourceLedger build_resource_ledger();

}  // namespace vht
