#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vht/complete_vht.hpp"
#include "vht/controller.hpp"
#include "vht/oscillator.hpp"
#include "vht/timer.hpp"

namespace vht {

/// Sectioned key = value text. '#' starts a comment; blank lines are ignored.
/// Every key must be consumed by a reader, so typos are reported instead of
/// silently ignored.
class ConfigFile {
 public:
  static ConfigFile parse(std::string_view text, const std::string& origin = "<config>");
  static ConfigFile load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const { return sections_.count(section) != 0; }

  std::optional<std::string> take(const std::string& section, const std::string& key);
  std::string get_string(const std::string& section, const std::string& key, std::string def);
  double get_double(const std::string& section, const std::string& key, double def);
  std::int64_t get_int(const std::string& section, const std::string& key, std::int64_t def);
  std::uint64_t get_u64(const std::string& section, const std::string& key, std::uint64_t def);
  Rational get_rational(const std::string& section, const std::string& key, Rational def);
  /// Comma-separated list.
  std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                  std::vector<double> def);
  std::vector<Rational> get_rationals(const std::string& section, const std::string& key,
                                      std::vector<Rational> def);
  std::vector<std::string> get_strings(const std::string& section, const std::string& key,
                                       std::vector<std::string> def);

  /// Throws ConfigError naming every key nobody consumed.
  void require_all_used() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
  };
  std::string where(const std::string& section, const std::string& key) const;

  std::string origin_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

struct McConfig {
  std::uint64_t events = 100000;
  double window = 100.0;  // events uniform over [0, window)
};

struct IntervalConfig {
  std::vector<double> deltas{1e-3, 1e-2, 1e-1, 1.0, 10.0};
  std::uint64_t repetitions = 100000;
  double warmup = 60.0;  // controller settling before any interval starts
  std::vector<std::string> clocks{"slow", "fast", "naive-vht", "complete-vht", "original-vht"};
};

struct SettleConfig {
  double band = 1e-3;
  std::uint64_t steps = 2000;
  double relative_skew_ppm = 30.0;  // fast slower than slow by this much in the node run
  double duration = 60.0;
  double probe_time = 14.0;
  double target = 14.0;
  double tolerance = 2.0;
};

struct DseConfig {
  std::vector<Rational> omega_c{Rational(1, 2), Rational(5, 4), Rational(2)};
  std::vector<Rational> alpha{Rational(3), Rational(25, 4), Rational(10)};
  std::vector<Rational> beta{Rational(4), Rational(16), Rational(32)};
  DseSort sort = DseSort::settling;
};

struct DutyConfig {
  double active = 0.2;  // s awake per cycle
  std::vector<double> periods{10.0, 60.0};
  std::uint64_t cycles = 12;  // node-simulated cycles per period
  double current_deep_sleep_uA = 0.0;
  double current_active_uA = 0.0;
  double current_radio_uA = 0.0;
  double radio_time = 0.0;  // s of the active time spent with the radio on
};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  double horizon = 1000.0;
  OscillatorSpec fast;
  OscillatorSpec slow;
  InterruptLatencyModel latency{2e-6, 0.0};
  NodeConfig node;
  McConfig mc;
  IntervalConfig intervals;
  SettleConfig settle;
  DseConfig dse;
  DutyConfig duty;

  void validate() const;
};

/// Default scenario: 48 MHz fast clock without jitter, 32768 Hz slow clock
/// with 60 ns edge jitter, zero skews, 2 us ISR latency.
ScenarioConfig default_scenario();

/// Builds a scenario from defaults overridden by the file. Unknown sections or
/// keys and invalid values raise ConfigError.
ScenarioConfig load_scenario(ConfigFile& file);
ScenarioConfig load_scenario_text(std::string_view text);
ScenarioConfig load_scenario_file(const std::string& path);

/// Every key load_scenario understands, as "section.key".
std::vector<std::string> known_keys();

}  // namespace vht
