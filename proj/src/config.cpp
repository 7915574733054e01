#include "vht/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace vht {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    auto t = trim(cur);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

double parse_double(const std::string& text, const std::string& where) {
  double v = 0.0;
  const char* b = text.data();
  const char* e = b + text.size();
  if (!text.empty() && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) throw ConfigError(where + ": not a number: '" + text + "'");
  return v;
}

std::int64_t parse_i64(const std::string& text, const std::string& where) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec == std::errc() && p == text.data() + text.size()) return v;
  // allow integral values written like 1e5
  const double d = parse_double(text, where);
  if (d != static_cast<double>(static_cast<std::int64_t>(d))) {
    throw ConfigError(where + ": expected an integer, got '" + text + "'");
  }
  return static_cast<std::int64_t>(d);
}

}  // namespace

ConfigFile ConfigFile::parse(std::string_view text, const std::string& origin) {
  ConfigFile f;
  f.origin_ = origin;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::string section;
  bool in_section = false;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const std::string at = origin + ":" + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(at + ": malformed section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(at + ": empty section name");
      f.sections_[section];
      in_section = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(at + ": expected key = value");
    if (!in_section) throw ConfigError(at + ": assignment outside any [section]");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError(at + ": empty key");
    auto& sec = f.sections_[section];
    if (sec.count(key) != 0) throw ConfigError(at + ": duplicate key [" + section + "] " + key);
    sec[key] = Entry{value, line_no, false};
  }
  return f;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) != 0;
}

std::string ConfigFile::where(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  int line = 0;
  if (s != sections_.end()) {
    auto k = s->second.find(key);
    if (k != s->second.end()) line = k->second.line;
  }
  return origin_ + ":" + std::to_string(line) + ": [" + section + "] " + key;
}

std::optional<std::string> ConfigFile::take(const std::string& section, const std::string& key) {
  auto s = sections_.find(section);
  if (s == sections_.end()) return std::nullopt;
  auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  k->second.used = true;
  return k->second.value;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   std::string def) {
  auto v = take(section, key);
  return v ? *v : def;
}

double ConfigFile::get_double(const std::string& section, const std::string& key, double def) {
  auto v = take(section, key);
  return v ? parse_double(*v, where(section, key)) : def;
}

std::int64_t ConfigFile::get_int(const std::string& section, const std::string& key,
                                 std::int64_t def) {
  auto v = take(section, key);
  return v ? parse_i64(*v, where(section, key)) : def;
}

std::uint64_t ConfigFile::get_u64(const std::string& section, const std::string& key,
                                  std::uint64_t def) {
  auto v = take(section, key);
  if (!v) return def;
  if (!v->empty() && v->front() == '-') throw ConfigError(where(section, key) + ": must be >= 0");
  std::uint64_t x = 0;
  auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), x);
  if (ec == std::errc() && p == v->data() + v->size()) return x;
  return static_cast<std::uint64_t>(parse_i64(*v, where(section, key)));
}

Rational ConfigFile::get_rational(const std::string& section, const std::string& key, Rational def) {
  auto v = take(section, key);
  if (!v) return def;
  try {
    return parse_rational(*v);
  } catch (const ConfigError& e) {
    throw ConfigError(where(section, key) + ": " + e.what());
  }
}

std::vector<double> ConfigFile::get_doubles(const std::string& section, const std::string& key,
                                            std::vector<double> def) {
  auto v = take(section, key);
  if (!v) return def;
  std::vector<double> out;
  for (const auto& item : split_list(*v)) out.push_back(parse_double(item, where(section, key)));
  return out;
}

std::vector<Rational> ConfigFile::get_rationals(const std::string& section, const std::string& key,
                                                std::vector<Rational> def) {
  auto v = take(section, key);
  if (!v) return def;
  std::vector<Rational> out;
  for (const auto& item : split_list(*v)) {
    try {
      out.push_back(parse_rational(item));
    } catch (const ConfigError& e) {
      throw ConfigError(where(section, key) + ": " + e.what());
    }
  }
  return out;
}

std::vector<std::string> ConfigFile::get_strings(const std::string& section, const std::string& key,
                                                 std::vector<std::string> def) {
  auto v = take(section, key);
  return v ? split_list(*v) : def;
}

void ConfigFile::require_all_used() const {
  std::string unknown;
  for (const auto& [name, sec] : sections_) {
    if (sec.empty()) unknown += "\n  unknown or empty section [" + name + "]";
    for (const auto& [key, e] : sec) {
      if (!e.used) {
        unknown += "\n  " + origin_ + ":" + std::to_string(e.line) + ": unknown key [" + name + "] " + key;
      }
    }
  }
  if (!unknown.empty()) throw ConfigError("unrecognized configuration:" + unknown);
}

ScenarioConfig default_scenario() {
  ScenarioConfig c;
  c.fast.id = 1;
  c.fast.f_nom = 48'000'000;
  c.slow.id = 2;
  c.slow.f_nom = 32'768;
  c.slow.jitter_std = 60e-9;
  return c;
}

namespace {

SkewProfile read_skew(ConfigFile& f, const std::string& s) {
  const std::string kind = f.get_string(s, "skew_kind", "constant");
  const double base = f.get_double(s, "skew_ppm", 0.0);
  if (kind == "constant") return SkewProfile::constant(base);
  if (kind == "ramp") return SkewProfile::ramp(base, f.get_double(s, "skew_slope", 0.0));
  if (kind == "sinusoid") {
    return SkewProfile::sinusoid(base, f.get_double(s, "skew_amplitude", 0.0),
                                 f.get_double(s, "skew_period", 1.0));
  }
  if (kind == "piecewise") {
    // skew_points = t:ppm, t:ppm, ...
    std::vector<SkewBreakpoint> pts;
    for (const auto& item : f.get_strings(s, "skew_points", {})) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw ConfigError("[" + s + "] skew_points: expected t:ppm");
      pts.push_back({parse_double(trim(item.substr(0, colon)), s + ".skew_points"),
                     parse_double(trim(item.substr(colon + 1)), s + ".skew_points")});
    }
    return SkewProfile::piecewise_linear(std::move(pts));
  }
  throw ConfigError("[" + s + "] skew_kind: unknown profile '" + kind + "'");
}

void read_oscillator(ConfigFile& f, const std::string& s, OscillatorSpec& o) {
  o.f_nom = f.get_u64(s, "f_nom", o.f_nom);
  if (f.has(s, "skew_kind") || f.has(s, "skew_ppm") || f.has(s, "skew_points")) o.skew = read_skew(f, s);
  o.jitter_std = f.get_double(s, "jitter_std", o.jitter_std);
  o.wander_std = f.get_double(s, "wander_std", o.wander_std);
  o.wander_grid = f.get_double(s, "wander_grid", o.wander_grid);
}

DseSort parse_sort(const std::string& s) {
  if (s == "settling") return DseSort::settling;
  if (s == "phase_margin") return DseSort::phase_margin;
  if (s == "hf_gain") return DseSort::hf_gain;
  throw ConfigError("[dse] sort: expected settling, phase_margin or hf_gain, got '" + s + "'");
}

}  // namespace

ScenarioConfig load_scenario(ConfigFile& f) {
  ScenarioConfig c = default_scenario();
  c.seed = f.get_u64("scenario", "seed", c.seed);
  c.horizon = f.get_double("scenario", "horizon", c.horizon);

  read_oscillator(f, "fast", c.fast);
  read_oscillator(f, "slow", c.slow);

  c.latency.fixed = f.get_double("latency", "fixed", c.latency.fixed);
  c.latency.jitter_uniform_max = f.get_double("latency", "jitter_uniform_max", c.latency.jitter_uniform_max);

  auto& d = c.node.design;
  d.omega_c = f.get_rational("controller", "omega_c", d.omega_c);
  d.alpha = f.get_rational("controller", "alpha", d.alpha);
  d.beta = f.get_rational("controller", "beta", d.beta);
  d.T_hl = f.get_rational("controller", "T_hl", d.T_hl);

  c.node.n_avg = static_cast<int>(f.get_int("node", "n_avg", c.node.n_avg));
  c.node.settle_hold = f.get_double("node", "settle_hold", c.node.settle_hold);
  c.node.forced_active = f.get_double("node", "forced_active", c.node.forced_active);
  c.node.isr_latency.fixed = f.get_double("node", "isr_latency", c.node.isr_latency.fixed);
  c.node.isr_latency.jitter_uniform_max =
      f.get_double("node", "isr_latency_jitter", c.node.isr_latency.jitter_uniform_max);

  c.mc.events = f.get_u64("mc", "events", c.mc.events);
  c.mc.window = f.get_double("mc", "window", c.mc.window);

  c.intervals.deltas = f.get_doubles("intervals", "deltas", c.intervals.deltas);
  c.intervals.repetitions = f.get_u64("intervals", "repetitions", c.intervals.repetitions);
  c.intervals.warmup = f.get_double("intervals", "warmup", c.intervals.warmup);
  c.intervals.clocks = f.get_strings("intervals", "clocks", c.intervals.clocks);

  c.settle.band = f.get_double("settle", "band", c.settle.band);
  c.settle.steps = f.get_u64("settle", "steps", c.settle.steps);
  c.settle.relative_skew_ppm = f.get_double("settle", "relative_skew_ppm", c.settle.relative_skew_ppm);
  c.settle.duration = f.get_double("settle", "duration", c.settle.duration);
  c.settle.probe_time = f.get_double("settle", "probe_time", c.settle.probe_time);
  c.settle.target = f.get_double("settle", "target", c.settle.target);
  c.settle.tolerance = f.get_double("settle", "tolerance", c.settle.tolerance);

  c.dse.omega_c = f.get_rationals("dse", "omega_c", c.dse.omega_c);
  c.dse.alpha = f.get_rationals("dse", "alpha", c.dse.alpha);
  c.dse.beta = f.get_rationals("dse", "beta", c.dse.beta);
  c.dse.sort = parse_sort(f.get_string("dse", "sort", "settling"));

  c.duty.active = f.get_double("duty", "active", c.duty.active);
  c.duty.periods = f.get_doubles("duty", "periods", c.duty.periods);
  c.duty.cycles = f.get_u64("duty", "cycles", c.duty.cycles);
  c.duty.current_deep_sleep_uA = f.get_double("duty", "current_deep_sleep_uA", c.duty.current_deep_sleep_uA);
  c.duty.current_active_uA = f.get_double("duty", "current_active_uA", c.duty.current_active_uA);
  c.duty.current_radio_uA = f.get_double("duty", "current_radio_uA", c.duty.current_radio_uA);
  c.duty.radio_time = f.get_double("duty", "radio_time", c.duty.radio_time);

  f.require_all_used();
  c.validate();
  return c;
}

ScenarioConfig load_scenario_text(std::string_view text) {
  auto f = ConfigFile::parse(text);
  return load_scenario(f);
}

ScenarioConfig load_scenario_file(const std::string& path) {
  auto f = ConfigFile::load(path);
  return load_scenario(f);
}

void ScenarioConfig::validate() const {
  try {
    check_horizon(horizon);
  } catch (const ContractViolation& e) {
    throw ConfigError(std::string("[scenario] horizon: ") + e.what());
  }
  if (!(horizon > 0.0)) throw ConfigError("[scenario] horizon must be > 0");
  if (fast.f_nom <= slow.f_nom) throw ConfigError("[fast] f_nom must exceed [slow] f_nom");
  if (slow.f_nom == 0) throw ConfigError("[slow] f_nom must be > 0");
  for (const auto* o : {&fast, &slow}) {
    if (!(o->jitter_std >= 0.0)) throw ConfigError("jitter_std must be >= 0");
    if (!(o->wander_std >= 0.0)) throw ConfigError("wander_std must be >= 0");
    if (!(o->wander_grid > 0.0)) throw ConfigError("wander_grid must be > 0");
  }
  if (!(latency.fixed >= 0.0) || !(latency.jitter_uniform_max >= 0.0)) {
    throw ConfigError("[latency] values must be >= 0");
  }
  node.design.validate();
  if (node.n_avg < 1) throw ConfigError("[node] n_avg must be >= 1");
  if (!(node.settle_hold >= 0.0)) throw ConfigError("[node] settle_hold must be >= 0");
  if (!(mc.window > 0.0)) throw ConfigError("[mc] window must be > 0");
  if (intervals.deltas.empty()) throw ConfigError("[intervals] deltas must not be empty");
  for (double d : intervals.deltas) {
    if (!(d > 0.0)) throw ConfigError("[intervals] deltas must be > 0");
  }
  if (intervals.repetitions < 2) throw ConfigError("[intervals] repetitions must be >= 2");
  if (!(intervals.warmup >= 0.0)) throw ConfigError("[intervals] warmup must be >= 0");
  for (const auto& c : intervals.clocks) {
    if (c != "slow" && c != "fast" && c != "naive-vht" && c != "complete-vht" && c != "original-vht") {
      throw ConfigError("[intervals] clocks: unknown clock '" + c + "'");
    }
  }
  if (!(settle.band > 0.0 && settle.band < 1.0)) throw ConfigError("[settle] band must be in (0, 1)");
  if (settle.steps < 2) throw ConfigError("[settle] steps must be >= 2");
  if (dse.omega_c.empty() || dse.alpha.empty() || dse.beta.empty()) {
    throw ConfigError("[dse] grid must not be empty");
  }
  if (!(duty.active > 0.0)) throw ConfigError("[duty] active must be > 0");
  if (duty.periods.empty()) throw ConfigError("[duty] periods must not be empty");
  for (double p : duty.periods) {
    if (!(p >= duty.active)) throw ConfigError("[duty] active time exceeds a period");
  }
  if (!(duty.radio_time >= 0.0) || duty.radio_time > duty.active) {
    throw ConfigError("[duty] radio_time must be within the active time");
  }
  for (double i : {duty.current_deep_sleep_uA, duty.current_active_uA, duty.current_radio_uA}) {
    if (!(i >= 0.0)) throw ConfigError("[duty] currents must be >= 0");
  }
}

std::vector<std::string> known_keys() {
  return {
      "scenario.seed", "scenario.horizon",
      "fast.f_nom", "fast.skew_kind", "fast.skew_ppm", "fast.skew_slope", "fast.skew_amplitude",
      "fast.skew_period", "fast.skew_points", "fast.jitter_std", "fast.wander_std", "fast.wander_grid",
      "slow.f_nom", "slow.skew_kind", "slow.skew_ppm", "slow.skew_slope", "slow.skew_amplitude",
      "slow.skew_period", "slow.skew_points", "slow.jitter_std", "slow.wander_std", "slow.wander_grid",
      "latency.fixed", "latency.jitter_uniform_max",
      "controller.omega_c", "controller.alpha", "controller.beta", "controller.T_hl",
      "node.n_avg", "node.settle_hold", "node.forced_active", "node.isr_latency",
      "node.isr_latency_jitter",
      "mc.events", "mc.window",
      "intervals.deltas", "intervals.repetitions", "intervals.warmup", "intervals.clocks",
      "settle.band", "settle.steps", "settle.relative_skew_ppm", "settle.duration",
      "settle.probe_time", "settle.target", "settle.tolerance",
      "dse.omega_c", "dse.alpha", "dse.beta", "dse.sort",
      "duty.active", "duty.periods", "duty.cycles", "duty.current_deep_sleep_uA",
      "duty.current_active_uA", "duty.current_radio_uA", "duty.radio_time",
  };
}

}  // namespace vht
