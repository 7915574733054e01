#include <catch_amalgamated.hpp>

#include <algorithm>

#include "vht/config.hpp"
#include "vht/csv.hpp"
#include "vht/rational.hpp"

using namespace vht;

TEST_CASE("rational literals") {
  CHECK(parse_rational("5/4") == Rational(5, 4));
  CHECK(parse_rational("-3") == Rational(-3));
  CHECK(parse_rational("1.25") == Rational(5, 4));
  CHECK(parse_rational("2.5e-3") == Rational(1, 400));
  CHECK(parse_rational("0.2") == Rational(1, 5));
  for (const char* bad : {"", "1/0", "abc", "1.2.3", "1e40", "/3"}) {
    INFO(bad);
    CHECK_THROWS_AS(parse_rational(bad), ConfigError);
  }
  CHECK(to_string(Rational(-6, 4)) == "-3/2");
}

TEST_CASE("sectioned key = value parsing") {
  auto f = ConfigFile::parse("# comment\n[a]\nx = 1  # trailing\n\n  y=two words \n[b]\nz = 3\n");
  CHECK(f.has("a", "x"));
  CHECK(f.get_int("a", "x", 0) == 1);
  CHECK(f.get_string("a", "y", "") == "two words");
  CHECK(f.get_double("b", "z", 0) == 3.0);
  CHECK(f.get_double("b", "missing", 7.5) == 7.5);
  CHECK_NOTHROW(f.require_all_used());
}

TEST_CASE("malformed files are rejected with the line") {
  CHECK_THROWS_AS(ConfigFile::parse("x = 1\n"), ConfigError);
  CHECK_THROWS_AS(ConfigFile::parse("[a\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(ConfigFile::parse("[]\n"), ConfigError);
  CHECK_THROWS_AS(ConfigFile::parse("[a]\nnovalue\n"), ConfigError);
  CHECK_THROWS_AS(ConfigFile::parse("[a]\n = 3\n"), ConfigError);
  try {
    ConfigFile::parse("[a]\nx = 1\nx = 2\n", "dup.cfg");
    FAIL("duplicate accepted");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("dup.cfg:3") != std::string::npos);
  }
  CHECK_THROWS_AS(ConfigFile::load("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("typed getters validate values") {
  auto f = ConfigFile::parse("[a]\nn = 1.5\nu = -2\nd = x\nr = 1/0\nl = 1, 2, three\n");
  CHECK_THROWS_AS(f.get_int("a", "n", 0), ConfigError);
  CHECK_THROWS_AS(f.get_u64("a", "u", 0), ConfigError);
  CHECK_THROWS_AS(f.get_double("a", "d", 0), ConfigError);
  CHECK_THROWS_AS(f.get_rational("a", "r", Rational(0)), ConfigError);
  CHECK_THROWS_AS(f.get_doubles("a", "l", {}), ConfigError);
}

TEST_CASE("unknown keys and sections are errors") {
  CHECK_THROWS_AS(load_scenario_text("[slow]\njiter_std = 1e-9\n"), ConfigError);
  CHECK_THROWS_AS(load_scenario_text("[slwo]\njitter_std = 1e-9\n"), ConfigError);
  try {
    load_scenario_text("[mc]\nevents = 10\nevnets = 5\n");
    FAIL("typo accepted");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("evnets") != std::string::npos);
  }
}

TEST_CASE("defaults describe the reference scenario") {
  const auto c = load_scenario_text("");
  CHECK(c.fast.f_nom == 48000000);
  CHECK(c.slow.f_nom == 32768);
  CHECK(c.slow.jitter_std == 60e-9);
  CHECK(c.fast.jitter_std == 0.0);
  CHECK(c.latency.fixed == 2e-6);
  CHECK(c.node.design.omega_c == Rational(5, 4));
  CHECK(c.node.design.T_hl == Rational(1, 5));
  CHECK(c.node.n_avg == 8);
  CHECK(c.mc.events == 100000);
  CHECK(c.intervals.deltas == std::vector<double>{1e-3, 1e-2, 1e-1, 1.0, 10.0});
  CHECK(c.duty.periods == std::vector<double>{10.0, 60.0});
}

TEST_CASE("every documented key is accepted") {
  const auto keys = known_keys();
  CHECK(std::find(keys.begin(), keys.end(), "controller.T_hl") != keys.end());
  const auto c = load_scenario_text(R"(
[scenario]
seed = 9
horizon = 500
[fast]
f_nom = 24000000
skew_kind = piecewise
skew_points = 0:10, 100:-10
jitter_std = 1e-12
wander_std = 0.001
wander_grid = 0.5
[slow]
skew_kind = sinusoid
skew_ppm = 3
skew_amplitude = 1
skew_period = 60
[latency]
fixed = 1e-6
jitter_uniform_max = 5e-7
[controller]
omega_c = 1
alpha = 5
beta = 10
T_hl = 1/4
[node]
n_avg = 4
settle_hold = 20
forced_active = 0.5
isr_latency = 3e-6
isr_latency_jitter = 0
[intervals]
clocks = slow, complete-vht
repetitions = 10
[dse]
sort = hf_gain
[duty]
current_deep_sleep_uA = 1.5
current_active_uA = 3000
current_radio_uA = 20000
radio_time = 0.01
)");
  CHECK(c.seed == 9);
  CHECK(c.fast.f_nom == 24000000);
  CHECK(c.fast.skew.kind() == SkewKind::piecewise_linear);
  CHECK(c.fast.skew.ppm_at(50.0) == Catch::Approx(0.0));
  CHECK(c.slow.skew.kind() == SkewKind::sinusoid);
  CHECK(c.node.design.T_hl == Rational(1, 4));
  CHECK(c.node.isr_latency.fixed == 3e-6);
  CHECK(c.node.forced_active == 0.5);
  CHECK(c.intervals.clocks == std::vector<std::string>{"slow", "complete-vht"});
  CHECK(c.dse.sort == DseSort::hf_gain);
}

TEST_CASE("invalid values are rejected") {
  for (const char* text : {
           "[scenario]\nhorizon = -1\n",
           "[scenario]\nhorizon = 1e9\n",
           "[fast]\nf_nom = 1000\n",
           "[slow]\njitter_std = -1\n",
           "[fast]\nskew_kind = triangle\n",
           "[fast]\nskew_kind = piecewise\nskew_points = 0-10\n",
           "[controller]\nalpha = 1\n",
           "[node]\nn_avg = 0\n",
           "[intervals]\nclocks = sundial\n",
           "[intervals]\ndeltas = 0\n",
           "[settle]\nband = 2\n",
           "[dse]\nsort = fastest\n",
           "[dse]\nbeta =\n",
           "[duty]\nactive = 20\n",
           "[duty]\nradio_time = 1\n",
       }) {
    INFO(text);
    CHECK_THROWS_AS(load_scenario_text(text), ConfigError);
  }
}

TEST_CASE("shipped scenario files load") {
  for (const char* name : {"mc", "race", "interval", "settle", "dse", "resources", "duty"}) {
    INFO(name);
    CHECK_NOTHROW(load_scenario_file(std::string(VHT_CONFIG_DIR) + "/" + name + ".cfg"));
  }
}

TEST_CASE("CSV writer") {
  CsvWriter w{"a", "b"};
  w.cell(1).cell(0.1);
  w.end_row();
  w.cell("x").cell(std::uint64_t{7});
  w.end_row();
  CHECK(w.str() == "a,b\n1,0.10000000000000001\nx,7\n");
  CHECK(w.rows() == 2);
  w.cell(1);
  CHECK_THROWS_AS(w.end_row(), ContractViolation);
  CHECK(format_real(0.5) == "0.5");
}
