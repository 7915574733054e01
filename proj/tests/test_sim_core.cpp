#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "vht/event_queue.hpp"
#include "vht/oscillator.hpp"
#include "vht/rng.hpp"
#include "vht/stats.hpp"

using namespace vht;
using Catch::Approx;

TEST_CASE("SimTime rejects negative and non-finite values") {
  CHECK_THROWS_AS(SimTime(-1e-9), ContractViolation);
  CHECK_THROWS_AS(SimTime(std::nan("")), ContractViolation);
  CHECK_THROWS_AS(SimTime(INFINITY), ContractViolation);
  CHECK((SimTime(2.0) - SimTime(0.5)) == 1.5);
  CHECK(SimTime(1.0) < SimTime(1.0) + 1e-9);
}

TEST_CASE("horizon bound") {
  CHECK_NOTHROW(check_horizon(kMaxHorizon));
  CHECK_THROWS_AS(check_horizon(kMaxHorizon * 1.01), ConfigError);
  CHECK_THROWS_AS(check_horizon(0.0), ConfigError);
}

// ---- RNG ----

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("counter RNG is a pure function of seed, stream and index") {
  const CounterRng a(7), b(7), c(8);
  const RngKey k{make_stream(3, RngPurpose::test), 12345};
  CHECK(a.bits(k) == b.bits(k));
  CHECK(a.bits(k) != c.bits(k));
  CHECK(a.bits(k) != a.bits({k.stream_id, k.index + 1}));
  CHECK(a.bits(k) != a.bits({make_stream(4, RngPurpose::test), k.index}));
  // order of evaluation does not matter
  const double late = a.uniform({k.stream_id, 999});
  for (std::uint64_t i = 0; i < 999; ++i) (void)a.uniform({k.stream_id, i});
  CHECK(a.uniform({k.stream_id, 999}) == late);
}

TEST_CASE("uniform and gaussian moments") {
  const CounterRng rng(1);
  const std::uint64_t s = make_stream(1, RngPurpose::test);
  const int n = 200000;
  std::vector<double> u(n), g(n);
  for (int i = 0; i < n; ++i) {
    u[i] = rng.uniform({s, static_cast<std::uint64_t>(i)});
    g[i] = rng.gaussian({s + 1, static_cast<std::uint64_t>(i)}, 2.0, 3.0);
  }
  CHECK(*std::min_element(u.begin(), u.end()) > 0.0);
  CHECK(*std::max_element(u.begin(), u.end()) < 1.0);
  const auto su = summarize(u);
  CHECK(su.mean == Approx(0.5).margin(0.003));
  CHECK(su.std == Approx(std::sqrt(1.0 / 12.0)).epsilon(0.01));
  const auto sg = summarize(g);
  CHECK(sg.mean == Approx(2.0).margin(0.03));
  CHECK(sg.std == Approx(3.0).epsilon(0.01));
  CHECK(rng.gaussian({s, 5}, 1.25, 0.0) == 1.25);
  CHECK_THROWS_AS(rng.gaussian({s, 5}, 0.0, -1.0), ContractViolation);
}

TEST_CASE("clamped normal stays within its limit") {
  const CounterRng rng(3);
  double lo = 0, hi = 0;
  for (std::uint64_t i = 0; i < 100000; ++i) {
    const double x = rng.clamped_normal({make_stream(9, RngPurpose::test), i}, 3.0);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  CHECK(lo >= -3.0);
  CHECK(hi <= 3.0);
  CHECK(lo < -2.5);
  CHECK(hi > 2.5);
}

// ---- event queue ----

TEST_CASE("events fire in time order, ties in insertion order") {
  EventQueue q;
  std::vector<int> order;
  q.schedule(SimTime(2.0), [&] { order.push_back(3); });
  q.schedule(SimTime(1.0), [&] { order.push_back(1); });
  q.schedule(SimTime(1.0), [&] { order.push_back(2); });
  const auto dropped = q.schedule(SimTime(1.5), [&] { order.push_back(99); });
  CHECK(q.cancel(dropped));
  CHECK_FALSE(q.cancel(dropped));
  q.run_until(SimTime(5.0));
  CHECK(order == std::vector<int>{1, 2, 3});
  CHECK(q.now() == SimTime(5.0));
  CHECK(q.dispatched() == 3);
  CHECK_THROWS_AS(q.schedule(SimTime(4.0), [] {}), ContractViolation);
  CHECK_THROWS_AS(q.run_until(SimTime(4.0)), ContractViolation);
}

TEST_CASE("actions may schedule further events, including at the current time") {
  EventQueue q;
  std::vector<double> seen;
  std::function<void()> tick = [&] {
    seen.push_back(q.now().seconds());
    if (seen.size() < 6) q.schedule(q.now() + 0.5, tick);
  };
  q.schedule(SimTime(0.0), tick);
  q.schedule(SimTime(1.0), [&] { q.schedule(q.now(), [&] { seen.push_back(-1.0); }); });
  q.run_until(SimTime(1.75));
  CHECK(seen == std::vector<double>{0.0, 0.5, 1.0, -1.0, 1.5});
  CHECK(q.pending() == 1);
}

// ---- skew profiles ----

namespace {

double simpson(const SkewProfile& p, double t, int n = 20000) {
  const double h = t / n;
  double acc = p.ppm_at(0) + p.ppm_at(t);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * p.ppm_at(i * h);
  return acc * h / 3.0;
}

OscillatorSpec spec(std::uint32_t id, std::uint64_t f, double jitter = 0.0) {
  OscillatorSpec s;
  s.id = id;
  s.f_nom = f;
  s.jitter_std = jitter;
  return s;
}

}  // namespace

TEST_CASE("skew profile integrals match quadrature") {
  const std::vector<SkewProfile> profiles{
      SkewProfile::constant(-20.0),
      SkewProfile::ramp(5.0, 0.3),
      SkewProfile::sinusoid(10.0, 4.0, 7.0),
      SkewProfile::piecewise_linear({{1.0, 10.0}, {4.0, -5.0}, {9.0, 30.0}}),
  };
  for (const auto& p : profiles) {
    for (double t : {0.5, 3.0, 8.25, 12.0}) CHECK(p.integral(t) == Approx(simpson(p, t)).epsilon(1e-7));
  }
  const auto pw = SkewProfile::piecewise_linear({{1.0, 10.0}, {4.0, -5.0}});
  CHECK(pw.ppm_at(0.0) == 10.0);
  CHECK(pw.ppm_at(2.5) == Approx(2.5));
  CHECK(pw.ppm_at(100.0) == -5.0);
  CHECK(SkewProfile::ramp(1.0, -2.0).max_abs_ppm(3.0) == Approx(5.0));
  CHECK_THROWS_AS(SkewProfile::piecewise_linear({}), ConfigError);
  CHECK_THROWS_AS(SkewProfile::piecewise_linear({{2.0, 1.0}, {2.0, 3.0}}), ConfigError);
  CHECK_THROWS_AS(SkewProfile::sinusoid(0, 1, 0), ConfigError);
}

// ---- oscillator ----

TEST_CASE("ideal oscillator counts floor(f t)") {
  const Oscillator o(spec(1, 32768), 1, 100.0);
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> t(0.0, 99.0);
  for (int i = 0; i < 10000; ++i) {
    const double x = t(gen);
    CHECK(o.count_edges(SimTime(x)) == static_cast<std::uint64_t>(std::floor(32768.0 * x)));
  }
  CHECK(o.count_edges(SimTime(0.0)) == 0);
  // an edge is included at its exact instant
  for (std::uint64_t n : {1ull, 2ull, 32768ull, 1000001ull}) {
    CHECK(o.count_edges(o.edge_time(n)) == n);
  }
}

TEST_CASE("constant skew stretches the phase") {
  OscillatorSpec s = spec(1, 48000000);
  s.skew = SkewProfile::constant(-20.0);
  const Oscillator o(s, 1, 10.0);
  CHECK(o.phase(SimTime(5.0)) == Approx(48e6 * 5.0 * (1.0 - 20e-6)).epsilon(1e-15));
  CHECK(o.skew_ppm(SimTime(3.0)) == -20.0);
  for (std::uint64_t n : {1ull, 1000ull, 123456789ull}) {
    CHECK(o.phase(SimTime(o.nominal_edge_time(n))) == Approx(static_cast<double>(n)).margin(1e-5));
  }
}

TEST_CASE("edge jitter has the configured spread and keeps edges ordered") {
  const Oscillator o(spec(2, 32768, 60e-9), 1, 10.0);
  std::vector<double> j;
  for (std::uint64_t n = 1; n <= 100000; ++n) j.push_back(o.edge_jitter(n));
  const auto st = summarize(j);
  CHECK(st.mean == Approx(0.0).margin(1e-9));
  // 3-sigma saturation trims the spread by about 1.3 %
  CHECK(st.std == Approx(60e-9).epsilon(0.03));
  CHECK(st.max <= 3 * 60e-9 + 1e-15);
  CHECK(st.min >= -3 * 60e-9 - 1e-15);
  for (std::uint64_t n = 1; n < 100000; ++n) REQUIRE(o.edge_time(n) < o.edge_time(n + 1));
}

TEST_CASE("jitter bound and horizon are enforced") {
  CHECK_THROWS_AS(Oscillator(spec(1, 1000, 0.45 / 1000 / 3 * 1.01), 1, 1.0), ConfigError);
  CHECK_NOTHROW(Oscillator(spec(1, 1000, 0.45 / 1000 / 3 * 0.99), 1, 1.0));
  CHECK_THROWS_AS(Oscillator(spec(1, 0), 1, 1.0), ConfigError);
  const Oscillator o(spec(1, 1000), 1, 1.0);
  CHECK_THROWS_AS(o.count_edges(SimTime(2.5)), ContractViolation);
  CHECK_THROWS_AS(o.edge_time(0), ContractViolation);
  CHECK_THROWS_AS(o.edge_time(5000), ContractViolation);
}

TEST_CASE("same seed gives the same edges, another seed other ones") {
  OscillatorSpec s = spec(3, 32768, 60e-9);
  s.wander_std = 0.01;
  const Oscillator a(s, 11, 20.0), b(s, 11, 20.0), c(s, 12, 20.0);
  for (std::uint64_t n : {1ull, 77ull, 400000ull}) {
    CHECK(a.edge_time(n) == b.edge_time(n));
    CHECK(a.edge_time(n) != c.edge_time(n));
  }
  CHECK(a.skew_ppm(SimTime(10.0)) != 0.0);
}

TEST_CASE("count_edges against brute-force enumeration, randomized small clocks") {
  std::mt19937_64 gen(42);
  for (int k = 0; k < 200; ++k) {
    OscillatorSpec s = spec(static_cast<std::uint32_t>(k), std::uniform_int_distribution<std::uint64_t>(1, 1000)(gen));
    s.skew = SkewProfile::sinusoid(std::uniform_real_distribution<double>(-100, 100)(gen), 20.0, 3.0);
    s.jitter_std = std::uniform_real_distribution<double>(0.0, 0.99)(gen) * 0.15 / static_cast<double>(s.f_nom);
    const Oscillator o(s, 1, 10.0);
    std::vector<double> edges;
    for (std::uint64_t n = 1; n < static_cast<std::uint64_t>(o.phase(SimTime(9.5))); ++n) {
      edges.push_back(o.edge_time(n).seconds());
    }
    std::vector<double> queries{0.0};
    for (double e : edges) {
      if (std::uniform_int_distribution<int>(0, 9)(gen) == 0) queries.insert(queries.end(), {e, std::nextafter(e, 0.0)});
    }
    for (int i = 0; i < 20; ++i) queries.push_back(std::uniform_real_distribution<double>(0.0, edges.empty() ? 0.0 : edges.back())(gen));
    for (double t : queries) {
      const auto brute = static_cast<std::uint64_t>(std::count_if(edges.begin(), edges.end(), [t](double e) { return e <= t; }));
      REQUIRE(o.count_edges(SimTime(t)) == brute);
    }
  }
}
