#include "vht/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "vht/csv.hpp"
#include "vht/sim_time.hpp"

namespace vht {

Rational Polynomial::at(const Rational& x) const {
  Rational acc(0);
  for (const auto& c : coeffs) acc = acc * x + c;
  return acc;
}

std::complex<double> Polynomial::at(std::complex<double> x) const {
  std::complex<double> acc(0.0);
  for (const auto& c : coeffs) acc = acc * x + to_double(c);
  return acc;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  const std::size_t n = std::max(a.coeffs.size(), b.coeffs.size());
  Polynomial r{std::vector<Rational>(n, Rational(0))};
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) r.coeffs[n - a.coeffs.size() + i] += a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) r.coeffs[n - b.coeffs.size() + i] += b.coeffs[i];
  return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.coeffs.empty() || b.coeffs.empty()) return {};
  Polynomial r{std::vector<Rational>(a.coeffs.size() + b.coeffs.size() - 1, Rational(0))};
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) r.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  return r;
}

Polynomial operator*(const Rational& k, const Polynomial& p) {
  Polynomial r = p;
  for (auto& c : r.coeffs) c *= k;
  return r;
}

Polynomial pow(const Polynomial& p, std::size_t n) {
  Polynomial r{{Rational(1)}};
  for (std::size_t i = 0; i < n; ++i) r = r * p;
  return r;
}

TransferFunction normalize_integer(TransferFunction tf) {
  if (tf.den.coeffs.empty() || tf.den.coeffs.front() == Rational(0)) {
    throw ContractViolation("transfer function needs a nonzero leading denominator coefficient");
  }
  std::int64_t l = 1;
  for (const auto* p : {&tf.num, &tf.den})
    for (const auto& c : p->coeffs) l = std::lcm(l, c.denominator());
  std::int64_t g = 0;
  for (const auto* p : {&tf.num, &tf.den})
    for (const auto& c : p->coeffs) g = std::gcd(g, (c * l).numerator());
  Rational k(l, g == 0 ? 1 : g);
  if (tf.den.coeffs.front() < Rational(0)) k = -k;
  tf.num = k * tf.num;
  tf.den = k * tf.den;
  return tf;
}

TransferFunction backward_euler(const TransferFunction& continuous, const Rational& period) {
  if (period <= Rational(0)) throw ContractViolation("backward_euler: period must be positive");
  const std::size_t n = std::max(continuous.num.degree(), continuous.den.degree());
  const Polynomial zm1{{Rational(1), Rational(-1)}};  // z - 1
  const Polynomial tz{{period, Rational(0)}};         // T z
  // p(s) * (Tz)^n with s = (z-1)/(Tz): sum_i c_i (z-1)^i (Tz)^(n-i)
  auto map = [&](const Polynomial& p) {
    Polynomial r{std::vector<Rational>(n + 1, Rational(0))};
    const std::size_t d = p.degree();
    for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
      const std::size_t i = d - k;  // power of s
      r = r + p.coeffs[k] * (pow(zm1, i) * pow(tz, n - i));
    }
    return r;
  };
  return normalize_integer({map(continuous.num), map(continuous.den)});
}

void ControllerDesign::validate() const {
  if (omega_c <= Rational(0)) throw ConfigError("controller: omega_c must be > 0");
  if (alpha <= Rational(1)) throw ConfigError("controller: alpha must be > 1");
  if (beta <= Rational(1)) throw ConfigError("controller: beta must be > 1");
  if (T_hl <= Rational(0)) throw ConfigError("controller: T_hl must be > 0");
}

TransferFunction ControllerDesign::continuous() const {
  validate();
  const Rational k = omega_c * omega_c * T_hl / alpha;
  const Rational a = alpha / omega_c;
  const Rational b = Rational(1) / (beta * omega_c);
  // k (1 + a s) / (s (1 + b s))
  return {Polynomial{{k * a, k}}, Polynomial{{b, Rational(1), Rational(0)}}};
}

double loop_magnitude(const TransferFunction& controller_s, double plant_period, double omega) {
  if (!(omega > 0)) throw ContractViolation("loop_magnitude: omega must be > 0");
  if (!(plant_period > 0)) throw ContractViolation("loop_magnitude: plant period must be > 0");
  const std::complex<double> s(0.0, omega);
  return std::abs(controller_s.at(s) / (plant_period * s));
}

double loop_magnitude(const ControllerDesign& design, double omega) {
  return loop_magnitude(design.continuous(), to_double(design.T_hl), omega);
}

double phase_margin_deg(double alpha, double beta) {
  if (!(alpha > 1) || !(beta > 1)) throw ContractViolation("phase_margin: alpha and beta must be > 1");
  return (std::atan(alpha) - std::atan(1.0 / beta)) * 180.0 / std::numbers::pi;
}

DiscreteController::DiscreteController(TransferFunction z_domain) : tf_(std::move(z_domain)) {
  const auto& den = tf_.den.coeffs;
  auto num = tf_.num.coeffs;
  if (den.empty() || den.front() == Rational(0)) throw ContractViolation("controller: a0 must be nonzero");
  if (num.size() > den.size()) throw ContractViolation("controller: improper C(z)");
  num.insert(num.begin(), den.size() - num.size(), Rational(0));
  const double a0 = to_double(den.front());
  for (const auto& c : num) b_.push_back(to_double(c) / a0);
  for (const auto& c : den) a_.push_back(to_double(c) / a0);
  e_hist_.assign(den.size() - 1, 0.0);
  u_hist_.assign(den.size() - 1, 0.0);
}

bool DiscreteController::has_integral_action() const { return tf_.den.at(Rational(1)) == Rational(0); }

double DiscreteController::step(double e) {
  double u = b_[0] * e;
  for (std::size_t i = 1; i < a_.size(); ++i) u += b_[i] * e_hist_[i - 1] - a_[i] * u_hist_[i - 1];
  if (!e_hist_.empty()) {
    std::rotate(e_hist_.rbegin(), e_hist_.rbegin() + 1, e_hist_.rend());
    std::rotate(u_hist_.rbegin(), u_hist_.rbegin() + 1, u_hist_.rend());
    e_hist_.front() = e;
    u_hist_.front() = u;
  }
  return u;
}

void DiscreteController::reset() {
  std::fill(e_hist_.begin(), e_hist_.end(), 0.0);
  std::fill(u_hist_.begin(), u_hist_.end(), 0.0);
}

void DiscreteController::hold(double u) {
  std::fill(e_hist_.begin(), e_hist_.end(), 0.0);
  std::fill(u_hist_.begin(), u_hist_.end(), u);
}

DiscreteController discretize(const ControllerDesign& design) {
  return DiscreteController(backward_euler(design.continuous(), design.T_hl));
}

ClosedLoopTrace closed_loop_run(DiscreteController controller, std::span<const double> d,
                                std::size_t n, double e0) {
  if (n < 1) throw ContractViolation("closed_loop_sim: n must be >= 1");
  if (d.size() + 1 < n) throw ContractViolation("closed_loop_sim: disturbance sequence too short");
  ClosedLoopTrace tr;
  tr.e.reserve(n);
  tr.u.reserve(n);
  double e = e0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) e = tr.e.back() - tr.u.back() + d[k - 1];
    tr.e.push_back(e);
    tr.u.push_back(controller.step(e));
  }
  return tr;
}

std::vector<double> closed_loop_sim(DiscreteController controller, std::span<const double> d,
                                    std::size_t n, double e0) {
  return closed_loop_run(std::move(controller), d, n, e0).e;
}

double settling_time(std::span<const double> residual, double band, double period) {
  std::size_t last_out = residual.size();
  for (std::size_t k = residual.size(); k-- > 0;) {
    if (!(std::abs(residual[k]) < band)) {
      last_out = k;
      break;
    }
  }
  if (last_out == residual.size()) return 0.0;
  if (last_out + 1 == residual.size()) return std::numeric_limits<double>::infinity();
  return static_cast<double>(last_out + 1) * period;
}

SettlingResult rate_settling(const DiscreteController& controller, double period, double band,
                             std::size_t steps) {
  std::vector<double> d(steps, 1.0);
  DiscreteController c = controller;
  c.reset();
  const auto tr = closed_loop_run(std::move(c), d, steps);
  SettlingResult r;
  r.band = band;
  r.residual.reserve(steps);
  for (double u : tr.u) r.residual.push_back(1.0 - u);
  r.settling_s = settling_time(r.residual, band, period);
  return r;
}

std::vector<DseRow> explore_design_space(const DseGrid& grid, DseSort sort) {
  if (grid.omega_c.empty() || grid.alpha.empty() || grid.beta.empty()) {
    throw ConfigError("design space grid is empty");
  }
  const ControllerDesign ref = reference_design();
  std::vector<DseRow> rows;
  for (const auto& w : grid.omega_c)
    for (const auto& a : grid.alpha)
      for (const auto& b : grid.beta) {
        ControllerDesign d{w, a, b, grid.T_hl};
        d.validate();
        DseRow row{w, a, b};
        row.phase_margin_deg = phase_margin_deg(to_double(a), to_double(b));
        row.settling_s = rate_settling(discretize(d), to_double(grid.T_hl)).settling_s;
        row.hf_gain_at_100wc = loop_magnitude(d, 100.0 * to_double(w));
        row.reference = w == ref.omega_c && a == ref.alpha && b == ref.beta;
        rows.push_back(row);
      }
  auto key = [sort](const DseRow& r) {
    switch (sort) {
      case DseSort::phase_margin: return -r.phase_margin_deg;
      case DseSort::hf_gain: return r.hf_gain_at_100wc;
      case DseSort::settling: break;
    }
    return r.settling_s;
  };
  std::stable_sort(rows.begin(), rows.end(),
                   [&](const DseRow& x, const DseRow& y) { return key(x) < key(y); });
  return rows;
}

std::string dse_to_csv(std::span<const DseRow> rows) {
  CsvWriter w{"omega_c", "alpha", "beta", "phase_margin_deg", "settling_s", "hf_gain_at_100wc",
              "reference"};
  for (const auto& r : rows) {
    w.cell(to_double(r.omega_c)).cell(to_double(r.alpha)).cell(to_double(r.beta));
    w.cell(r.phase_margin_deg).cell(r.settling_s).cell(r.hf_gain_at_100wc);
    w.cell(r.reference ? 1 : 0);
    w.end_row();
  }
  return w.str();
}

double min_sync_period(double f_h, double q_e_ppm) {
  if (!(f_h > 0) || !(q_e_ppm > 0)) throw ContractViolation("min_sync_period: arguments must be > 0");
  return 1e6 / (f_h * q_e_ppm);
}

double quantization_error_ppm(double f_h, double T_hl) {
  if (!(f_h > 0) || !(T_hl > 0)) throw ContractViolation("quantization_error: arguments must be > 0");
  return 1e6 / (f_h * T_hl);
}

}  // namespace vht
