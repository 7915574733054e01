#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vht/rational.hpp"

namespace vht {

/// Polynomial with exact coefficients in descending powers.
struct Polynomial {
  std::vector<Rational> coeffs;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  Rational at(const Rational& x) const;
  std::complex<double> at(std::complex<double> x) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Rational& k, const Polynomial& p);
};

/// Polynomial raised to a nonnegative power.
Polynomial pow(const Polynomial& p, std::size_t n);

/// num(x) / den(x), in s or z depending on context.
struct TransferFunction {
  Polynomial num;
  Polynomial den;

  std::complex<double> at(std::complex<double> x) const { return num.at(x) / den.at(x); }
};

/// Scales num and den by one common factor so every coefficient is an
/// integer, their gcd is 1 and the leading denominator coefficient is positive.
TransferFunction normalize_integer(TransferFunction tf);

/// Backward Euler: s <- (z - 1) / (T z), cleared of negative powers of z.
TransferFunction backward_euler(const TransferFunction& continuous, const Rational& period);

/// Integral controller with a zero-pole pair:
///   C(s) = omega_c^2 T / (alpha s) * (1 + s alpha / omega_c) / (1 + s / (beta omega_c))
struct ControllerDesign {
  Rational omega_c{5, 4};
  Rational alpha{25, 4};
  Rational beta{16};
  Rational T_hl{1, 5};

  void validate() const;
  TransferFunction continuous() const;
};

/// The exploration-winning design with T_hl = 200 ms.
inline ControllerDesign reference_design() { return {}; }

/// |C(j omega) P(j omega)| with P(s) = 1 / (plant_period s).
double loop_magnitude(const TransferFunction& controller_s, double plant_period, double omega);
/// Same, for the design's own C(s) and T_hl.
double loop_magnitude(const ControllerDesign& design, double omega);

/// arctan(alpha) - arctan(1 / beta), degrees. Both arguments must exceed 1.
double phase_margin_deg(double alpha, double beta);

/// Runtime form of a discrete controller C(z):
///   a0 u(k) = b0 e(k) + b1 e(k-1) + ... - a1 u(k-1) - a2 u(k-2) - ...
/// Coefficients are exact; evaluation is in double precision.
class DiscreteController {
 public:
  explicit DiscreteController(TransferFunction z_domain);

  const TransferFunction& transfer() const { return tf_; }
  /// True when the denominator vanishes exactly at z = 1.
  bool has_integral_action() const;

  double step(double e);
  void reset();
  /// Loads the state that reproduces a steady output u with zero error.
  void hold(double u);
  double last_output() const { return u_hist_.empty() ? 0.0 : u_hist_.front(); }

 private:
  TransferFunction tf_;
  std::vector<double> b_;  // aligned to delays 0..n, divided by a0
  std::vector<double> a_;  // a_[i] for delay i >= 1, divided by a0
  std::vector<double> e_hist_;  // e(k-1), e(k-2), ...
  std::vector<double> u_hist_;  // u(k-1), u(k-2), ...
};

DiscreteController discretize(const ControllerDesign& design);

struct ClosedLoopTrace {
  std::vector<double> e;
  std::vector<double> u;
};

/// Feedback loop around the synchronization-error dynamics:
///   e(k) = e(k-1) - u(k-1) + d(k-1),  u(k) = C[e](k).
/// The correction enters with a negative sign: u is the rate correction the
/// virtual clock applies, which reduces the error it accumulates. d must hold
/// at least n - 1 samples.
ClosedLoopTrace closed_loop_run(DiscreteController controller, std::span<const double> d,
                                std::size_t n, double e0 = 0.0);
std::vector<double> closed_loop_sim(DiscreteController controller, std::span<const double> d,
                                    std::size_t n, double e0 = 0.0);

/// Time (k * period) after which |residual| stays below band. Infinity when
/// the last sample is still outside the band.
double settling_time(std::span<const double> residual, double band, double period);

struct SettlingResult {
  double settling_s = 0.0;  // residual rate error held below the band
  double band = 0.0;
  std::vector<double> residual;  // (d - u(k)) / d
};

/// Constant relative skew step: settling of the compensated fraction of the
/// skew, |d - u(k)| / |d| < band.
SettlingResult rate_settling(const DiscreteController& controller, double period,
                             double band = 1e-3, std::size_t steps = 2000);

enum class DseSort { settling, phase_margin, hf_gain };

struct DseGrid {
  std::vector<Rational> omega_c;
  std::vector<Rational> alpha;
  std::vector<Rational> beta;
  Rational T_hl{1, 5};
};

struct DseRow {
  Rational omega_c, alpha, beta;
  double phase_margin_deg = 0.0;
  double settling_s = 0.0;
  double hf_gain_at_100wc = 0.0;
  bool reference = false;  // the (5/4, 25/4, 16) design
};

std::vector<DseRow> explore_design_space(const DseGrid& grid, DseSort sort = DseSort::settling);
std::string dse_to_csv(std::span<const DseRow> rows);

/// T_hl = 1e6 / (f_h q_e): shortest period that resolves the rate to q_e ppm.
double min_sync_period(double f_h, double q_e_ppm);
/// q_e = 1e6 / (f_h T_hl), ppm.
double quantization_error_ppm(double f_h, double T_hl);

}  // namespace vht
