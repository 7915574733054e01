#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace vht {

using Rational = boost::rational<std::int64_t>;

/// Euclidean remainder: result in [0, |m|).
constexpr std::int64_t emod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + (m < 0 ? -m : m) : r;
}

/// Nearest integer, halves rounded toward +infinity.
std::int64_t round_nearest(const Rational& r);

double to_double(const Rational& r);

/// Parses "p/q", an integer, or a decimal such as "1.25" or "2.5e-3" into an
/// exact rational. Throws ConfigError on malformed input.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);

/// Fast/slow nominal frequency ratio phi0 = f_h / f_l, kept as a reduced
/// integer pair.
class VhtRatio {
 public:
  VhtRatio(std::uint64_t f_h, std::uint64_t f_l);

  std::uint64_t f_h() const { return f_h_; }
  std::uint64_t f_l() const { return f_l_; }
  /// phi0 = num / den, reduced.
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  Rational phi0() const { return Rational(num_, den_); }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

 private:
  std::uint64_t f_h_;
  std::uint64_t f_l_;
  std::int64_t num_;
  std::int64_t den_;
};

}  // namespace vht
