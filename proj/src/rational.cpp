#include "vht/rational.hpp"

#include <cctype>
#include <charconv>
#include <numeric>

#include "vht/sim_time.hpp"

namespace vht {

std::int64_t round_nearest(const Rational& r) {
  // floor((2n + d) / 2d) with d > 0
  const __int128 n = r.numerator();
  const __int128 d = r.denominator();
  __int128 q = (2 * n + d) / (2 * d);
  if ((2 * n + d) % (2 * d) != 0 && (2 * n + d) < 0) --q;
  return static_cast<std::int64_t>(q);
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw ConfigError("not a rational number: '" + std::string(whole) + "'");
  }
  return v;
}

std::int64_t pow10(int e, std::string_view whole) {
  if (e > 18) throw ConfigError("rational literal out of range: '" + std::string(whole) + "'");
  std::int64_t p = 1;
  for (int i = 0; i < e; ++i) p *= 10;
  return p;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const std::string_view whole = text;
  if (text.empty()) throw ConfigError("empty rational literal");

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const std::int64_t n = parse_int(text.substr(0, slash), whole);
    const std::int64_t d = parse_int(text.substr(slash + 1), whole);
    if (d == 0) throw ConfigError("zero denominator in '" + std::string(whole) + "'");
    return Rational(n, d);
  }

  int exponent = 0;
  if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    exponent = static_cast<int>(parse_int(text.substr(e + 1), whole));
    text = text.substr(0, e);
  }
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  std::string digits;
  int frac_digits = 0;
  bool seen_point = false;
  for (char c : text) {
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else {
      throw ConfigError("not a rational number: '" + std::string(whole) + "'");
    }
  }
  if (digits.empty()) throw ConfigError("not a rational number: '" + std::string(whole) + "'");
  std::int64_t mantissa = parse_int(digits, whole);
  if (negative) mantissa = -mantissa;
  const int scale = exponent - frac_digits;
  if (scale >= 0) return Rational(mantissa * pow10(scale, whole), 1);
  return Rational(mantissa, pow10(-scale, whole));
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

VhtRatio::VhtRatio(std::uint64_t f_h, std::uint64_t f_l) : f_h_(f_h), f_l_(f_l) {
  if (!(f_h > f_l && f_l > 0)) throw ConfigError("VHT clocks need f_h > f_l > 0");
  const std::uint64_t g = std::gcd(f_h, f_l);
  num_ = static_cast<std::int64_t>(f_h / g);
  den_ = static_cast<std::int64_t>(f_l / g);
}

}  // namespace vht
