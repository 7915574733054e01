#include "vht/rng.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/erf.hpp>

#include "vht/sim_time.hpp"

namespace vht {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

std::array<std::uint64_t, 2> CounterRng::bits(RngKey key) const {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(key.index),
      static_cast<std::uint32_t>(key.index >> 32),
      static_cast<std::uint32_t>(key.stream_id),
      static_cast<std::uint32_t>(key.stream_id >> 32)};
  const std::array<std::uint32_t, 2> k = {static_cast<std::uint32_t>(seed_),
                                          static_cast<std::uint32_t>(seed_ >> 32)};
  const auto out = philox4x32_10(ctr, k);
  return {(static_cast<std::uint64_t>(out[1]) << 32) | out[0],
          (static_cast<std::uint64_t>(out[3]) << 32) | out[2]};
}

double CounterRng::uniform(RngKey key) const {
  const std::uint64_t b = bits(key)[0] >> 11;
  return (static_cast<double>(b) + 0.5) * 0x1.0p-53;
}

double CounterRng::gaussian(RngKey key, double mean, double std) const {
  if (!(std >= 0.0)) throw ContractViolation("gaussian: std must be >= 0");
  if (std == 0.0) return mean;
  const double z = std::sqrt(2.0) * boost::math::erf_inv(2.0 * uniform(key) - 1.0);
  return mean + std * z;
}

double CounterRng::clamped_normal(RngKey key, double limit) const {
  const double z = gaussian(key, 0.0, 1.0);
  return std::clamp(z, -limit, limit);
}

}  // namespace vht
