#pragma once

// Counter-based random numbers. Every sample is a pure function of
// (global seed, stream id, index), so the jitter of edge n can be drawn
// without generating edges 1..n-1 first.

#include <array>
#include <cstdint>

namespace vht {

/// What a random stream is used for. Occupies the low 16 bits of a stream id.
enum class RngPurpose : std::uint16_t {
  edge_jitter = 1,
  wander = 2,
  isr_latency = 3,
  event_times = 4,
  interval_starts = 5,
  test = 0xffff,
};

/// Stream id layout: entity (high 48 bits) | purpose (low 16 bits).
constexpr std::uint64_t make_stream(std::uint64_t entity, RngPurpose purpose) {
  return (entity << 16) | static_cast<std::uint16_t>(purpose);
}

struct RngKey {
  std::uint64_t stream_id = 0;
  std::uint64_t index = 0;
};

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// 128 random bits for the key, as two 64-bit words.
  std::array<std::uint64_t, 2> bits(RngKey key) const;

  /// Uniform in the open interval (0, 1), 53-bit resolution.
  double uniform(RngKey key) const;

  /// Normal deviate by inverse CDF of uniform(key). std == 0 returns mean
  /// exactly.
  double gaussian(RngKey key, double mean, double std) const;

  /// Standard normal saturated to [-limit, +limit].
  double clamped_normal(RngKey key, double limit) const;

 private:
  std::uint64_t seed_;
};

}  // namespace vht
