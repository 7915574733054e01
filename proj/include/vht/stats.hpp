#pragma once

#include <cstddef>
#include <span>

namespace vht {

struct SampleStats {
  std::size_t count = 0;
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  double min = 0.0;
  double max = 0.0;
};

SampleStats summarize(std::span<const double> samples);

}  // namespace vht
