#include "vht/stats.hpp"

#include <cmath>

#include <boost/accumulators/accumulators.hpp>
#include <boost/accumulators/statistics/count.hpp>
#include <boost/accumulators/statistics/max.hpp>
#include <boost/accumulators/statistics/mean.hpp>
#include <boost/accumulators/statistics/min.hpp>
#include <boost/accumulators/statistics/stats.hpp>
#include <boost/accumulators/statistics/variance.hpp>

namespace vht {

SampleStats summarize(std::span<const double> samples) {
  namespace acc = boost::accumulators;
  acc::accumulator_set<double, acc::stats<acc::tag::count, acc::tag::mean, acc::tag::variance,
                                          acc::tag::min, acc::tag::max>>
      a;
  for (double x : samples) a(x);
  SampleStats s;
  s.count = acc::count(a);
  if (s.count == 0) return s;
  s.mean = acc::mean(a);
  s.std = std::sqrt(acc::variance(a));
  s.min = acc::min(a);
  s.max = acc::max(a);
  return s;
}

}  // namespace vht
