#pragma once

#include <cstdint>
#include <vector>

namespace hrc {

struct Interval {
  double mean = 0.0;
  double low = 0.0;
  double high = 0.0;
};

double mean(const std::vector<double>& xs);

// Percentile bootstrap of the mean.
Interval bootstrap_mean_ci(const std::vector<double>& xs, std::uint64_t seed, int resamples = 2000,
                           double level = 0.95);

}  // namespace hrc
