#include "hrc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hrc/error.hpp"
#include "hrc/random.hpp"

namespace hrc {

double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw Error(ErrorKind::InvalidInput, "mean of an empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

Interval bootstrap_mean_ci(const std::vector<double>& xs, std::uint64_t seed, int resamples, double level) {
  Interval out;
  out.mean = mean(xs);
  Rng rng(seed);
  const std::size_t n = xs.size();
  std::vector<double> means(static_cast<std::size_t>(resamples));
  for (double& m : means) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto k = std::min(static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)), n - 1);
      sum += xs[k];
    }
    m = sum / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  const double tail = 0.5 * (1.0 - level);
  auto pick = [&](double q) {
    const double pos = q * static_cast<double>(means.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, means.size() - 1);
    return means[lo] + (pos - static_cast<double>(lo)) * (means[hi] - means[lo]);
  };
  out.low = pick(tail);
  out.high = pick(1.0 - tail);
  return out;
}

}  // namespace hrc
