#include "hrc/inference.hpp"

#include <algorithm>
#include <numeric>

namespace hrc {

void InferenceParams::validate() const {
  if (!(beta >= 0.0)) throw Error(ErrorKind::InvalidInput, "beta must be non-negative");
  if (!(gamma > 0.0 && gamma < 1.0)) throw Error(ErrorKind::InvalidInput, "gamma must lie in (0,1)");
  if (heading_count < 4) throw Error(ErrorKind::InvalidInput, "heading_count must be at least 4");
}

double Belief::total() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

double Belief::prob(TaskId id) const {
  auto it = std::find(support.begin(), support.end(), id);
  return it == support.end() ? 0.0 : probs[static_cast<std::size_t>(it - support.begin())];
}

double Belief::max_prob() const {
  return probs.empty() ? 0.0 : *std::max_element(probs.begin(), probs.end());
}

double value_at_distance(double d, const InferenceParams& params) {
  const double gd = std::pow(params.gamma, d);
  return gd * params.terminal_reward -
         params.running_cost * (params.gamma - gd) / (1.0 - params.gamma);
}

double value_function(Point h, Point g, const InferenceParams& params) {
  return value_at_distance(distance(h, g), params);
}

double log_sum_exp(const std::vector<double>& xs) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : xs) hi = std::max(hi, x);
  if (!std::isfinite(hi)) return hi;
  double sum = 0.0;
  for (double x : xs) sum += std::exp(x - hi);
  return hi + std::log(sum);
}

double log_likelihood(Point h_next, Point h, Point g, const Layout& layout,
                      const InferenceParams& params, double step_time) {
  return log_likelihood_with(h_next, h, layout.velocity * step_time, params.heading_count, params.beta,
                             [&](Point x) { return value_function(x, g, params); });
}

double likelihood(Point h_next, Point h, Point g, const Layout& layout,
                  const InferenceParams& params, double step_time) {
  return std::exp(log_likelihood(h_next, h, g, layout, params, step_time));
}

Belief posterior_update(const Belief& belief, Point h, Point h_next, const Layout& layout,
                        const InferenceParams& params, double step_time) {
  return posterior_update_with(
      belief, h, h_next, layout, params, [&](Point x, Point g) { return value_function(x, g, params); },
      step_time);
}

Belief reset_prior(const TaskSet& remaining) {
  if (remaining.empty()) throw Error(ErrorKind::EmptySupport, "no remaining tasks");
  Belief b;
  b.support.assign(remaining.begin(), remaining.end());
  b.probs.assign(b.support.size(), 1.0 / static_cast<double>(b.support.size()));
  return b;
}

TaskId map_goal(const Belief& belief) {
  if (belief.support.empty()) throw Error(ErrorKind::EmptySupport, "belief has no support");
  std::size_t best = 0;
  for (std::size_t i = 1; i < belief.support.size(); ++i) {
    const bool better = belief.probs[i] > belief.probs[best] ||
                        (belief.probs[i] == belief.probs[best] && belief.support[i] < belief.support[best]);
    if (better) best = i;
  }
  return belief.support[best];
}

Belief restrict_support(const Belief& belief, const TaskSet& remaining) {
  Belief out;
  double mass = 0.0;
  for (std::size_t i = 0; i < belief.support.size(); ++i) {
    if (!remaining.contains(belief.support[i])) continue;
    out.support.push_back(belief.support[i]);
    out.probs.push_back(belief.probs[i]);
    mass += belief.probs[i];
  }
  if (out.support.size() == belief.support.size()) return belief;
  if (!(mass > 0.0)) return reset_prior(remaining);
  for (double& p : out.probs) p /= mass;
  return out;
}

}  // namespace hrc
