#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "hrc/error.hpp"
#include "hrc/world.hpp"

namespace hrc {

struct InferenceParams {
  double beta = 1.05;            // rationality index
  double gamma = 0.9;            // discount per unit distance
  double terminal_reward = 10.0;
  double running_cost = 1.0;
  int heading_count = 24;        // size of the heading fan normalising the likelihood

  void validate() const;
  friend bool operator==(const InferenceParams&, const InferenceParams&) = default;
};

// Posterior over candidate human goals. `probs[i]` belongs to `support[i]`;
// support is kept in ascending id order.
struct Belief {
  std::vector<TaskId> support;
  std::vector<double> probs;

  double total() const;
  double prob(TaskId id) const;
  double max_prob() const;

  friend bool operator==(const Belief&, const Belief&) = default;
};

// Discounted-control value of standing `d` units from the goal:
//   gamma^d * U - c * (gamma - gamma^d) / (1 - gamma).
// Applied literally for any real d, so d = 0 yields U + c.
double value_at_distance(double d, const InferenceParams& params);
double value_function(Point h, Point g, const InferenceParams& params);

double log_sum_exp(const std::vector<double>& xs);

namespace detail {

inline void check_step(Point h, Point h_next, double speed) {
  if (distance(h, h_next) > speed + 1e-6) {
    throw Error(ErrorKind::StepTooLarge, "observed step exceeds one tick of travel");
  }
}

inline int nearest_heading(Point h, Point h_next, int heading_count) {
  const double step = 2.0 * std::numbers::pi / heading_count;
  double theta = std::atan2(h_next.y - h.y, h_next.x - h.x);
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  const int a = static_cast<int>(std::lround(theta / step));
  return a % heading_count;
}

}  // namespace detail

// Boltzmann likelihood of moving h -> h_next under an arbitrary goal value
// `value(Point)`. The normalising set is the fan of `heading_count` evenly
// spaced full-speed steps around h, with the observed position standing in
// for its nearest heading.
template <class ValueFn>
double log_likelihood_with(Point h_next, Point h, double speed, int heading_count, double beta,
                           ValueFn&& value) {
  detail::check_step(h, h_next, speed);
  const int observed = detail::nearest_heading(h, h_next, heading_count);
  const double observed_term = beta * value(h_next);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(heading_count));
  for (int a = 0; a < heading_count; ++a) {
    if (a == observed) {
      terms.push_back(observed_term);
      continue;
    }
    const double theta = 2.0 * std::numbers::pi * a / heading_count;
    const Point candidate{h.x + speed * std::cos(theta), h.y + speed * std::sin(theta)};
    terms.push_back(beta * value(candidate));
  }
  return observed_term - log_sum_exp(terms);
}

// `step_time` is the duration of the observed step in ticks; the fan has
// radius velocity * step_time, so a step observed over part of a tick is
// compared with the other steps the human could have taken in that time.
double log_likelihood(Point h_next, Point h, Point g, const Layout& layout,
                      const InferenceParams& params, double step_time = 1.0);
double likelihood(Point h_next, Point h, Point g, const Layout& layout,
                  const InferenceParams& params, double step_time = 1.0);

// Bayes update with `goal_value(Point position, Point goal)`.
template <class GoalValueFn>
Belief posterior_update_with(const Belief& belief, Point h, Point h_next, const Layout& layout,
                             const InferenceParams& params, GoalValueFn&& goal_value,
                             double step_time = 1.0) {
  if (belief.support.empty()) throw Error(ErrorKind::EmptySupport, "belief has no support");
  std::vector<double> logs(belief.support.size());
  for (std::size_t i = 0; i < belief.support.size(); ++i) {
    const double p = belief.probs[i];
    if (p <= 0.0) {
      logs[i] = -std::numeric_limits<double>::infinity();
      continue;
    }
    const Point g = layout.task(belief.support[i]).location;
    logs[i] = std::log(p) + log_likelihood_with(h_next, h, layout.velocity * step_time, params.heading_count,
                                                params.beta,
                                                [&](Point x) { return goal_value(x, g); });
  }
  const double norm = log_sum_exp(logs);
  if (!std::isfinite(norm)) throw Error(ErrorKind::DegenerateBelief, "posterior mass vanished");
  Belief out{belief.support, std::vector<double>(logs.size())};
  for (std::size_t i = 0; i < logs.size(); ++i) out.probs[i] = std::exp(logs[i] - norm);
  return out;
}

Belief posterior_update(const Belief& belief, Point h, Point h_next, const Layout& layout,
                        const InferenceParams& params, double step_time = 1.0);

// Uniform belief over the given tasks.
Belief reset_prior(const TaskSet& remaining);

// Highest-probability goal; ties go to the lowest id.
TaskId map_goal(const Belief& belief);

// Drops support outside `remaining` and renormalises. Falls back to a uniform
// prior over `remaining` when the surviving mass is zero.
Belief restrict_support(const Belief& belief, const TaskSet& remaining);

}  // namespace hrc
