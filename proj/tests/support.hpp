#pragma once

// Fixtures and independent reference implementations shared by the tests.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "hrc/inference.hpp"
#include "hrc/planner.hpp"
#include "hrc/random.hpp"
#include "hrc/world.hpp"

namespace hrc::testing {

struct TaskSpec {
  int id;
  double x;
  double y;
  TaskKind kind = TaskKind::OneAgent;
};

inline Layout make_layout(Point human, Point robot, std::vector<TaskSpec> tasks) {
  Layout l;
  l.name = "fixture";
  l.human_start = human;
  l.robot_start = robot;
  for (const TaskSpec& t : tasks) l.tasks.push_back({task_id(t.id), {t.x, t.y}, t.kind});
  l.validate();
  return l;
}

inline TaskId T(int id) { return task_id(id); }

// Uniform positions in the default 20x20 domain; ids 0.. with joints last.
inline Layout random_fixture(std::uint64_t seed, int n_one, int m_joint) {
  Rng rng(seed);
  auto draw = [&] { return Point{20 * uniform01(rng), 20 * uniform01(rng)}; };
  const Point h = draw();
  const Point r = draw();
  std::vector<TaskSpec> tasks;
  for (int i = 0; i < n_one + m_joint; ++i) {
    const Point p = draw();
    tasks.push_back({i, p.x, p.y, i < n_one ? TaskKind::OneAgent : TaskKind::Joint});
  }
  return make_layout(h, r, tasks);
}

inline Layout mirrored(const Layout& l) {
  Layout m = l;
  auto flip = [](Point p) { return Point{20.0 - p.x, p.y}; };
  m.human_start = flip(l.human_start);
  m.robot_start = flip(l.robot_start);
  for (Task& t : m.tasks) t.location = flip(t.location);
  return m;
}

// Plain two-pointer schedule: agents walk their sequences, a joint task
// completes at the later of the two arrivals.
inline double reference_makespan(const std::vector<TaskId>& hs, const std::vector<TaskId>& rs,
                                 Point h0, Point r0, const Layout& layout) {
  double th = 0.0;
  double tr = 0.0;
  Point ph = h0;
  Point pr = r0;
  std::size_t i = 0;
  std::size_t j = 0;
  double last = 0.0;
  auto leg = [&](Point& p, double& t, TaskId id) {
    const Point q = layout.task(id).location;
    t += std::hypot(q.x - p.x, q.y - p.y) / layout.velocity;
    p = q;
  };
  while (i < hs.size() || j < rs.size()) {
    while (i < hs.size() && layout.task(hs[i]).kind == TaskKind::OneAgent) {
      leg(ph, th, hs[i++]);
      last = std::max(last, th);
    }
    while (j < rs.size() && layout.task(rs[j]).kind == TaskKind::OneAgent) {
      leg(pr, tr, rs[j++]);
      last = std::max(last, tr);
    }
    if (i < hs.size() && j < rs.size()) {
      leg(ph, th, hs[i++]);
      leg(pr, tr, rs[j++]);
      th = tr = std::max(th, tr);
      last = std::max(last, th);
    }
  }
  return last;
}

struct ReferencePlan {
  std::vector<TaskId> human;
  std::vector<TaskId> robot;
  double makespan;
};

// Every assignment of one-agent tasks, every ordering of each agent's tasks,
// keeping pairs whose joint tasks appear in the same relative order.
inline std::vector<ReferencePlan> reference_enumeration(const Layout& layout) {
  std::vector<TaskId> ones;
  std::vector<TaskId> joints;
  for (const Task& t : layout.tasks) (t.kind == TaskKind::Joint ? joints : ones).push_back(t.id);
  std::vector<ReferencePlan> out;
  auto joint_order = [&](const std::vector<TaskId>& seq) {
    std::vector<TaskId> js;
    for (TaskId id : seq) {
      if (layout.task(id).kind == TaskKind::Joint) js.push_back(id);
    }
    return js;
  };
  for (unsigned mask = 0; mask < (1u << ones.size()); ++mask) {
    std::vector<TaskId> h = joints;
    std::vector<TaskId> r = joints;
    for (std::size_t k = 0; k < ones.size(); ++k) ((mask >> k) & 1u ? r : h).push_back(ones[k]);
    std::sort(h.begin(), h.end());
    std::sort(r.begin(), r.end());
    std::vector<std::vector<TaskId>> robot_perms;
    do robot_perms.push_back(r);
    while (std::next_permutation(r.begin(), r.end()));
    do {
      for (const auto& rp : robot_perms) {
        if (joint_order(h) != joint_order(rp)) continue;
        out.push_back({h, rp, reference_makespan(h, rp, layout.human_start, layout.robot_start, layout)});
      }
    } while (std::next_permutation(h.begin(), h.end()));
  }
  return out;
}

// Likelihood by a direct softmax, nearest heading found by angular distance.
inline double reference_likelihood(Point h_next, Point h, Point g, double speed, const InferenceParams& p) {
  auto value = [&](Point x) {
    const double d = std::hypot(g.x - x.x, g.y - x.y);
    return std::pow(p.gamma, d) * p.terminal_reward -
           p.running_cost * (p.gamma - std::pow(p.gamma, d)) / (1.0 - p.gamma);
  };
  const int a_count = p.heading_count;
  const double observed = std::atan2(h_next.y - h.y, h_next.x - h.x);
  int nearest = 0;
  double best = 1e300;
  for (int a = 0; a < a_count; ++a) {
    const double theta = 2.0 * std::numbers::pi * a / a_count;
    double diff = std::fabs(std::remainder(observed - theta, 2.0 * std::numbers::pi));
    if (diff < best - 1e-12) {
      best = diff;
      nearest = a;
    }
  }
  double num = std::exp(p.beta * value(h_next));
  double den = 0.0;
  for (int a = 0; a < a_count; ++a) {
    if (a == nearest) {
      den += num;
      continue;
    }
    const double theta = 2.0 * std::numbers::pi * a / a_count;
    den += std::exp(p.beta * value({h.x + speed * std::cos(theta), h.y + speed * std::sin(theta)}));
  }
  return num / den;
}

// Batch posterior: prior times the product of all step likelihoods, normalised once.
inline std::vector<double> reference_posterior(const std::vector<double>& prior, const std::vector<Point>& goals,
                                               const std::vector<Point>& path, double speed,
                                               const InferenceParams& p) {
  std::vector<double> w = prior;
  for (std::size_t g = 0; g < goals.size(); ++g) {
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      w[g] *= reference_likelihood(path[k + 1], path[k], goals[g], speed, p);
    }
  }
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return w;
}

}  // namespace hrc::testing
