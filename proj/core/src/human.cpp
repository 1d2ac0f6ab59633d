#include "hrc/human.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hrc/error.hpp"

namespace hrc {

const char* to_string(HumanKind kind) {
  switch (kind) {
    case HumanKind::AlphaMix: return "alpha_mix";
    case HumanKind::BoltzmannChoice: return "boltzmann_choice";
    case HumanKind::Scripted: return "scripted";
  }
  return "unknown";
}

const char* to_string(TrajectoryKind kind) {
  return kind == TrajectoryKind::Straight ? "straight" : "bezier";
}

const char* to_string(Side side) {
  switch (side) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::SeededRandom: return "seeded_random";
  }
  return "unknown";
}

HumanKind human_kind_from_string(const std::string& s) {
  if (s == "alpha_mix") return HumanKind::AlphaMix;
  if (s == "boltzmann_choice") return HumanKind::BoltzmannChoice;
  if (s == "scripted") return HumanKind::Scripted;
  throw Error(ErrorKind::InvalidInput, "unknown human model '" + s + "'");
}

TrajectoryKind trajectory_kind_from_string(const std::string& s) {
  if (s == "straight") return TrajectoryKind::Straight;
  if (s == "bezier") return TrajectoryKind::Bezier;
  throw Error(ErrorKind::InvalidInput, "unknown trajectory kind '" + s + "'");
}

Side side_from_string(const std::string& s) {
  if (s == "left") return Side::Left;
  if (s == "right") return Side::Right;
  if (s == "seeded_random") return Side::SeededRandom;
  throw Error(ErrorKind::InvalidInput, "unknown side '" + s + "'");
}

void TrajectorySpec::validate() const {
  if (!(curvature >= 0.0 && curvature <= 0.5)) {
    throw Error(ErrorKind::InvalidInput, "curvature must lie in [0, 0.5]");
  }
}

void HumanModelSpec::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorKind::InvalidInput, "alpha must lie in [0, 1]");
  if (!(beta_choice >= 0.0)) throw Error(ErrorKind::InvalidInput, "beta_choice must be non-negative");
  trajectory.validate();
}

HumanModel::HumanModel(HumanModelSpec spec)
    : spec_(std::move(spec)), rng_(spec_.rng_seed), queue_(spec_.script.begin(), spec_.script.end()) {
  spec_.validate();
}

std::optional<TaskId> HumanModel::choose_goal(const TeamState& state, const Layout& layout,
                                              const JointPlan* optimal_plan) {
  if (state.remaining.empty()) throw Error(ErrorKind::EmptyRemaining, "no task left to choose");
  const std::vector<TaskId> remaining(state.remaining.begin(), state.remaining.end());

  switch (spec_.kind) {
    case HumanKind::AlphaMix: {
      if (optimal_plan == nullptr) throw Error(ErrorKind::InvalidInput, "alpha_mix needs the optimal plan");
      const double u = uniform01(rng_);
      if (u < spec_.alpha) {
        if (optimal_plan->human_seq.empty()) return std::nullopt;
        return optimal_plan->human_seq.front();
      }
      const auto k = static_cast<std::size_t>(uniform01(rng_) * static_cast<double>(remaining.size()));
      return remaining[std::min(k, remaining.size() - 1)];
    }
    case HumanKind::BoltzmannChoice: {
      std::vector<double> weights;
      weights.reserve(remaining.size());
      double nearest = std::numeric_limits<double>::infinity();
      for (TaskId id : remaining) nearest = std::min(nearest, distance(state.human_pos, layout.task(id).location));
      double total = 0.0;
      for (TaskId id : remaining) {
        const double d = distance(state.human_pos, layout.task(id).location);
        weights.push_back(std::exp(-spec_.beta_choice * (d - nearest)));
        total += weights.back();
      }
      const double u = uniform01(rng_) * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < remaining.size(); ++i) {
        acc += weights[i];
        if (u < acc) return remaining[i];
      }
      return remaining.back();
    }
    case HumanKind::Scripted: {
      if (queue_.empty()) throw Error(ErrorKind::InvalidInput, "goal script exhausted");
      const TaskId next = queue_.front();
      queue_.pop_front();
      if (!state.remaining.contains(next)) {
        throw Error(ErrorKind::InvalidInput, "scripted goal " + std::to_string(to_int(next)) + " is not remaining");
      }
      return next;
    }
  }
  return std::nullopt;
}

Point Trajectory::operator()(double s) const {
  s = std::clamp(s, 0.0, 1.0);
  if (kind_ == TrajectoryKind::Straight) {
    return {start_.x + s * (goal_.x - start_.x), start_.y + s * (goal_.y - start_.y)};
  }
  const double a = (1.0 - s) * (1.0 - s);
  const double b = 2.0 * (1.0 - s) * s;
  const double c = s * s;
  return {a * start_.x + b * control_.x + c * goal_.x, a * start_.y + b * control_.y + c * goal_.y};
}

Point Trajectory::derivative(double s) const {
  if (kind_ == TrajectoryKind::Straight) return goal_ - start_;
  return 2.0 * (1.0 - s) * (control_ - start_) + 2.0 * s * (goal_ - control_);
}

Polyline Trajectory::to_polyline(int segments) const {
  if (kind_ == TrajectoryKind::Straight || segments <= 1) return Polyline::straight(start_, goal_);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(segments) + 1);
  pts.push_back(start_);
  for (int i = 1; i < segments; ++i) pts.push_back((*this)(static_cast<double>(i) / segments));
  pts.push_back(goal_);
  return Polyline(std::move(pts));
}

Trajectory make_trajectory(Point start, Point goal, const TrajectorySpec& spec, Rng* rng) {
  spec.validate();
  const Point mid{0.5 * (start.x + goal.x), 0.5 * (start.y + goal.y)};
  if (spec.kind == TrajectoryKind::Straight) return Trajectory(start, goal, mid, TrajectoryKind::Straight);

  const double len = distance(start, goal);
  Side side = spec.side;
  if (side == Side::SeededRandom) {
    if (rng == nullptr) throw Error(ErrorKind::InvalidInput, "seeded_random side needs a generator");
    side = uniform01(*rng) < 0.5 ? Side::Left : Side::Right;
  }
  Point normal{0.0, 0.0};
  if (len > 0.0) {
    normal = {-(goal.y - start.y) / len, (goal.x - start.x) / len};
    if (side == Side::Right) normal = -1.0 * normal;
  }
  const Point control = mid + (spec.curvature * len) * normal;
  return Trajectory(start, goal, control, TrajectoryKind::Bezier);
}

}  // namespace hrc
