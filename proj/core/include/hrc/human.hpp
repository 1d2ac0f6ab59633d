#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "hrc/path.hpp"
#include "hrc/planner.hpp"
#include "hrc/random.hpp"
#include "hrc/world.hpp"

namespace hrc {

enum class HumanKind { AlphaMix, BoltzmannChoice, Scripted };
enum class TrajectoryKind { Straight, Bezier };
enum class Side { Left, Right, SeededRandom };

const char* to_string(HumanKind kind);
const char* to_string(TrajectoryKind kind);
const char* to_string(Side side);
HumanKind human_kind_from_string(const std::string& s);
TrajectoryKind trajectory_kind_from_string(const std::string& s);
Side side_from_string(const std::string& s);

struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::Bezier;
  double curvature = 0.25;  // control-point offset as a fraction of the leg length
  Side side = Side::SeededRandom;

  void validate() const;
  friend bool operator==(const TrajectorySpec&, const TrajectorySpec&) = default;
};

struct HumanModelSpec {
  HumanKind kind = HumanKind::BoltzmannChoice;
  double alpha = 1.0;          // AlphaMix: probability of the optimal choice
  double beta_choice = 1.05;   // BoltzmannChoice: weight exp(-beta * distance)
  std::vector<TaskId> script;  // Scripted: goals in order
  std::uint64_t rng_seed = 0;
  TrajectorySpec trajectory;

  void validate() const;
  friend bool operator==(const HumanModelSpec&, const HumanModelSpec&) = default;
};

// Simulated decision maker for the human avatar.
class HumanModel {
 public:
  explicit HumanModel(HumanModelSpec spec);

  const HumanModelSpec& spec() const { return spec_; }
  bool needs_optimal_plan() const { return spec_.kind == HumanKind::AlphaMix; }

  // Next task for the human, or nullopt to stay put. AlphaMix stays put only
  // when it takes the optimal branch and the optimal plan has nothing left
  // for the human. `optimal_plan` is required for AlphaMix only.
  // Throws Error(EmptyRemaining) when no task is left.
  std::optional<TaskId> choose_goal(const TeamState& state, const Layout& layout,
                                    const JointPlan* optimal_plan);

 private:
  HumanModelSpec spec_;
  Rng rng_;
  std::deque<TaskId> queue_;
};

// Path of the human avatar from `start` to `goal`, parameterised by s in [0,1].
class Trajectory {
 public:
  Trajectory(Point start, Point goal, Point control, TrajectoryKind kind)
      : start_(start), goal_(goal), control_(control), kind_(kind) {}

  Point operator()(double s) const;
  // Heading derivative d/ds at s.
  Point derivative(double s) const;
  Point control() const { return control_; }
  TrajectoryKind kind() const { return kind_; }

  // Arc-length approximation: straight legs stay one segment, curves use
  // `segments` chords.
  Polyline to_polyline(int segments = 64) const;

 private:
  Point start_;
  Point goal_;
  Point control_;
  TrajectoryKind kind_;
};

// Straight: linear interpolation. Bezier: quadratic curve whose control point
// sits `curvature * |goal - start|` off the midpoint on the chosen side.
// SeededRandom draws the side from `rng`, which must then be non-null.
Trajectory make_trajectory(Point start, Point goal, const TrajectorySpec& spec, Rng* rng = nullptr);

}  // namespace hrc
