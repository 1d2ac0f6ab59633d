#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hrc/inference.hpp"
#include "hrc/planner.hpp"
#include "hrc/world.hpp"

namespace hrc {

enum class PolicyKind { Fixed, Reactive, PredictiveOracle, PredictiveBayes };

const char* to_string(PolicyKind kind);
PolicyKind policy_kind_from_string(const std::string& s);
inline constexpr PolicyKind kAllPolicies[] = {PolicyKind::Fixed, PolicyKind::Reactive,
                                              PolicyKind::PredictiveOracle, PolicyKind::PredictiveBayes};

struct ReplanEvent {
  std::int64_t tick = 0;
  std::string reason;  // "human_completion", "oracle_deviation", "map_deviation", "deadlock"

  friend bool operator==(const ReplanEvent&, const ReplanEvent&) = default;
};

struct PolicyOptions {
  InferenceParams inference;
  // Minimum posterior mass on the MAP goal before a Bayesian re-plan; 0 is plain MAP.
  double confidence_gate = 0.0;

  friend bool operator==(const PolicyOptions&, const PolicyOptions&) = default;
};

// Robot side of the collaboration. The controller keeps an internal joint
// plan; the robot always heads for the first task of its own sequence.
//   Fixed:             never re-plans except to resolve a deadlock; captures
//                      are spliced out of its sequences.
//   Reactive:          re-plans from scratch whenever the human completes a task.
//   PredictiveOracle:  additionally re-plans, pinning the human's first task,
//                      as soon as the human announces a different goal.
//   PredictiveBayes:   additionally tracks a posterior over the human's goal and
//                      re-plans when its MAP estimate leaves the plan.
class RobotController {
 public:
  static RobotController init(PolicyKind kind, const TeamState& state, const Layout& layout,
                              PolicyOptions options = {});

  PolicyKind kind() const { return kind_; }
  const JointPlan& plan() const { return plan_; }
  const std::optional<Belief>& belief() const { return belief_; }
  const std::vector<ReplanEvent>& replan_log() const { return replan_log_; }
  const PolicyOptions& options() const { return options_; }
  std::optional<TaskId> robot_goal() const;
  std::optional<TaskId> planned_human_first() const;
  std::int64_t solve_calls() const { return solve_calls_; }

  // Oracle only: the human just committed to `true_goal`.
  void on_human_goal_public(TaskId true_goal, const TeamState& state, const Layout& layout,
                            std::int64_t tick);

  // Bayes only: the human moved h_prev -> h_next inside one goal episode,
  // taking `step_time` ticks.
  void on_tick_observation(Point h_prev, Point h_next, const TeamState& state, const Layout& layout,
                           std::int64_t tick, double step_time = 1.0);

  // Splices captured tasks out of the plan, then runs on_human_task_complete
  // if the human took part in any capture. `state` is the post-capture state.
  void on_captures(const std::vector<CaptureEvent>& events, const TeamState& state,
                   const Layout& layout, std::int64_t tick);

  void on_human_task_complete(const TeamState& state, const Layout& layout, std::int64_t tick);

  // Both agents wait at different joint tasks: the robot abandons its own and
  // heads for the human's, which becomes the first task for both.
  void resolve_deadlock(const TeamState& state, const Layout& layout, std::int64_t tick);

  friend bool operator==(const RobotController&, const RobotController&) = default;

 private:
  RobotController() = default;

  JointPlan replan(const PlanQuery& query);
  void adopt(JointPlan plan, std::int64_t tick, const char* reason, bool log_only_if_changed);
  void splice(const std::vector<CaptureEvent>& events, const TeamState& state, const Layout& layout);

  PolicyKind kind_ = PolicyKind::Fixed;
  PolicyOptions options_;
  JointPlan plan_;
  std::optional<Belief> belief_;
  std::vector<ReplanEvent> replan_log_;
  std::int64_t solve_calls_ = 0;
};

}  // namespace hrc
