#include "hrc/policies.hpp"

#include <algorithm>

#include "hrc/error.hpp"

namespace hrc {

const char* to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Fixed: return "fixed";
    case PolicyKind::Reactive: return "reactive";
    case PolicyKind::PredictiveOracle: return "predictive_oracle";
    case PolicyKind::PredictiveBayes: return "predictive_bayes";
  }
  return "unknown";
}

PolicyKind policy_kind_from_string(const std::string& s) {
  for (PolicyKind k : kAllPolicies) {
    if (s == to_string(k)) return k;
  }
  throw Error(ErrorKind::InvalidInput, "unknown policy '" + s + "'");
}

RobotController RobotController::init(PolicyKind kind, const TeamState& state, const Layout& layout,
                                      PolicyOptions options) {
  options.inference.validate();
  RobotController c;
  c.kind_ = kind;
  c.options_ = options;
  c.plan_ = c.replan({state, layout});
  if (kind == PolicyKind::PredictiveBayes) c.belief_ = reset_prior(state.remaining);
  return c;
}

std::optional<TaskId> RobotController::robot_goal() const {
  if (plan_.robot_seq.empty()) return std::nullopt;
  return plan_.robot_seq.front();
}

std::optional<TaskId> RobotController::planned_human_first() const {
  if (plan_.human_seq.empty()) return std::nullopt;
  return plan_.human_seq.front();
}

JointPlan RobotController::replan(const PlanQuery& query) {
  ++solve_calls_;
  return solve(query);
}

void RobotController::adopt(JointPlan plan, std::int64_t tick, const char* reason,
                            bool log_only_if_changed) {
  const bool changed = plan.human_seq != plan_.human_seq || plan.robot_seq != plan_.robot_seq;
  plan_ = std::move(plan);
  if (changed || !log_only_if_changed) replan_log_.push_back({tick, reason});
}

void RobotController::on_human_goal_public(TaskId true_goal, const TeamState& state,
                                           const Layout& layout, std::int64_t tick) {
  if (kind_ != PolicyKind::PredictiveOracle) {
    throw Error(ErrorKind::WrongPolicy, "goal announcements are only used by the oracle robot");
  }
  if (!state.remaining.contains(true_goal)) {
    throw Error(ErrorKind::InvalidInput, "announced goal is not remaining");
  }
  if (planned_human_first() == true_goal) return;
  adopt(replan({state, layout, true_goal}), tick, "oracle_deviation", true);
}

void RobotController::on_tick_observation(Point h_prev, Point h_next, const TeamState& state,
                                          const Layout& layout, std::int64_t tick, double step_time) {
  if (kind_ != PolicyKind::PredictiveBayes) {
    throw Error(ErrorKind::WrongPolicy, "motion observations are only used by the Bayesian robot");
  }
  if (is_terminal(state)) return;
  Belief b = restrict_support(*belief_, state.remaining);
  belief_ = posterior_update(b, h_prev, h_next, layout, options_.inference, step_time);
  const TaskId guess = map_goal(*belief_);
  if (belief_->max_prob() < options_.confidence_gate) return;
  if (planned_human_first() == guess) return;
  adopt(replan({state, layout, guess}), tick, "map_deviation", true);
}

void RobotController::splice(const std::vector<CaptureEvent>& events, const TeamState& state,
                             const Layout& layout) {
  bool touched = false;
  for (const CaptureEvent& e : events) {
    auto drop = [&](std::vector<TaskId>& seq) {
      auto it = std::remove(seq.begin(), seq.end(), e.task_id);
      touched |= it != seq.end();
      seq.erase(it, seq.end());
    };
    drop(plan_.human_seq);
    drop(plan_.robot_seq);
  }
  if (!touched || is_terminal(state)) {
    if (is_terminal(state)) plan_ = JointPlan{};
    return;
  }
  ScheduleResult s = schedule_makespan(plan_.human_seq, plan_.robot_seq, state, layout);
  plan_.completion_times = std::move(s.completion_times);
  plan_.makespan = s.makespan;
}

void RobotController::on_captures(const std::vector<CaptureEvent>& events, const TeamState& state,
                                  const Layout& layout, std::int64_t tick) {
  if (events.empty()) return;
  splice(events, state, layout);
  if (belief_ && !is_terminal(state)) belief_ = restrict_support(*belief_, state.remaining);
  const bool human_done = std::any_of(events.begin(), events.end(), [](const CaptureEvent& e) {
    return e.completed_by != Completer::Robot;
  });
  if (human_done) on_human_task_complete(state, layout, tick);
}

void RobotController::on_human_task_complete(const TeamState& state, const Layout& layout,
                                             std::int64_t tick) {
  if (is_terminal(state)) {
    plan_ = JointPlan{};
    belief_.reset();
    return;
  }
  if (kind_ == PolicyKind::Fixed) return;
  adopt(replan({state, layout}), tick, "human_completion", false);
  if (kind_ == PolicyKind::PredictiveBayes) belief_ = reset_prior(state.remaining);
}

void RobotController::resolve_deadlock(const TeamState& state, const Layout& layout,
                                       std::int64_t tick) {
  if (!state.human_waiting_at || !state.robot_waiting_at ||
      *state.human_waiting_at == *state.robot_waiting_at) {
    return;
  }
  TeamState released = state;
  released.robot_waiting_at.reset();
  released.robot_goal = state.human_waiting_at;
  const TaskId target = *state.human_waiting_at;
  adopt(replan({released, layout, std::nullopt, target}), tick, "deadlock", false);
}

}  // namespace hrc
