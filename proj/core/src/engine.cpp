#include "hrc/engine.hpp"

#include <algorithm>

#include "hrc/error.hpp"

namespace hrc {

TrialEngine::TrialEngine(Layout layout, WorldConfig config)
    : layout_(std::move(layout)), config_(config), state_(initial_state(layout_)) {}

TrialEngine::TrialEngine(Layout layout, TeamState state, WorldConfig config)
    : layout_(std::move(layout)), config_(config), state_(std::move(state)) {}

bool TrialEngine::needs_human_goal() const {
  return !is_terminal(state_) && !state_.human_goal && !state_.human_waiting_at && !human_idle_;
}

void TrialEngine::set_human_idle() {
  if (state_.human_waiting_at) throw Error(ErrorKind::InvalidInput, "human is waiting");
  state_.human_goal.reset();
  human_path_ = Polyline();
  human_progress_ = 0.0;
  human_idle_ = true;
}

void TrialEngine::skip_tick() { close_tick(); }

void TrialEngine::set_human_goal(TaskId goal, Polyline path) {
  if (state_.human_waiting_at) {
    throw Error(ErrorKind::InvalidInput, "human is waiting and cannot leave");
  }
  if (!state_.remaining.contains(goal)) {
    throw Error(ErrorKind::InvalidInput, "goal " + std::to_string(to_int(goal)) + " is not remaining");
  }
  if (path.empty() || distance(path.start(), state_.human_pos) > 1e-9 ||
      distance(path.end(), layout_.task(goal).location) > 1e-9) {
    throw Error(ErrorKind::InvalidInput, "human path does not connect position and goal");
  }
  state_.human_goal = goal;
  human_idle_ = false;
  human_path_ = std::move(path);
  human_progress_ = 0.0;
}

void TrialEngine::set_robot_goal(std::optional<TaskId> goal) {
  if (goal && !state_.remaining.contains(*goal)) {
    throw Error(ErrorKind::InvalidInput, "goal " + std::to_string(to_int(*goal)) + " is not remaining");
  }
  if (state_.robot_waiting_at && goal != state_.robot_waiting_at) {
    throw Error(ErrorKind::InvalidInput, "robot is waiting and cannot leave");
  }
  state_.robot_goal = goal;
}

void TrialEngine::release_robot_wait() { state_.robot_waiting_at.reset(); }

bool TrialEngine::human_moving() const {
  return state_.human_goal && !state_.human_waiting_at && human_progress_ < human_path_.length();
}

bool TrialEngine::robot_moving() const {
  return state_.robot_goal && !state_.robot_waiting_at &&
         !(state_.robot_pos == layout_.task(*state_.robot_goal).location);
}

void TrialEngine::apply_captures(std::vector<CaptureEvent>& out) {
  CaptureResult r = resolve_captures(state_, layout_, config_.capture_radius, ticks_run_ + 1);
  const bool had_goal = state_.human_goal.has_value();
  state_ = std::move(r.state);
  if (had_goal && !state_.human_goal) {
    human_path_ = Polyline();
    human_progress_ = 0.0;
  }
  if (!r.events.empty()) human_idle_ = false;
  out.insert(out.end(), r.events.begin(), r.events.end());
}

void TrialEngine::close_tick() {
  if (moved_this_tick_) ++state_.elapsed_move_ticks;
  ++ticks_run_;
  clock_ = 0.0;
  moved_this_tick_ = false;
}

Advance TrialEngine::advance() {
  Advance out;
  out.human_from = out.human_to = state_.human_pos;
  out.human_goal = state_.human_goal;

  apply_captures(out.captures);
  if (!out.captures.empty()) {
    out.status = AdvanceStatus::Captured;
    if (is_terminal(state_) && clock_ > 0.0) {
      close_tick();
      out.tick_closed = true;
    }
    return out;
  }
  if (is_terminal(state_)) {
    if (clock_ > 0.0) {
      close_tick();
      out.tick_closed = true;
      out.status = AdvanceStatus::TickEnded;
      return out;
    }
    out.status = AdvanceStatus::Terminal;
    return out;
  }
  if (needs_human_goal()) {
    out.status = AdvanceStatus::AwaitingHumanGoal;
    return out;
  }

  const bool hm = human_moving();
  const bool rm = robot_moving();
  if (!hm && !rm) {
    out.status = AdvanceStatus::Stalled;
    return out;
  }

  const double v = layout_.velocity;
  const double rem = 1.0 - clock_;
  const double th = hm ? (human_path_.length() - human_progress_) / v : 0.0;
  const Point robot_target = rm ? layout_.task(*state_.robot_goal).location : state_.robot_pos;
  const double tr = rm ? distance(state_.robot_pos, robot_target) / v : 0.0;

  double dt = rem;
  if (hm) dt = std::min(dt, th);
  if (rm) dt = std::min(dt, tr);
  const bool human_arrives = hm && th == dt;
  const bool robot_arrives = rm && tr == dt;
  const bool tick_ends = dt == rem;

  if (hm) {
    human_progress_ = human_arrives ? human_path_.length() : human_progress_ + dt * v;
    state_.human_pos = human_path_.at(human_progress_);
  }
  if (rm) {
    state_.robot_pos = robot_arrives ? robot_target : step_agent(state_.robot_pos, robot_target, dt * v);
  }
  if (dt > 0.0) moved_this_tick_ = true;
  clock_ = tick_ends ? 1.0 : clock_ + dt;
  out.human_to = state_.human_pos;

  apply_captures(out.captures);
  if (tick_ends || is_terminal(state_)) {
    close_tick();
    out.tick_closed = true;
  }
  out.status = !out.captures.empty() ? AdvanceStatus::Captured
               : out.tick_closed     ? AdvanceStatus::TickEnded
                                     : AdvanceStatus::Moved;
  return out;
}

std::vector<CaptureEvent> TrialEngine::tick() {
  std::vector<CaptureEvent> events;
  for (;;) {
    Advance a = advance();
    events.insert(events.end(), a.captures.begin(), a.captures.end());
    if (a.tick_closed) return events;
    switch (a.status) {
      case AdvanceStatus::Terminal:
        return events;
      case AdvanceStatus::AwaitingHumanGoal:
        throw Error(ErrorKind::MissingGoal, "human has no goal while tasks remain");
      case AdvanceStatus::Stalled:
        close_tick();
        return events;
      case AdvanceStatus::Captured:
      case AdvanceStatus::Moved:
      case AdvanceStatus::TickEnded:
        break;
    }
  }
}

}  // namespace hrc
