#include "hrc/world.hpp"

#include <algorithm>
#include <cmath>

#include "hrc/error.hpp"

namespace hrc {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingGoal: return "MissingGoal";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::DegenerateBelief: return "DegenerateBelief";
    case ErrorKind::EmptySupport: return "EmptySupport";
    case ErrorKind::MalformedSequence: return "MalformedSequence";
    case ErrorKind::NoTasks: return "NoTasks";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::WrongPolicy: return "WrongPolicy";
    case ErrorKind::EmptyRemaining: return "EmptyRemaining";
    case ErrorKind::PackingFailure: return "PackingFailure";
    case ErrorKind::NonTermination: return "NonTermination";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

const char* to_string(TaskKind kind) {
  return kind == TaskKind::Joint ? "joint" : "one_agent";
}

const char* to_string(Completer who) {
  switch (who) {
    case Completer::Human: return "human";
    case Completer::Robot: return "robot";
    case Completer::Both: return "both";
  }
  return "unknown";
}

const Task* Layout::find(TaskId id) const {
  auto it = std::find_if(tasks.begin(), tasks.end(), [id](const Task& t) { return t.id == id; });
  return it == tasks.end() ? nullptr : &*it;
}

const Task& Layout::task(TaskId id) const {
  const Task* t = find(id);
  if (t == nullptr) {
    throw Error(ErrorKind::InvalidInput, "unknown task id " + std::to_string(to_int(id)));
  }
  return *t;
}

std::size_t Layout::index_of(TaskId id) const {
  return static_cast<std::size_t>(&task(id) - tasks.data());
}

std::size_t Layout::one_agent_count() const {
  return static_cast<std::size_t>(std::count_if(
      tasks.begin(), tasks.end(), [](const Task& t) { return t.kind == TaskKind::OneAgent; }));
}

std::size_t Layout::joint_count() const { return tasks.size() - one_agent_count(); }

void Layout::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorKind::InvalidInput, why); };
  if (tasks.empty()) fail("layout has no tasks");
  if (!(velocity > 0.0) || !std::isfinite(velocity)) fail("velocity must be positive");
  if (!(domain.x_max > domain.x_min) || !(domain.y_max > domain.y_min)) fail("empty domain");
  if (!is_finite(human_start) || !domain.contains(human_start)) fail("human_start outside domain");
  if (!is_finite(robot_start) || !domain.contains(robot_start)) fail("robot_start outside domain");
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const Task& t = tasks[i];
    if (!is_finite(t.location) || !domain.contains(t.location)) {
      fail("task " + std::to_string(to_int(t.id)) + " outside domain");
    }
    if (t.location == human_start || t.location == robot_start) {
      fail("task " + std::to_string(to_int(t.id)) + " placed on a start position");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (tasks[j].id == t.id) fail("duplicate task id " + std::to_string(to_int(t.id)));
      if (tasks[j].location == t.location) fail("two tasks share a location");
    }
  }
}

TeamState initial_state(const Layout& layout) {
  TeamState s;
  s.human_pos = layout.human_start;
  s.robot_pos = layout.robot_start;
  for (const Task& t : layout.tasks) s.remaining.insert(t.id);
  return s;
}

Point step_agent(Point pos, Point goal, double speed) {
  const double d = distance(pos, goal);
  if (d <= speed) return goal;
  const double f = speed / d;
  return {pos.x + f * (goal.x - pos.x), pos.y + f * (goal.y - pos.y)};
}

CaptureResult resolve_captures(const TeamState& state, const Layout& layout,
                               double capture_radius, std::int64_t tick) {
  CaptureResult out{state, {}};
  TeamState& s = out.state;

  std::vector<TaskId> removed;
  for (TaskId id : state.remaining) {
    const Task& t = layout.task(id);
    const bool human_in = distance(s.human_pos, t.location) <= capture_radius;
    const bool robot_in = distance(s.robot_pos, t.location) <= capture_radius;
    if (!human_in && !robot_in) continue;

    if (t.kind == TaskKind::OneAgent) {
      const Completer who = human_in && robot_in ? Completer::Both
                            : human_in           ? Completer::Human
                                                 : Completer::Robot;
      out.events.push_back({tick, id, who});
      removed.push_back(id);
    } else if (human_in && robot_in) {
      out.events.push_back({tick, id, Completer::Both});
      removed.push_back(id);
    } else if (human_in && s.human_goal == id) {
      s.human_waiting_at = id;
    } else if (robot_in && s.robot_goal == id) {
      s.robot_waiting_at = id;
    }
  }

  for (TaskId id : removed) {
    s.remaining.erase(id);
    if (s.human_goal == id) s.human_goal.reset();
    if (s.robot_goal == id) s.robot_goal.reset();
    if (s.human_waiting_at == id) s.human_waiting_at.reset();
    if (s.robot_waiting_at == id) s.robot_waiting_at.reset();
  }
  return out;
}

bool is_terminal(const TeamState& state) { return state.remaining.empty(); }

}  // namespace hrc
