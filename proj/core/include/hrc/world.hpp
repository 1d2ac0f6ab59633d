#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hrc/geometry.hpp"

namespace hrc {

enum class TaskId : std::int32_t {};

constexpr std::int32_t to_int(TaskId id) { return static_cast<std::int32_t>(id); }
constexpr TaskId task_id(std::int32_t v) { return static_cast<TaskId>(v); }

enum class TaskKind { OneAgent, Joint };

enum class Agent { Human, Robot };

enum class Completer { Human, Robot, Both };

const char* to_string(TaskKind kind);
const char* to_string(Completer who);

struct Task {
  TaskId id{};
  Point location;
  TaskKind kind = TaskKind::OneAgent;

  friend bool operator==(const Task&, const Task&) = default;
};

// Immutable definition of one trial.
struct Layout {
  std::string name;
  Rect domain;
  double velocity = 1.0;
  Point human_start;
  Point robot_start;
  std::vector<Task> tasks;

  const Task& task(TaskId id) const;
  const Task* find(TaskId id) const;
  std::size_t index_of(TaskId id) const;
  std::size_t one_agent_count() const;
  std::size_t joint_count() const;

  // Throws Error(InvalidInput) when an invariant does not hold.
  void validate() const;

  friend bool operator==(const Layout&, const Layout&) = default;
};

using TaskSet = std::set<TaskId>;

struct TeamState {
  Point human_pos;
  Point robot_pos;
  TaskSet remaining;
  std::optional<TaskId> human_waiting_at;
  std::optional<TaskId> robot_waiting_at;
  std::optional<TaskId> human_goal;
  std::optional<TaskId> robot_goal;
  std::int64_t elapsed_move_ticks = 0;

  Point pos(Agent a) const { return a == Agent::Human ? human_pos : robot_pos; }
  const std::optional<TaskId>& waiting_at(Agent a) const {
    return a == Agent::Human ? human_waiting_at : robot_waiting_at;
  }
  const std::optional<TaskId>& goal(Agent a) const {
    return a == Agent::Human ? human_goal : robot_goal;
  }

  friend bool operator==(const TeamState&, const TeamState&) = default;
};

struct CaptureEvent {
  std::int64_t tick = 0;
  TaskId task_id{};
  Completer completed_by = Completer::Human;

  friend bool operator==(const CaptureEvent&, const CaptureEvent&) = default;
};

struct CaptureResult {
  TeamState state;
  std::vector<CaptureEvent> events;
};

struct WorldConfig {
  double capture_radius = 0.25;
};

TeamState initial_state(const Layout& layout);

Point step_agent(Point pos, Point goal, double speed);

// One-agent tasks within the radius of an agent are removed. An agent that
// reaches the joint task it is heading for while the partner is away starts
// waiting there; the joint task is removed once both agents are in range.
// Goals and waiting flags that refer to removed tasks are cleared.
CaptureResult resolve_captures(const TeamState& state, const Layout& layout,
                               double capture_radius, std::int64_t tick = 0);

bool is_terminal(const TeamState& state);

}  // namespace hrc
