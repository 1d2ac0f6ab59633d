#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hrc/path.hpp"
#include "hrc/world.hpp"

namespace hrc {

enum class AdvanceStatus {
  Captured,           // at least one capture happened; the tick may still be open
  Moved,              // an agent arrived somewhere mid-tick without capturing
  TickEnded,          // the tick closed without captures
  AwaitingHumanGoal,  // clock paused until the human picks a task
  Stalled,            // nobody can move and no decision is pending
  Terminal,
};

struct Advance {
  AdvanceStatus status = AdvanceStatus::TickEnded;
  std::vector<CaptureEvent> captures;
  bool tick_closed = false;
  // Human motion covered by this call.
  Point human_from;
  Point human_to;
  std::optional<TaskId> human_goal;
};

// Tick-level world simulation. A tick is one unit of time in which every
// moving agent covers `velocity` length units. Arrivals inside a tick are
// processed at their exact moment: the engine stops, reports the captures,
// and lets the caller hand out new goals before spending the rest of the tick.
// The timer counts ticks in which at least one agent moved.
class TrialEngine {
 public:
  explicit TrialEngine(Layout layout, WorldConfig config = {});
  TrialEngine(Layout layout, TeamState state, WorldConfig config = {});

  const Layout& layout() const { return layout_; }
  const TeamState& state() const { return state_; }
  const WorldConfig& config() const { return config_; }

  // Ticks closed so far, whether or not anything moved in them.
  std::int64_t ticks_run() const { return ticks_run_; }
  double tick_clock() const { return clock_; }
  bool moved_this_tick() const { return moved_this_tick_; }
  bool needs_human_goal() const;
  const Polyline& human_path() const { return human_path_; }
  double human_progress() const { return human_progress_; }

  // `path` must start at the human's position and end on the task location.
  void set_human_goal(TaskId goal, Polyline path);
  void set_robot_goal(std::optional<TaskId> goal);
  void release_robot_wait();
  // The human stays put without a goal until the next capture.
  void set_human_idle();
  bool human_idle() const { return human_idle_; }
  // Ends an idle spell early so the human decides again.
  void wake_human() { human_idle_ = false; }
  // Closes the current tick without motion; used when Stalled.
  void skip_tick();

  Advance advance();

  // Runs a whole tick. Throws Error(MissingGoal) when the human needs a
  // decision before the tick is over.
  std::vector<CaptureEvent> tick();

 private:
  bool human_moving() const;
  bool robot_moving() const;
  void apply_captures(std::vector<CaptureEvent>& out);
  void close_tick();

  Layout layout_;
  WorldConfig config_;
  TeamState state_;
  Polyline human_path_;
  double human_progress_ = 0.0;
  double clock_ = 0.0;
  bool moved_this_tick_ = false;
  bool human_idle_ = false;
  std::int64_t ticks_run_ = 0;
};

}  // namespace hrc
