#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hrc/engine.hpp"
#include "hrc/human.hpp"
#include "hrc/policies.hpp"
#include "hrc/world.hpp"

namespace hrc {

struct TrialSetup {
  Layout layout;
  PolicyKind policy = PolicyKind::Reactive;
  HumanModelSpec human;
  std::uint64_t seed = 0;
  PolicyOptions options;
  WorldConfig world;

  friend bool operator==(const TrialSetup& a, const TrialSetup& b) {
    return a.layout == b.layout && a.policy == b.policy && a.human == b.human && a.seed == b.seed &&
           a.options == b.options && a.world.capture_radius == b.world.capture_radius;
  }
};

// Snapshot at the close of one tick.
struct TickRecord {
  std::int64_t tick = 0;
  std::int64_t elapsed = 0;
  Point human;
  Point robot;
  std::optional<TaskId> human_goal;
  std::optional<TaskId> robot_goal;
  std::optional<TaskId> human_waiting;
  std::optional<TaskId> robot_waiting;
  std::vector<TaskId> remaining;
  bool human_moved = false;
  std::optional<TaskId> map_goal;  // Bayes trials only
  std::optional<double> map_prob;
  std::vector<CaptureEvent> captures;

  friend bool operator==(const TickRecord&, const TickRecord&) = default;
};

struct HumanChoice {
  std::int64_t tick = 0;
  std::optional<TaskId> goal;  // nullopt: stayed put

  friend bool operator==(const HumanChoice&, const HumanChoice&) = default;
};

struct TrialRecord {
  TrialSetup setup;
  double optimal_makespan = 0.0;
  std::vector<TickRecord> ticks;
  std::vector<CaptureEvent> captures;
  std::vector<ReplanEvent> replans;
  std::vector<HumanChoice> human_choices;
  std::int64_t completion_time = 0;
  int robot_one_agent_count = 0;
  int simultaneous_count = 0;
  std::optional<double> inference_error_rate;
  double max_belief_norm_error = 0.0;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

// One trial under way: engine, robot controller, and the bookkeeping for the
// record. The human side is driven from outside (a simulated model or a
// live player) through submit_human_goal.
class ClosedLoop {
 public:
  explicit ClosedLoop(TrialSetup setup);

  const TrialSetup& setup() const { return setup_; }
  const TrialEngine& engine() const { return engine_; }
  const TeamState& state() const { return engine_.state(); }
  const RobotController& controller() const { return controller_; }
  double optimal_makespan() const { return optimal_makespan_; }

  bool done() const { return is_terminal(engine_.state()) && engine_.tick_clock() == 0.0; }
  bool awaiting_human_goal() const { return engine_.needs_human_goal(); }

  // Unpinned optimum from the current state (what an optimal human follows).
  JointPlan optimal_plan() const;

  // nullopt leaves the human standing until the next capture.
  void submit_human_goal(std::optional<TaskId> goal);

  struct Step {
    AdvanceStatus status = AdvanceStatus::TickEnded;
    std::vector<CaptureEvent> captures;
    std::size_t new_replans = 0;
    bool tick_closed = false;
  };
  // One engine advance followed by the robot's reactions. Stalled ticks are
  // closed without motion.
  Step step();

  // Plays until the tick closes or a human decision is needed.
  Step run_tick();

  TrialRecord finish() const;
  const std::vector<TickRecord>& ticks() const { return ticks_; }

 private:
  void sync_robot();
  void check_deadlock(std::int64_t tick);
  void record_tick();

  TrialSetup setup_;
  TrialEngine engine_;
  RobotController controller_;
  Rng trajectory_rng_;
  double optimal_makespan_ = 0.0;

  std::vector<TickRecord> ticks_;
  std::vector<CaptureEvent> captures_;
  std::vector<CaptureEvent> open_captures_;
  std::vector<HumanChoice> choices_;
  bool human_moved_ = false;
  Point obs_origin_;
  double obs_origin_clock_ = 0.0;
  double max_norm_error_ = 0.0;
};

// Runs a simulated human against the robot until the trial ends.
// Throws Error(NonTermination) when more than max(100 * optimal makespan, 100)
// ticks pass.
TrialRecord run_trial(const TrialSetup& setup);

// Seed stream of the simulated human for a trial seed.
std::uint64_t human_stream_seed(const TrialSetup& setup);

// Fraction of human-moving ticks, with the human still on its way at the
// close, in which the MAP estimate differed from the human's goal.
// Throws Error(NotApplicable) for non-Bayes trials or when no tick qualifies.
double inference_error_rate(const TrialRecord& record);

// (one-agent tasks captured by the robot alone, simultaneous captures).
std::pair<int, int> robot_task_share(const TrialRecord& record);

// Line-delimited trace: a header with the full setup, one line per tick,
// and a summary line.
void write_trace(std::ostream& out, const TrialRecord& record);
std::string trace_string(const TrialRecord& record);
TrialRecord read_trace(std::istream& in);
TrialRecord load_trace(const std::filesystem::path& file);
void save_trace(const std::filesystem::path& file, const TrialRecord& record);

// Re-simulates the recorded setup. The setup of a live trial carries the
// player's goals as a script.
TrialRecord replay(const TrialRecord& record);

}  // namespace hrc
