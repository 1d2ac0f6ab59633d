#pragma once

#include <map>
#include <optional>
#include <vector>

#include "hrc/world.hpp"

namespace hrc {

struct JointPlan {
  std::vector<TaskId> human_seq;
  std::vector<TaskId> robot_seq;
  std::map<TaskId, double> completion_times;
  double makespan = 0.0;

  friend bool operator==(const JointPlan&, const JointPlan&) = default;
};

// A planning request from the current team state. Waiting agents are pinned
// to their joint task automatically; `pinned_human_first` forces the human's
// first task (the inferred or announced goal), `pinned_robot_first` forces
// the robot's first task (used when resolving a deadlock).
struct PlanQuery {
  const TeamState& state;
  const Layout& layout;
  std::optional<TaskId> pinned_human_first = std::nullopt;
  std::optional<TaskId> pinned_robot_first = std::nullopt;
};

struct ScheduleResult {
  std::map<TaskId, double> completion_times;
  double makespan = 0.0;
};

// Straight-line travel at the layout velocity. At a joint task the earlier
// agent waits for the later one; one-agent tasks complete on arrival.
// Throws Error(MalformedSequence) unless every remaining one-agent task is in
// exactly one sequence and every remaining joint task is in both, in the same
// relative order.
ScheduleResult schedule_makespan(const std::vector<TaskId>& human_seq,
                                 const std::vector<TaskId>& robot_seq, const TeamState& state,
                                 const Layout& layout);

struct SolveOptions {
  // Off turns the search into a plain exhaustive enumerator.
  bool prune = true;
};

// Exact min-makespan allocation and sequencing by depth-first branch and
// bound. Among equal-makespan optima the first one in search order wins:
// phase by phase (human block, then robot block, up to each rendezvous),
// options in ascending task id. Throws Error(NoTasks) on an empty state.
JointPlan solve(const PlanQuery& query, const SolveOptions& options = {});

inline constexpr std::size_t kEnumerationLimit = 8;

struct EnumeratedPlan {
  JointPlan plan;
  double makespan = 0.0;
};

// Every feasible plan honouring the query's pins, with its exact makespan.
// Throws Error(TooLarge) above kEnumerationLimit remaining tasks.
std::vector<EnumeratedPlan> enumerate_all(const PlanQuery& query);

// Makespans of the same plan set as enumerate_all, without materialising
// the plans.
std::vector<double> enumerate_makespans(const PlanQuery& query);

// 1-based rank of `time` among the distinct values of `all_times`
// (values within 1e-9 share a rank). A time that falls between values takes
// the rank of the next value at or above it; times beyond the largest value
// take the last rank.
int rank_of(double time, const std::vector<double>& all_times);

}  // namespace hrc
