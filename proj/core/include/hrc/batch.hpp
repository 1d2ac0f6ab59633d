#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hrc/human.hpp"
#include "hrc/policies.hpp"
#include "hrc/stats.hpp"
#include "hrc/trial.hpp"

namespace hrc {

struct BatchConfig {
  std::vector<Layout> layouts;
  std::vector<PolicyKind> policies;
  HumanModelSpec human;
  int rollouts = 1;
  std::uint64_t seed = 0;
  std::filesystem::path output;  // empty: no files
  PolicyOptions options;
  WorldConfig world;
  unsigned threads = 0;
  bool write_traces = false;

  void validate() const;
};

// JSON object with "layouts" (paths relative to the config file), "policies",
// "human_model", "rollouts", "seed", "output" and optionally "inference",
// "confidence_gate", "capture_radius", "threads", "write_traces".
// Throws Error(InvalidInput) or Error(Io).
BatchConfig load_batch_config(const std::filesystem::path& file);
BatchConfig parse_batch_config(const std::string& text, const std::filesystem::path& base_dir);

struct TrialRow {
  std::size_t layout_index = 0;
  std::string layout;
  PolicyKind policy = PolicyKind::Fixed;
  int rollout = 0;
  std::uint64_t seed = 0;
  std::int64_t completion_time = 0;
  double optimal_makespan = 0.0;
  int robot_one_agent_count = 0;
  int simultaneous_count = 0;
  std::optional<double> inference_error_rate;
  int replans = 0;
  double max_belief_norm_error = 0.0;
};

struct AggregateRow {
  PolicyKind policy = PolicyKind::Fixed;
  std::size_t trials = 0;
  Interval completion_time;
  Interval robot_one_agent_count;
  std::optional<Interval> inference_error_rate;
};

struct BatchResult {
  std::vector<TrialRow> rows;  // (layout, policy, rollout) order
  std::vector<AggregateRow> aggregates;
};

// Trial seed of a cell; shared by all policies so that comparisons are paired.
std::uint64_t cell_seed(std::uint64_t master, std::size_t layout_index, int rollout);

TrialRow make_row(const TrialRecord& record, std::size_t layout_index, int rollout);
std::vector<AggregateRow> aggregate(const std::vector<TrialRow>& rows, const std::vector<PolicyKind>& policies,
                                    std::uint64_t seed);

// Runs every cell and, when an output directory is set, writes trials.csv,
// aggregate.csv and optionally traces/. A ".partial" marker stays behind
// when writing fails.
BatchResult run_batch(const BatchConfig& config);

void write_trials_csv(std::ostream& out, const std::vector<TrialRow>& rows);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

}  // namespace hrc
