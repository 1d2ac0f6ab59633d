#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hrc/batch.hpp"
#include "hrc/error.hpp"
#include "hrc/layout_gen.hpp"
#include "hrc/layout_io.hpp"
#include "hrc/trial.hpp"
#include "support.hpp"

using namespace hrc;
using hrc::testing::make_layout;
using hrc::testing::T;
namespace fs = std::filesystem;

namespace {

TrialSetup setup_for(PolicyKind policy, std::uint64_t seed, int n_one = 4, int m_joint = 1) {
  TrialSetup s;
  s.layout = random_layout(n_one, m_joint, seed);
  s.policy = policy;
  s.seed = seed;
  return s;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hrc_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TickRecord moving_tick(std::int64_t k, TaskId goal, TaskId map) {
  TickRecord t;
  t.tick = k;
  t.elapsed = k;
  t.human_moved = true;
  t.human_goal = goal;
  t.map_goal = map;
  t.map_prob = 0.9;
  return t;
}

}  // namespace

TEST(RunTrial, OptimalHumanWithOracleFinishesOnTime) {
  TrialSetup s = setup_for(PolicyKind::PredictiveOracle, 7, 4, 2);
  s.human.kind = HumanKind::AlphaMix;
  s.human.alpha = 1.0;
  s.human.trajectory.kind = TrajectoryKind::Straight;
  const TrialRecord r = run_trial(s);
  EXPECT_LE(std::abs(static_cast<double>(r.completion_time) - r.optimal_makespan), 1.0);
}

TEST(RunTrial, Deterministic) {
  for (PolicyKind k : kAllPolicies) {
    const TrialSetup s = setup_for(k, 42);
    const TrialRecord a = run_trial(s);
    const TrialRecord b = run_trial(s);
    EXPECT_EQ(a, b);
    EXPECT_EQ(trace_string(a), trace_string(b));
  }
}

TEST(RunTrial, FixedRobotDeadlockIsResolvedOnce) {
  // The plan sends both agents to J1 first; the scripted human heads for J2.
  TrialSetup s;
  s.layout = make_layout({0, 0}, {20, 0}, {{0, 3, 0, TaskKind::Joint}, {1, 18, 0, TaskKind::Joint}});
  s.policy = PolicyKind::Fixed;
  s.human.kind = HumanKind::Scripted;
  s.human.script = {T(1), T(0)};
  s.human.trajectory.kind = TrajectoryKind::Straight;
  ASSERT_EQ(solve({initial_state(s.layout), s.layout}).robot_seq.front(), T(0));
  const TrialRecord r = run_trial(s);
  ASSERT_EQ(r.replans.size(), 1u);
  EXPECT_EQ(r.replans.front(), (ReplanEvent{18, "deadlock"}));
  // 18 ticks to the split, 15 for the robot to join, 15 back together.
  EXPECT_EQ(r.completion_time, 48);
  ASSERT_EQ(r.captures.size(), 2u);
  EXPECT_EQ(r.captures[0], (CaptureEvent{33, T(1), Completer::Both}));
  EXPECT_EQ(r.captures[1], (CaptureEvent{48, T(0), Completer::Both}));
}

TEST(RunTrial, IdleOptimalHumanAndFixedRobotNeverFinish) {
  TrialSetup s;
  s.layout = random_layout(4, 1, 99);
  s.policy = PolicyKind::Fixed;
  s.human.kind = HumanKind::AlphaMix;
  s.human.alpha = 1.0;
  s.human.trajectory.kind = TrajectoryKind::Straight;
  s.seed = 99;
  try {
    run_trial(s);
    FAIL() << "expected NonTermination";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonTermination);
  }
}

TEST(RunTrial, MetricsFollowFromTheTrace) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    for (PolicyKind k : kAllPolicies) {
      const TrialRecord r = run_trial(setup_for(k, 300 + seed, 3 + static_cast<int>(seed % 3), 1));
      ASSERT_FALSE(r.ticks.empty());
      EXPECT_EQ(r.completion_time, r.ticks.back().elapsed);
      EXPECT_TRUE(r.ticks.back().remaining.empty());
      std::vector<CaptureEvent> from_ticks;
      for (const auto& t : r.ticks) from_ticks.insert(from_ticks.end(), t.captures.begin(), t.captures.end());
      EXPECT_EQ(from_ticks, r.captures);
      EXPECT_EQ(r.captures.size(), r.setup.layout.tasks.size());
      const auto [robot, both] = robot_task_share(r);
      EXPECT_EQ(robot, r.robot_one_agent_count);
      EXPECT_EQ(both, r.simultaneous_count);
      if (k == PolicyKind::PredictiveBayes) {
        ASSERT_TRUE(r.inference_error_rate.has_value());
        EXPECT_EQ(*r.inference_error_rate, inference_error_rate(r));
        EXPECT_LE(r.max_belief_norm_error, 1e-9);
      } else {
        EXPECT_FALSE(r.inference_error_rate.has_value());
      }
    }
  }
}

TEST(ErrorRate, StraightHumanWithSharpBetaIsMostlyRight) {
  std::vector<double> rates;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    TrialSetup s = setup_for(PolicyKind::PredictiveBayes, 700 + seed);
    s.human.trajectory.kind = TrajectoryKind::Straight;
    s.options.inference.beta = 5.0;
    rates.push_back(inference_error_rate(run_trial(s)));
  }
  EXPECT_LE(mean(rates), 0.1);
}

TEST(ErrorRate, AllWrongTicksGiveOne) {
  TrialRecord r;
  r.setup.policy = PolicyKind::PredictiveBayes;
  for (int k = 1; k <= 5; ++k) r.ticks.push_back(moving_tick(k, T(0), T(1)));
  EXPECT_DOUBLE_EQ(inference_error_rate(r), 1.0);
  r.ticks[2].map_goal = T(0);
  EXPECT_DOUBLE_EQ(inference_error_rate(r), 0.8);
}

TEST(ErrorRate, WaitingAndDecisionTicksAreExcluded) {
  TrialRecord r;
  r.setup.policy = PolicyKind::PredictiveBayes;
  r.ticks.push_back(moving_tick(1, T(0), T(0)));
  TickRecord waiting = moving_tick(2, T(0), T(1));
  waiting.human_waiting = T(0);
  r.ticks.push_back(waiting);
  TickRecord deciding = moving_tick(3, T(0), T(1));
  deciding.human_goal.reset();
  r.ticks.push_back(deciding);
  TickRecord still = moving_tick(4, T(0), T(1));
  still.human_moved = false;
  r.ticks.push_back(still);
  EXPECT_DOUBLE_EQ(inference_error_rate(r), 0.0);
}

TEST(ErrorRate, OnlyDefinedForBayesTrials) {
  TrialRecord r;
  r.setup.policy = PolicyKind::Reactive;
  r.ticks.push_back(moving_tick(1, T(0), T(1)));
  EXPECT_THROW(inference_error_rate(r), Error);
  r.setup.policy = PolicyKind::PredictiveBayes;
  r.ticks.front().human_moved = false;
  EXPECT_THROW(inference_error_rate(r), Error);
}

TEST(TaskShare, CountsRobotOnlyOneAgentCaptures) {
  TrialRecord r;
  r.setup.layout = make_layout({0, 0}, {10, 0}, {{0, 1, 1}, {1, 2, 2}, {2, 3, 3}, {3, 4, 4, TaskKind::Joint}});
  r.captures = {{1, T(0), Completer::Robot}, {2, T(1), Completer::Human}, {3, T(2), Completer::Robot},
                {4, T(3), Completer::Both}};
  EXPECT_EQ(robot_task_share(r), (std::pair<int, int>{2, 0}));
  r.captures[0].completed_by = Completer::Both;
  EXPECT_EQ(robot_task_share(r), (std::pair<int, int>{1, 1}));
}

TEST(TaskShare, JointOnlyLayoutHasNoShare) {
  TrialRecord r;
  r.setup.layout = make_layout({0, 0}, {10, 0}, {{0, 4, 4, TaskKind::Joint}});
  r.captures = {{4, T(0), Completer::Both}};
  EXPECT_EQ(robot_task_share(r), (std::pair<int, int>{0, 0}));
}

TEST(Trace, RoundTripsExactly) {
  for (PolicyKind k : kAllPolicies) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const TrialRecord r = run_trial(setup_for(k, 50 + seed, 4, 2));
      const std::string text = trace_string(r);
      std::istringstream in(text);
      const TrialRecord back = read_trace(in);
      EXPECT_EQ(back, r);
      EXPECT_EQ(trace_string(back), text);
      EXPECT_EQ(trace_string(replay(back)), text);
    }
  }
}

TEST(Trace, FileRoundTrip) {
  const fs::path dir = scratch_dir("trace");
  const TrialRecord r = run_trial(setup_for(PolicyKind::PredictiveBayes, 3));
  save_trace(dir / "t.jsonl", r);
  EXPECT_EQ(load_trace(dir / "t.jsonl"), r);
  fs::remove_all(dir);
}

TEST(Trace, MalformedInputIsRejected) {
  std::istringstream empty("");
  EXPECT_THROW(read_trace(empty), Error);
  std::istringstream junk("{\"type\":\"tick\"}\n");
  EXPECT_THROW(read_trace(junk), Error);
  EXPECT_THROW(load_trace("/nonexistent/trace.jsonl"), Error);
}

TEST(Trace, OneLinePerTickPlusHeaderAndSummary) {
  const TrialRecord r = run_trial(setup_for(PolicyKind::Reactive, 8));
  const std::string text = trace_string(r);
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), r.ticks.size() + 2);
}

class Batch : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = scratch_dir("batch");
    save_layout(dir / "a.json", random_layout(3, 1, 1));
    save_layout(dir / "b.json", random_layout(4, 1, 2));
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string config_text(const std::string& extra = "") const {
    return R"({"layouts": ["a.json", "b.json"],
               "policies": ["fixed", "reactive", "predictive_oracle", "predictive_bayes"],
               "human_model": {"kind": "boltzmann_choice", "beta_choice": 1.05},
               "rollouts": 3, "seed": 11, "output": "out")" +
           extra + "}";
  }

  fs::path dir;
};

TEST_F(Batch, CardinalityAndOrder) {
  const BatchResult r = run_batch(parse_batch_config(config_text(), dir));
  ASSERT_EQ(r.rows.size(), 24u);
  std::size_t i = 0;
  for (std::size_t l = 0; l < 2; ++l) {
    for (PolicyKind k : kAllPolicies) {
      for (int roll = 0; roll < 3; ++roll, ++i) {
        EXPECT_EQ(r.rows[i].layout_index, l);
        EXPECT_EQ(r.rows[i].policy, k);
        EXPECT_EQ(r.rows[i].rollout, roll);
        EXPECT_EQ(r.rows[i].seed, cell_seed(11, l, roll));
      }
    }
  }
  EXPECT_TRUE(fs::exists(dir / "out" / "trials.csv"));
  EXPECT_TRUE(fs::exists(dir / "out" / "aggregate.csv"));
  EXPECT_FALSE(fs::exists(dir / "out" / ".partial"));
  std::ifstream csv(dir / "out" / "trials.csv");
  std::string line;
  int lines = 0;
  while (std::getline(csv, line)) ++lines;
  EXPECT_EQ(lines, 25);
}

TEST_F(Batch, AggregatesAreMeansOfRows) {
  const BatchResult r = run_batch(parse_batch_config(config_text(), dir));
  ASSERT_EQ(r.aggregates.size(), 4u);
  for (const AggregateRow& a : r.aggregates) {
    double time = 0;
    double share = 0;
    double err = 0;
    int n = 0;
    for (const TrialRow& row : r.rows) {
      if (row.policy != a.policy) continue;
      time += static_cast<double>(row.completion_time);
      share += row.robot_one_agent_count;
      if (row.inference_error_rate) err += *row.inference_error_rate;
      ++n;
    }
    EXPECT_EQ(a.trials, 6u);
    EXPECT_NEAR(a.completion_time.mean, time / n, 1e-12);
    EXPECT_NEAR(a.robot_one_agent_count.mean, share / n, 1e-12);
    EXPECT_LE(a.completion_time.low, a.completion_time.mean);
    EXPECT_GE(a.completion_time.high, a.completion_time.mean);
    EXPECT_EQ(a.inference_error_rate.has_value(), a.policy == PolicyKind::PredictiveBayes);
    if (a.inference_error_rate) {
      EXPECT_NEAR(a.inference_error_rate->mean, err / n, 1e-12);
    }
  }
}

TEST_F(Batch, RowsMatchIndividualTrials) {
  const BatchConfig c = parse_batch_config(config_text(), dir);
  const BatchResult r = run_batch(c);
  for (const TrialRow& row : r.rows) {
    TrialSetup s;
    s.layout = c.layouts[row.layout_index];
    s.policy = row.policy;
    s.human = c.human;
    s.seed = row.seed;
    EXPECT_EQ(run_trial(s).completion_time, row.completion_time);
  }
}

TEST_F(Batch, ThreadCountDoesNotChangeResults) {
  const BatchResult one = run_batch(parse_batch_config(config_text(R"(, "threads": 1)"), dir));
  const BatchResult four = run_batch(parse_batch_config(config_text(R"(, "threads": 4)"), dir));
  std::ostringstream a;
  std::ostringstream b;
  write_trials_csv(a, one.rows);
  write_trials_csv(b, four.rows);
  EXPECT_EQ(a.str(), b.str());
}

TEST_F(Batch, TracesAreWrittenOnRequest) {
  run_batch(parse_batch_config(config_text(R"(, "write_traces": true)"), dir));
  std::size_t traces = 0;
  for (const auto& e : fs::directory_iterator(dir / "out" / "traces")) traces += e.is_regular_file();
  EXPECT_EQ(traces, 24u);
}

TEST_F(Batch, ConfigErrorsAreInvalidInput) {
  auto kind = [&](const std::string& text) {
    try {
      parse_batch_config(text, dir);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Io;
  };
  EXPECT_EQ(kind("not json"), ErrorKind::InvalidInput);
  EXPECT_EQ(kind(R"({"layouts": [], "policies": ["fixed"], "human_model": {}, "rollouts": 1, "seed": 0})"),
            ErrorKind::InvalidInput);
  EXPECT_EQ(kind(R"({"layouts": ["a.json"], "policies": ["greedy"], "human_model": {}, "rollouts": 1, "seed": 0})"),
            ErrorKind::InvalidInput);
  EXPECT_EQ(kind(R"({"layouts": ["a.json"], "policies": ["fixed"], "human_model": {}, "rollouts": 0, "seed": 0})"),
            ErrorKind::InvalidInput);
  EXPECT_EQ(kind(R"({"layouts": ["missing.json"], "policies": ["fixed"], "human_model": {}, "rollouts": 1, "seed": 0})"),
            ErrorKind::InvalidInput);
}

TEST_F(Batch, UnwritableOutputLeavesMarker) {
  fs::create_directories(dir / "out");
  fs::create_directories(dir / "out" / "trials.csv");  // a directory where the file should go
  EXPECT_THROW(run_batch(parse_batch_config(config_text(), dir)), Error);
  EXPECT_TRUE(fs::exists(dir / "out" / ".partial"));
}
