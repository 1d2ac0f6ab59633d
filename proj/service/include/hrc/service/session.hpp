#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hrc/service/protocol.hpp"
#include "hrc/trial.hpp"

namespace hrc::service {

struct SessionConfig {
  std::vector<Layout> layouts;
  std::vector<PolicyKind> policies{std::begin(kAllPolicies), std::end(kAllPolicies)};
  int blocks = 1;
  int trials_per_policy = 3;  // consecutive trials with one robot inside a block
  TrajectorySpec trajectory;  // avatar path after a click
  PolicyOptions options;
  WorldConfig world;
  std::filesystem::path record_dir;  // empty: records stay in memory
  double ticks_per_second = 20.0;

  void validate() const;
};

struct PlannedTrial {
  int block = 0;
  std::size_t layout_index = 0;
  PolicyKind policy = PolicyKind::Fixed;
  std::string tag;
  std::uint64_t seed = 0;
};

struct PreferenceRecord {
  int block = 0;
  std::string tag;
  PolicyKind policy = PolicyKind::Fixed;
};

// Robot colours per policy and the policy order inside blocks are drawn from
// the session seed.
std::vector<PlannedTrial> plan_trials(const SessionConfig& config, std::uint64_t seed);

// One player's session. All state changes go through handle_message and
// pump_tick, which return the messages to send back.
class Session {
 public:
  enum class Phase { AwaitingHello, InTrial, AwaitingPreference, Finished };

  Session(std::string id, std::shared_ptr<const SessionConfig> config, std::uint64_t seed);

  const std::string& id() const { return id_; }
  Phase phase() const { return phase_; }
  const std::vector<PlannedTrial>& trials() const { return trials_; }
  std::size_t current_trial() const { return current_; }
  const ClosedLoop* loop() const { return loop_ ? &*loop_ : nullptr; }
  const std::vector<TrialRecord>& records() const { return records_; }
  const std::vector<PreferenceRecord>& preferences() const { return preferences_; }
  bool awaiting_goal() const;

  std::vector<Envelope> handle_message(const Envelope& msg);
  std::vector<Envelope> handle_text(std::string_view text);

  // Advances the running trial by one tick; nothing happens while the
  // player is deciding.
  std::vector<Envelope> pump_tick();

  // trial_start and state_tick for a reconnecting client.
  std::vector<Envelope> snapshot();

 private:
  Envelope make(std::string type, json payload);
  Envelope error(std::string reason);
  void start_trial(std::vector<Envelope>& out);
  void end_trial(std::vector<Envelope>& out);
  json state_payload() const;
  json trial_start_payload() const;
  json prompt_payload(int block) const;

  std::string id_;
  std::shared_ptr<const SessionConfig> config_;
  std::vector<PlannedTrial> trials_;
  Phase phase_ = Phase::AwaitingHello;
  std::size_t current_ = 0;
  std::optional<ClosedLoop> loop_;
  std::vector<TrialRecord> records_;
  std::vector<PreferenceRecord> preferences_;
  std::int64_t seq_ = 0;
};

// Converts a live record into one that replays offline with a scripted human.
TrialRecord as_scripted(TrialRecord record);

}  // namespace hrc::service
