#include "hrc/service/session.hpp"

#include <algorithm>

#include "hrc/error.hpp"
#include "hrc/json_io.hpp"

namespace hrc::service {

namespace {

constexpr std::array<const char*, 6> kTags = {"red", "blue", "green", "orange", "purple", "teal"};

template <class T>
void shuffle(std::vector<T>& xs, Rng& rng) {
  for (std::size_t i = xs.size(); i > 1; --i) {
    const auto j = std::min(static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i)), i - 1);
    std::swap(xs[i - 1], xs[j]);
  }
}

}  // namespace

void SessionConfig::validate() const {
  if (layouts.empty()) throw Error(ErrorKind::InvalidInput, "session needs at least one layout");
  if (policies.empty() || policies.size() > kTags.size()) {
    throw Error(ErrorKind::InvalidInput, "session needs between 1 and 6 policies");
  }
  if (blocks < 1 || trials_per_policy < 1) throw Error(ErrorKind::InvalidInput, "block structure must be positive");
  if (!(ticks_per_second > 0.0)) throw Error(ErrorKind::InvalidInput, "tick rate must be positive");
  trajectory.validate();
  options.inference.validate();
}

std::vector<PlannedTrial> plan_trials(const SessionConfig& config, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0));
  std::vector<std::string> tags(kTags.begin(), kTags.begin() + static_cast<long>(config.policies.size()));
  shuffle(tags, rng);
  std::vector<PlannedTrial> out;
  std::size_t layout = 0;
  for (int b = 0; b < config.blocks; ++b) {
    std::vector<std::size_t> order(config.policies.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    shuffle(order, rng);
    for (std::size_t p : order) {
      for (int k = 0; k < config.trials_per_policy; ++k) {
        PlannedTrial t;
        t.block = b;
        t.layout_index = layout++ % config.layouts.size();
        t.policy = config.policies[p];
        t.tag = tags[p];
        t.seed = derive_seed(seed, out.size() + 1);
        out.push_back(t);
      }
    }
  }
  return out;
}

Session::Session(std::string id, std::shared_ptr<const SessionConfig> config, std::uint64_t seed)
    : id_(std::move(id)), config_(std::move(config)) {
  config_->validate();
  trials_ = plan_trials(*config_, seed);
}

bool Session::awaiting_goal() const {
  return phase_ == Phase::InTrial && loop_ && loop_->awaiting_human_goal();
}

Envelope Session::make(std::string type, json payload) {
  return Envelope{std::move(type), id_, ++seq_, std::move(payload)};
}

Envelope Session::error(std::string reason) { return make("error", {{"reason", std::move(reason)}}); }

json Session::state_payload() const {
  const TeamState& s = loop_->state();
  return {{"tick", loop_->engine().ticks_run()},
          {"human", {{"x", s.human_pos.x}, {"y", s.human_pos.y}, {"waiting", s.human_waiting_at.has_value()}}},
          {"robot", {{"x", s.robot_pos.x}, {"y", s.robot_pos.y}, {"waiting", s.robot_waiting_at.has_value()}}},
          {"remaining", id_list(std::vector<TaskId>(s.remaining.begin(), s.remaining.end()))},
          {"timer", s.elapsed_move_ticks},
          {"awaiting_goal", loop_->awaiting_human_goal()}};
}

json Session::trial_start_payload() const {
  const PlannedTrial& t = trials_[current_];
  return {{"trial", current_},
          {"total_trials", trials_.size()},
          {"block", t.block},
          {"robot", t.tag},
          {"layout", json(loop_->setup().layout)}};
}

json Session::prompt_payload(int block) const {
  std::vector<std::string> tags;
  for (const PlannedTrial& t : trials_) {
    if (t.block == block && std::find(tags.begin(), tags.end(), t.tag) == tags.end()) tags.push_back(t.tag);
  }
  return {{"block", block}, {"tags", tags}};
}

void Session::start_trial(std::vector<Envelope>& out) {
  const PlannedTrial& t = trials_[current_];
  TrialSetup setup;
  setup.layout = config_->layouts[t.layout_index];
  setup.policy = t.policy;
  setup.human.kind = HumanKind::Scripted;
  setup.human.trajectory = config_->trajectory;
  setup.seed = t.seed;
  setup.options = config_->options;
  setup.world = config_->world;
  loop_.emplace(std::move(setup));
  phase_ = Phase::InTrial;
  out.push_back(make("trial_start", trial_start_payload()));
  out.push_back(make("state_tick", state_payload()));
}

void Session::end_trial(std::vector<Envelope>& out) {
  TrialRecord record = as_scripted(loop_->finish());
  if (!config_->record_dir.empty()) {
    std::filesystem::create_directories(config_->record_dir);
    save_trace(config_->record_dir / (id_ + "_trial_" + std::to_string(current_) + ".jsonl"), record);
  }
  out.push_back(make("trial_end", {{"trial", current_},
                                   {"completion_time", record.completion_time},
                                   {"robot_one_agent_count", record.robot_one_agent_count},
                                   {"simultaneous_count", record.simultaneous_count},
                                   {"remaining_trials", trials_.size() - current_ - 1}}));
  records_.push_back(std::move(record));
  loop_.reset();

  const int block = trials_[current_].block;
  ++current_;
  const bool block_done = current_ == trials_.size() || trials_[current_].block != block;
  if (block_done) {
    phase_ = Phase::AwaitingPreference;
    out.push_back(make("preference_prompt", prompt_payload(block)));
    return;
  }
  start_trial(out);
}

std::vector<Envelope> Session::handle_text(std::string_view text) {
  try {
    return handle_message(parse_envelope(text));
  } catch (const ProtocolError& e) {
    return {error(e.what())};
  }
}

std::vector<Envelope> Session::handle_message(const Envelope& msg) {
  std::vector<Envelope> out;
  if (msg.type == "hello") {
    if (phase_ == Phase::AwaitingHello) {
      start_trial(out);
      return out;
    }
    return snapshot();
  }
  if (phase_ == Phase::AwaitingHello) return {error("say hello first")};

  if (msg.type == "goal_choice") {
    if (phase_ != Phase::InTrial || !loop_->awaiting_human_goal()) return {error("not awaiting a goal")};
    if (!msg.payload.contains("task") || !msg.payload.at("task").is_number_integer()) {
      return {error("goal_choice needs an integer task")};
    }
    const TaskId goal = task_id(msg.payload.at("task").get<std::int32_t>());
    if (!loop_->state().remaining.contains(goal)) return {error("task gone")};
    const std::size_t before = loop_->controller().replan_log().size();
    loop_->submit_human_goal(goal);
    const auto& log = loop_->controller().replan_log();
    for (std::size_t i = before; i < log.size(); ++i) {
      out.push_back(make("replan_notice", {{"tick", log[i].tick}, {"reason", log[i].reason}}));
    }
    out.push_back(make("state_tick", state_payload()));
    return out;
  }
  if (msg.type == "preference_choice") {
    if (phase_ != Phase::AwaitingPreference) return {error("no preference is pending")};
    const std::string tag = msg.payload.value("tag", std::string());
    const int block = trials_[current_ - 1].block;
    auto it = std::find_if(trials_.begin(), trials_.end(),
                           [&](const PlannedTrial& t) { return t.block == block && t.tag == tag; });
    if (it == trials_.end()) return {error("unknown robot tag")};
    preferences_.push_back({block, tag, it->policy});
    if (current_ == trials_.size()) {
      phase_ = Phase::Finished;
      return out;
    }
    start_trial(out);
    return out;
  }
  return {error("unexpected message '" + msg.type + "'")};
}

std::vector<Envelope> Session::pump_tick() {
  std::vector<Envelope> out;
  if (phase_ != Phase::InTrial || !loop_ || loop_->awaiting_human_goal()) return out;
  if (!loop_->done()) {
    const std::size_t before = loop_->controller().replan_log().size();
    const ClosedLoop::Step step = loop_->run_tick();
    for (const CaptureEvent& e : step.captures) {
      out.push_back(make("capture", {{"tick", e.tick}, {"task", to_int(e.task_id)}, {"by", to_string(e.completed_by)}}));
    }
    const auto& log = loop_->controller().replan_log();
    for (std::size_t i = before; i < log.size(); ++i) {
      out.push_back(make("replan_notice", {{"tick", log[i].tick}, {"reason", log[i].reason}}));
    }
    out.push_back(make("state_tick", state_payload()));
  }
  if (loop_->done()) end_trial(out);
  return out;
}

std::vector<Envelope> Session::snapshot() {
  std::vector<Envelope> out;
  if (phase_ == Phase::InTrial) {
    out.push_back(make("trial_start", trial_start_payload()));
    out.push_back(make("state_tick", state_payload()));
  } else if (phase_ == Phase::AwaitingPreference) {
    out.push_back(make("preference_prompt", prompt_payload(trials_[current_ - 1].block)));
  }
  return out;
}

TrialRecord as_scripted(TrialRecord record) {
  record.setup.human.kind = HumanKind::Scripted;
  record.setup.human.script.clear();
  for (const HumanChoice& c : record.human_choices) {
    if (c.goal) record.setup.human.script.push_back(*c.goal);
  }
  return record;
}

}  // namespace hrc::service
