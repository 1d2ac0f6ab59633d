#include "hrc/trial.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hrc/error.hpp"
#include "hrc/json_io.hpp"

namespace hrc {

ClosedLoop::ClosedLoop(TrialSetup setup)
    : setup_((setup.layout.validate(), setup.human.validate(), std::move(setup))),
      engine_(setup_.layout, setup_.world),
      controller_(RobotController::init(setup_.policy, engine_.state(), setup_.layout, setup_.options)),
      trajectory_rng_(derive_seed(setup_.seed, 2)),
      optimal_makespan_(controller_.plan().makespan),
      obs_origin_(engine_.state().human_pos) {
  sync_robot();
}

JointPlan ClosedLoop::optimal_plan() const { return solve({engine_.state(), setup_.layout}); }

void ClosedLoop::submit_human_goal(std::optional<TaskId> goal) {
  if (!awaiting_human_goal()) throw Error(ErrorKind::InvalidInput, "no goal choice is pending");
  const TeamState& s = engine_.state();
  if (goal && !s.remaining.contains(*goal)) throw Error(ErrorKind::InvalidInput, "task gone");
  const std::int64_t tick = engine_.ticks_run() + 1;
  choices_.push_back({tick, goal});
  if (!goal) {
    engine_.set_human_idle();
    return;
  }
  const Point start = s.human_pos;
  const Trajectory path =
      make_trajectory(start, setup_.layout.task(*goal).location, setup_.human.trajectory, &trajectory_rng_);
  engine_.set_human_goal(*goal, path.to_polyline());
  obs_origin_ = start;
  obs_origin_clock_ = engine_.tick_clock();
  if (controller_.kind() == PolicyKind::PredictiveOracle) {
    controller_.on_human_goal_public(*goal, engine_.state(), setup_.layout, tick);
    sync_robot();
  }
}

void ClosedLoop::sync_robot() {
  if (is_terminal(engine_.state())) return;
  engine_.set_robot_goal(controller_.robot_goal());
}

void ClosedLoop::check_deadlock(std::int64_t tick) {
  const TeamState& s = engine_.state();
  if (!s.human_waiting_at || !s.robot_waiting_at || *s.human_waiting_at == *s.robot_waiting_at) return;
  controller_.resolve_deadlock(s, setup_.layout, tick);
  engine_.release_robot_wait();
}

ClosedLoop::Step ClosedLoop::step() {
  Step out;
  const std::size_t replans_before = controller_.replan_log().size();
  const bool human_was_waiting = engine_.state().human_waiting_at.has_value();
  Advance a = engine_.advance();
  out.status = a.status;
  if (a.status == AdvanceStatus::Stalled) {
    engine_.skip_tick();
    a.tick_closed = true;
    // Nobody can move, so an idle human has to pick something after all.
    if (engine_.human_idle()) engine_.wake_human();
  }
  if (!(a.human_from == a.human_to)) human_moved_ = true;
  const std::int64_t tick = a.tick_closed ? engine_.ticks_run() : engine_.ticks_run() + 1;

  if (!a.captures.empty()) {
    captures_.insert(captures_.end(), a.captures.begin(), a.captures.end());
    open_captures_.insert(open_captures_.end(), a.captures.begin(), a.captures.end());
    controller_.on_captures(a.captures, engine_.state(), setup_.layout, tick);
  }

  const TeamState& s = engine_.state();
  if (!human_was_waiting && s.human_waiting_at) {
    // Reaching a joint task is reaching the goal, even though it completes later.
    controller_.on_human_task_complete(s, setup_.layout, tick);
  }
  if (a.tick_closed) {
    if (controller_.kind() == PolicyKind::PredictiveBayes && s.human_goal && !s.human_waiting_at &&
        !is_terminal(s) && !(obs_origin_ == s.human_pos)) {
      controller_.on_tick_observation(obs_origin_, s.human_pos, s, setup_.layout, tick, 1.0 - obs_origin_clock_);
    }
    obs_origin_ = s.human_pos;
    obs_origin_clock_ = 0.0;
  }
  if (const auto& b = controller_.belief()) {
    max_norm_error_ = std::max(max_norm_error_, std::abs(b->total() - 1.0));
  }

  check_deadlock(tick);
  sync_robot();
  if (a.tick_closed) record_tick();

  out.captures = std::move(a.captures);
  out.new_replans = controller_.replan_log().size() - replans_before;
  out.tick_closed = a.tick_closed;
  return out;
}

ClosedLoop::Step ClosedLoop::run_tick() {
  Step total;
  while (!done() && !awaiting_human_goal()) {
    Step s = step();
    total.status = s.status;
    total.captures.insert(total.captures.end(), s.captures.begin(), s.captures.end());
    total.new_replans += s.new_replans;
    if (s.tick_closed) {
      total.tick_closed = true;
      break;
    }
  }
  if (done()) total.status = AdvanceStatus::Terminal;
  else if (awaiting_human_goal() && !total.tick_closed) total.status = AdvanceStatus::AwaitingHumanGoal;
  return total;
}

void ClosedLoop::record_tick() {
  const TeamState& s = engine_.state();
  TickRecord r;
  r.tick = engine_.ticks_run();
  r.elapsed = s.elapsed_move_ticks;
  r.human = s.human_pos;
  r.robot = s.robot_pos;
  r.human_goal = s.human_goal;
  r.robot_goal = s.robot_goal;
  r.human_waiting = s.human_waiting_at;
  r.robot_waiting = s.robot_waiting_at;
  r.remaining.assign(s.remaining.begin(), s.remaining.end());
  r.human_moved = human_moved_;
  if (const auto& b = controller_.belief()) {
    r.map_goal = map_goal(*b);
    r.map_prob = b->max_prob();
  }
  r.captures = std::move(open_captures_);
  open_captures_.clear();
  human_moved_ = false;
  ticks_.push_back(std::move(r));
}

TrialRecord ClosedLoop::finish() const {
  TrialRecord rec;
  rec.setup = setup_;
  rec.optimal_makespan = optimal_makespan_;
  rec.ticks = ticks_;
  if (!open_captures_.empty()) {
    if (rec.ticks.empty()) {
      TickRecord r;
      r.human = engine_.state().human_pos;
      r.robot = engine_.state().robot_pos;
      rec.ticks.push_back(r);
    }
    auto& last = rec.ticks.back().captures;
    last.insert(last.end(), open_captures_.begin(), open_captures_.end());
  }
  rec.captures = captures_;
  rec.replans = controller_.replan_log();
  rec.human_choices = choices_;
  rec.completion_time = engine_.state().elapsed_move_ticks;
  std::tie(rec.robot_one_agent_count, rec.simultaneous_count) = robot_task_share(rec);
  if (setup_.policy == PolicyKind::PredictiveBayes) {
    try {
      rec.inference_error_rate = inference_error_rate(rec);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotApplicable) throw;
    }
  }
  rec.max_belief_norm_error = max_norm_error_;
  return rec;
}

std::uint64_t human_stream_seed(const TrialSetup& setup) {
  return derive_seed(derive_seed(setup.seed, 1), setup.human.rng_seed);
}

TrialRecord run_trial(const TrialSetup& setup) {
  ClosedLoop loop(setup);
  HumanModelSpec spec = setup.human;
  spec.rng_seed = human_stream_seed(setup);
  HumanModel human(spec);
  const auto limit = static_cast<std::int64_t>(std::max(100.0 * loop.optimal_makespan(), 100.0));

  while (!loop.done()) {
    if (loop.awaiting_human_goal()) {
      std::optional<JointPlan> plan;
      if (human.needs_optimal_plan()) plan = loop.optimal_plan();
      loop.submit_human_goal(human.choose_goal(loop.state(), setup.layout, plan ? &*plan : nullptr));
      continue;
    }
    loop.step();
    if (loop.engine().ticks_run() > limit) {
      throw Error(ErrorKind::NonTermination, "trial exceeded " + std::to_string(limit) + " ticks");
    }
  }
  return loop.finish();
}

double inference_error_rate(const TrialRecord& record) {
  if (record.setup.policy != PolicyKind::PredictiveBayes) {
    throw Error(ErrorKind::NotApplicable, "error rate is defined for Bayesian trials only");
  }
  int counted = 0;
  int wrong = 0;
  for (const TickRecord& t : record.ticks) {
    if (!t.human_moved || !t.human_goal || t.human_waiting || !t.map_goal) continue;
    ++counted;
    if (*t.map_goal != *t.human_goal) ++wrong;
  }
  if (counted == 0) throw Error(ErrorKind::NotApplicable, "no human-moving tick in trial");
  return static_cast<double>(wrong) / counted;
}

std::pair<int, int> robot_task_share(const TrialRecord& record) {
  int robot = 0;
  int both = 0;
  for (const CaptureEvent& e : record.captures) {
    if (record.setup.layout.task(e.task_id).kind != TaskKind::OneAgent) continue;
    if (e.completed_by == Completer::Robot) ++robot;
    if (e.completed_by == Completer::Both) ++both;
  }
  return {robot, both};
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json header_json(const TrialRecord& r) {
  const TrialSetup& s = r.setup;
  return {{"type", "header"},
          {"layout", s.layout},
          {"policy", to_string(s.policy)},
          {"human", to_json(s.human)},
          {"seed", s.seed},
          {"inference", to_json(s.options.inference)},
          {"confidence_gate", s.options.confidence_gate},
          {"capture_radius", s.world.capture_radius},
          {"optimal_makespan", r.optimal_makespan}};
}

json tick_json(const TickRecord& t) {
  json captures = json::array();
  for (const CaptureEvent& e : t.captures) captures.push_back(to_json(e));
  return {{"type", "tick"},
          {"tick", t.tick},
          {"elapsed", t.elapsed},
          {"human", t.human},
          {"robot", t.robot},
          {"human_goal", optional_id(t.human_goal)},
          {"robot_goal", optional_id(t.robot_goal)},
          {"human_waiting", optional_id(t.human_waiting)},
          {"robot_waiting", optional_id(t.robot_waiting)},
          {"remaining", id_list(t.remaining)},
          {"human_moved", t.human_moved},
          {"map_goal", optional_id(t.map_goal)},
          {"map_prob", optional_number(t.map_prob)},
          {"captures", captures}};
}

json summary_json(const TrialRecord& r) {
  json replans = json::array();
  for (const ReplanEvent& e : r.replans) replans.push_back({{"tick", e.tick}, {"reason", e.reason}});
  json choices = json::array();
  for (const HumanChoice& c : r.human_choices) choices.push_back({{"tick", c.tick}, {"goal", optional_id(c.goal)}});
  return {{"type", "summary"},
          {"completion_time", r.completion_time},
          {"robot_one_agent_count", r.robot_one_agent_count},
          {"simultaneous_count", r.simultaneous_count},
          {"inference_error_rate", optional_number(r.inference_error_rate)},
          {"max_belief_norm_error", r.max_belief_norm_error},
          {"replans", replans},
          {"human_choices", choices}};
}

}  // namespace

void write_trace(std::ostream& out, const TrialRecord& record) {
  out << header_json(record).dump() << '\n';
  for (const TickRecord& t : record.ticks) out << tick_json(t).dump() << '\n';
  out << summary_json(record).dump() << '\n';
}

std::string trace_string(const TrialRecord& record) {
  std::ostringstream out;
  write_trace(out, record);
  return out.str();
}

TrialRecord read_trace(std::istream& in) {
  TrialRecord r;
  bool header = false;
  bool summary = false;
  std::string line;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "header") {
        TrialSetup& s = r.setup;
        s.layout = layout_from_json(j.at("layout"));
        s.policy = policy_kind_from_string(j.at("policy").get<std::string>());
        s.human = human_spec_from_json(j.at("human"));
        s.seed = j.at("seed").get<std::uint64_t>();
        s.options.inference = inference_params_from_json(j.at("inference"));
        s.options.confidence_gate = j.at("confidence_gate").get<double>();
        s.world.capture_radius = j.at("capture_radius").get<double>();
        r.optimal_makespan = j.at("optimal_makespan").get<double>();
        header = true;
      } else if (type == "tick") {
        TickRecord t;
        t.tick = j.at("tick").get<std::int64_t>();
        t.elapsed = j.at("elapsed").get<std::int64_t>();
        t.human = j.at("human").get<Point>();
        t.robot = j.at("robot").get<Point>();
        t.human_goal = optional_id_from(j.at("human_goal"));
        t.robot_goal = optional_id_from(j.at("robot_goal"));
        t.human_waiting = optional_id_from(j.at("human_waiting"));
        t.robot_waiting = optional_id_from(j.at("robot_waiting"));
        t.remaining = id_list_from(j.at("remaining"));
        t.human_moved = j.at("human_moved").get<bool>();
        t.map_goal = optional_id_from(j.at("map_goal"));
        if (!j.at("map_prob").is_null()) t.map_prob = j.at("map_prob").get<double>();
        for (const json& e : j.at("captures")) t.captures.push_back(capture_from_json(e));
        r.captures.insert(r.captures.end(), t.captures.begin(), t.captures.end());
        r.ticks.push_back(std::move(t));
      } else if (type == "summary") {
        r.completion_time = j.at("completion_time").get<std::int64_t>();
        r.robot_one_agent_count = j.at("robot_one_agent_count").get<int>();
        r.simultaneous_count = j.at("simultaneous_count").get<int>();
        if (!j.at("inference_error_rate").is_null()) {
          r.inference_error_rate = j.at("inference_error_rate").get<double>();
        }
        r.max_belief_norm_error = j.at("max_belief_norm_error").get<double>();
        for (const json& e : j.at("replans")) {
          r.replans.push_back({e.at("tick").get<std::int64_t>(), e.at("reason").get<std::string>()});
        }
        for (const json& c : j.at("human_choices")) {
          r.human_choices.push_back({c.at("tick").get<std::int64_t>(), optional_id_from(c.at("goal"))});
        }
        summary = true;
      } else {
        throw Error(ErrorKind::InvalidInput, "unknown trace line type '" + type + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed trace: ") + e.what());
  }
  if (!header || !summary) throw Error(ErrorKind::InvalidInput, "trace lacks a header or summary line");
  return r;
}

TrialRecord load_trace(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + file.string());
  return read_trace(in);
}

void save_trace(const std::filesystem::path& file, const TrialRecord& record) {
  std::ofstream out(file);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + file.string());
  write_trace(out, record);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + file.string());
}

TrialRecord replay(const TrialRecord& record) { return run_trial(record.setup); }

}  // namespace hrc
