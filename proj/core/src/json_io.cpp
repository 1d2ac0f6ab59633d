#include "hrc/json_io.hpp"

#include "hrc/error.hpp"

namespace hrc {

json optional_id(const std::optional<TaskId>& id) {
  return id ? json(to_int(*id)) : json(nullptr);
}

std::optional<TaskId> optional_id_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return task_id(j.get<std::int32_t>());
}

json id_list(const std::vector<TaskId>& ids) {
  json out = json::array();
  for (TaskId id : ids) out.push_back(to_int(id));
  return out;
}

std::vector<TaskId> id_list_from(const json& j) {
  std::vector<TaskId> out;
  for (const json& v : j) out.push_back(task_id(v.get<std::int32_t>()));
  return out;
}

Completer completer_from_string(const std::string& s) {
  if (s == "human") return Completer::Human;
  if (s == "robot") return Completer::Robot;
  if (s == "both") return Completer::Both;
  throw Error(ErrorKind::InvalidInput, "unknown completer '" + s + "'");
}

json to_json(const CaptureEvent& e) {
  return {{"tick", e.tick}, {"task", to_int(e.task_id)}, {"by", to_string(e.completed_by)}};
}

CaptureEvent capture_from_json(const json& j) {
  return {j.at("tick").get<std::int64_t>(), task_id(j.at("task").get<std::int32_t>()),
          completer_from_string(j.at("by").get<std::string>())};
}

json to_json(const TrajectorySpec& spec) {
  return {{"kind", to_string(spec.kind)}, {"curvature", spec.curvature}, {"side", to_string(spec.side)}};
}

TrajectorySpec trajectory_spec_from_json(const json& j) {
  TrajectorySpec spec;
  if (j.contains("kind")) spec.kind = trajectory_kind_from_string(j.at("kind").get<std::string>());
  if (j.contains("curvature")) spec.curvature = j.at("curvature").get<double>();
  if (j.contains("side")) spec.side = side_from_string(j.at("side").get<std::string>());
  spec.validate();
  return spec;
}

json to_json(const HumanModelSpec& spec) {
  return {{"kind", to_string(spec.kind)},
          {"alpha", spec.alpha},
          {"beta_choice", spec.beta_choice},
          {"script", id_list(spec.script)},
          {"rng_seed", spec.rng_seed},
          {"trajectory", to_json(spec.trajectory)}};
}

HumanModelSpec human_spec_from_json(const json& j) {
  HumanModelSpec spec;
  try {
    if (j.contains("kind")) spec.kind = human_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("alpha")) spec.alpha = j.at("alpha").get<double>();
    if (j.contains("beta_choice")) spec.beta_choice = j.at("beta_choice").get<double>();
    if (j.contains("script")) spec.script = id_list_from(j.at("script"));
    if (j.contains("rng_seed")) spec.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    if (j.contains("trajectory")) spec.trajectory = trajectory_spec_from_json(j.at("trajectory"));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed human model: ") + e.what());
  }
  spec.validate();
  return spec;
}

json to_json(const InferenceParams& p) {
  return {{"beta", p.beta},
          {"gamma", p.gamma},
          {"terminal_reward", p.terminal_reward},
          {"running_cost", p.running_cost},
          {"heading_count", p.heading_count}};
}

InferenceParams inference_params_from_json(const json& j) {
  InferenceParams p;
  try {
    if (j.contains("beta")) p.beta = j.at("beta").get<double>();
    if (j.contains("gamma")) p.gamma = j.at("gamma").get<double>();
    if (j.contains("terminal_reward")) p.terminal_reward = j.at("terminal_reward").get<double>();
    if (j.contains("running_cost")) p.running_cost = j.at("running_cost").get<double>();
    if (j.contains("heading_count")) p.heading_count = j.at("heading_count").get<int>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed inference parameters: ") + e.what());
  }
  p.validate();
  return p;
}

}  // namespace hrc
