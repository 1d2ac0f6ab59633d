#pragma once

// JSON mappings for the value types that appear in files and on the wire.

#include <json.hpp>

#include "hrc/human.hpp"
#include "hrc/inference.hpp"
#include "hrc/policies.hpp"
#include "hrc/world.hpp"

namespace hrc {

using nlohmann::json;

void to_json(json& j, const Point& p);
void from_json(const json& j, Point& p);
void to_json(json& j, const Layout& layout);
Layout layout_from_json(const json& j);
TaskKind task_kind_from_string(const std::string& s);

json optional_id(const std::optional<TaskId>& id);
std::optional<TaskId> optional_id_from(const json& j);
json id_list(const std::vector<TaskId>& ids);
std::vector<TaskId> id_list_from(const json& j);

json to_json(const CaptureEvent& e);
CaptureEvent capture_from_json(const json& j);
Completer completer_from_string(const std::string& s);

json to_json(const TrajectorySpec& spec);
TrajectorySpec trajectory_spec_from_json(const json& j);
json to_json(const HumanModelSpec& spec);
// Missing fields keep their defaults.
HumanModelSpec human_spec_from_json(const json& j);
json to_json(const InferenceParams& params);
InferenceParams inference_params_from_json(const json& j);

}  // namespace hrc
