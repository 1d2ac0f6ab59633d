#include "hrc/layout_io.hpp"

#include <fstream>
#include <sstream>

#include "hrc/error.hpp"
#include "hrc/json_io.hpp"

namespace hrc {

void to_json(json& j, const Point& p) { j = json{{"x", p.x}, {"y", p.y}}; }

void from_json(const json& j, Point& p) {
  p.x = j.at("x").get<double>();
  p.y = j.at("y").get<double>();
}

TaskKind task_kind_from_string(const std::string& s) {
  if (s == "one_agent") return TaskKind::OneAgent;
  if (s == "joint") return TaskKind::Joint;
  throw Error(ErrorKind::InvalidInput, "unknown task kind '" + s + "'");
}

void to_json(json& j, const Layout& layout) {
  json tasks = json::array();
  for (const Task& t : layout.tasks) {
    tasks.push_back({{"id", to_int(t.id)},
                     {"x", t.location.x},
                     {"y", t.location.y},
                     {"kind", to_string(t.kind)}});
  }
  j = json::object();
  if (!layout.name.empty()) j["name"] = layout.name;
  j["domain"] = {{"x_min", layout.domain.x_min},
                 {"y_min", layout.domain.y_min},
                 {"x_max", layout.domain.x_max},
                 {"y_max", layout.domain.y_max}};
  j["velocity"] = layout.velocity;
  j["human_start"] = layout.human_start;
  j["robot_start"] = layout.robot_start;
  j["tasks"] = std::move(tasks);
}

Layout layout_from_json(const json& j) {
  Layout layout;
  try {
    if (j.contains("name")) layout.name = j.at("name").get<std::string>();
    const json& d = j.at("domain");
    layout.domain = {d.at("x_min").get<double>(), d.at("y_min").get<double>(),
                     d.at("x_max").get<double>(), d.at("y_max").get<double>()};
    layout.velocity = j.at("velocity").get<double>();
    layout.human_start = j.at("human_start").get<Point>();
    layout.robot_start = j.at("robot_start").get<Point>();
    for (const json& t : j.at("tasks")) {
      layout.tasks.push_back({task_id(t.at("id").get<std::int32_t>()),
                              {t.at("x").get<double>(), t.at("y").get<double>()},
                              task_kind_from_string(t.at("kind").get<std::string>())});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed layout: ") + e.what());
  }
  layout.validate();
  return layout;
}

Layout parse_layout(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("layout is not JSON: ") + e.what());
  }
  return layout_from_json(j);
}

std::string layout_to_json(const Layout& layout) {
  json j = layout;
  return j.dump(2);
}

Layout load_layout(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  Layout layout = parse_layout(buf.str());
  if (layout.name.empty()) layout.name = file.stem().string();
  return layout;
}

void save_layout(const std::filesystem::path& file, const Layout& layout) {
  std::ofstream out(file);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + file.string());
  out << layout_to_json(layout) << '\n';
  if (!out) throw Error(ErrorKind::Io, "write failed for " + file.string());
}

}  // namespace hrc
