#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "hrc/world.hpp"

namespace hrc {

// Layout files are JSON objects:
//   {"name": "...", "domain": {"x_min", "y_min", "x_max", "y_max"},
//    "velocity": V, "human_start": {"x", "y"}, "robot_start": {"x", "y"},
//    "tasks": [{"id", "x", "y", "kind": "one_agent" | "joint"}]}
// "name" is optional; parsed layouts are validated.
Layout parse_layout(std::string_view text);
std::string layout_to_json(const Layout& layout);

Layout load_layout(const std::filesystem::path& file);
void save_layout(const std::filesystem::path& file, const Layout& layout);

}  // namespace hrc
