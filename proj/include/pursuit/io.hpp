#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "pursuit/solution.hpp"

namespace pursuit {

using Json = nlohmann::json;

/// `{"outer": [[x,y],...], "holes": [[[x,y],...],...]}`. Throws FormatError on
/// malformed input and InvalidEnvironment on invalid geometry.
Environment environment_from_json(const Json& j);
Json environment_to_json(const Environment& env);
Environment load_environment(const std::filesystem::path& path);

/// `{"num_pursuers": n, "waypoints": [[[x,y] x n], ...]}`.
Solution solution_from_json(const Json& j);
Json solution_to_json(const Solution& s);
Solution load_solution(const std::filesystem::path& path);
void save_solution(const Solution& s, const std::filesystem::path& path);

Json read_json(const std::filesystem::path& path);
void write_json(const Json& j, const std::filesystem::path& path);

Json point_to_json(Point p);
Point point_from_json(const Json& j);
Json config_to_json(const JointConfig& c);

}  // namespace pursuit
