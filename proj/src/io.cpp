#include "pursuit/io.hpp"

#include <cmath>
#include <fstream>

#include "pursuit/errors.hpp"

namespace pursuit {

Json point_to_json(Point p) { return Json::array({p.x, p.y}); }

Point point_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw FormatError("expected a point [x, y], got " + j.dump());
  }
  const Point p{j[0].get<double>(), j[1].get<double>()};
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw FormatError("non-finite coordinate");
  return p;
}

namespace {

std::vector<Point> ring_from_json(const Json& j) {
  if (!j.is_array()) throw FormatError("expected a list of points");
  std::vector<Point> ring;
  for (const Json& p : j) ring.push_back(point_from_json(p));
  return ring;
}

Json ring_to_json(const std::vector<Point>& ring) {
  Json out = Json::array();
  for (Point p : ring) out.push_back(point_to_json(p));
  return out;
}

}  // namespace

Environment environment_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("outer")) throw FormatError("environment needs an \"outer\" ring");
  std::vector<std::vector<Point>> holes;
  if (j.contains("holes")) {
    if (!j["holes"].is_array()) throw FormatError("\"holes\" must be a list of rings");
    for (const Json& h : j["holes"]) holes.push_back(ring_from_json(h));
  }
  return Environment::create(ring_from_json(j["outer"]), std::move(holes));
}

Json environment_to_json(const Environment& env) {
  Json holes = Json::array();
  for (const auto& h : env.holes()) holes.push_back(ring_to_json(h));
  return {{"outer", ring_to_json(env.outer())}, {"holes", holes}};
}

Environment load_environment(const std::filesystem::path& path) {
  return environment_from_json(read_json(path));
}

Json config_to_json(const JointConfig& c) {
  Json out = Json::array();
  for (Point p : c.positions) out.push_back(point_to_json(p));
  return out;
}

Solution solution_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("num_pursuers") || !j.contains("waypoints")) {
    throw FormatError("solution needs \"num_pursuers\" and \"waypoints\"");
  }
  if (!j["num_pursuers"].is_number_integer() || j["num_pursuers"].get<long long>() < 1) {
    throw FormatError("\"num_pursuers\" must be a positive integer");
  }
  Solution s;
  s.num_pursuers = j["num_pursuers"].get<std::size_t>();
  if (!j["waypoints"].is_array()) throw FormatError("\"waypoints\" must be a list");
  for (const Json& w : j["waypoints"]) {
    JointConfig c;
    c.positions = ring_from_json(w);
    if (c.size() != s.num_pursuers) throw FormatError("waypoint size differs from num_pursuers");
    s.waypoints.push_back(std::move(c));
  }
  return s;
}

Json solution_to_json(const Solution& s) {
  Json w = Json::array();
  for (const JointConfig& c : s.waypoints) w.push_back(config_to_json(c));
  return {{"num_pursuers", s.num_pursuers}, {"waypoints", w}};
}

Solution load_solution(const std::filesystem::path& path) { return solution_from_json(read_json(path)); }

void save_solution(const Solution& s, const std::filesystem::path& path) {
  write_json(solution_to_json(s), path);
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json(const Json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << j.dump(1) << '\n';
}

}  // namespace pursuit
