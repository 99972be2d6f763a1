#pragma once

#include <cstddef>
#include <vector>

#include "pursuit/shadows.hpp"

namespace pursuit {

/// A polyline in E^n; waypoints.front() is the root configuration.
struct Solution {
  std::size_t num_pursuers = 0;
  std::vector<JointConfig> waypoints;
};

/// Length of the polyline in the joint Euclidean metric on E^n.
double path_length(const std::vector<JointConfig>& path);
inline double length(const Solution& s) { return path_length(s.waypoints); }

}  // namespace pursuit
