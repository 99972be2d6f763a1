#pragma once

#include <cstddef>
#include <vector>

#include "pursuit/solution.hpp"

namespace pursuit {

/// True iff consecutive waypoints are joined by collision-free motions and
/// replaying the shadow labels from the all-contaminated root label ends with
/// every shadow cleared.
bool is_solution(const Environment& env, const std::vector<JointConfig>& path,
                 const MotionOptions& opts = {});

struct RefineOptions {
  MotionOptions motion;
  /// c shrinks geometrically from L by this factor down to L * min_fraction.
  double decay = 0.95;
  double min_fraction = 1.0 / 200.0;
  /// z_a advances by c times this.
  double advance = 0.1;
  /// Candidates are first replayed with steps this many times longer than
  /// motion.step and only re-checked at full resolution if they pass; 1 disables.
  double screen_factor = 10.0;
  /// Grid resolutions the result must also clear; empty skips the check.
  std::vector<int> certify_resolutions{128, 256};
};

struct RefineReport {
  Solution solution;
  double length_before = 0.0;
  double length_after = 0.0;
  std::size_t candidates = 0;
  /// Collision-free candidates whose labels were replayed.
  std::size_t replayed = 0;
  std::size_t accepted = 0;
};

/// Greedy shortcutting over decreasing cut lengths c and increasing start
/// positions z_a; a cut is kept only if the shortened path is still a
/// solution. Throws NotASolution if `s` is not one.
RefineReport refine(const Environment& env, const Solution& s, const RefineOptions& opts = {});

}  // namespace pursuit
