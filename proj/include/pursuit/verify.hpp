#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "pursuit/solution.hpp"

namespace pursuit {

struct GridVerdict {
  bool cleared = false;
  /// Contaminated cells at the end, times the cell area.
  double contaminated_area = 0.0;
  std::size_t contaminated_cells = 0;
  std::size_t steps = 0;
  double cell = 0.0;
};

/// Rasterized copy of E: cell centers inside E are free.
class Grid {
 public:
  /// `resolution` cells along the longer side of E's bounding box.
  Grid(const Environment& env, int resolution);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double cell() const { return cell_; }
  std::size_t size() const { return free_.size(); }
  bool free(std::size_t i) const { return free_[i] != 0; }
  Point center(std::size_t i) const;
  std::size_t free_count() const { return free_count_; }

 private:
  int nx_ = 0;
  int ny_ = 0;
  double cell_ = 0.0;
  Point origin_;
  std::vector<std::uint8_t> free_;
  std::size_t free_count_ = 0;
};

/// Width of E's narrowest passage: the shortest chord through E's interior
/// from a boundary vertex to a boundary edge that is not one of its neighbours.
double narrowest_corridor(const Environment& env);

/// Cells whose centers are visible from `p`, by exact segment tests.
std::vector<std::uint8_t> visible_cells(const Environment& env, const Grid& grid, Point p);

/// Replays `s` on a grid: contamination starts as every cell hidden at the
/// first waypoint and, after each half-cell step, floods (8-connected) through
/// all hidden cells. Throws ResolutionTooCoarse when some corridor is
/// narrower than three cells, std::invalid_argument if resolution < 64.
GridVerdict grid_verify(const Environment& env, const Solution& s, int resolution);
/// As above, but throws Timeout once the steady clock passes `deadline`.
GridVerdict grid_verify(const Environment& env, const Solution& s, int resolution,
                        std::chrono::steady_clock::time_point deadline);

}  // namespace pursuit
