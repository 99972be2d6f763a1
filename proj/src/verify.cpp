#include "pursuit/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pursuit/errors.hpp"

namespace pursuit {

double path_length(const std::vector<JointConfig>& path) {
  double len = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) len += joint_distance(path[i - 1], path[i]);
  return len;
}

Grid::Grid(const Environment& env, int resolution) {
  const Box& b = env.bounds();
  cell_ = std::max(b.width(), b.height()) / resolution;
  nx_ = std::max(1, static_cast<int>(std::ceil(b.width() / cell_ - 1e-9)));
  ny_ = std::max(1, static_cast<int>(std::ceil(b.height() / cell_ - 1e-9)));
  origin_ = b.lo;
  free_.assign(static_cast<std::size_t>(nx_) * ny_, 0);
  for (std::size_t i = 0; i < free_.size(); ++i) {
    if (env.contains(center(i))) {
      free_[i] = 1;
      ++free_count_;
    }
  }
}

Point Grid::center(std::size_t i) const {
  const auto ix = static_cast<int>(i % nx_);
  const auto iy = static_cast<int>(i / nx_);
  return {origin_.x + (ix + 0.5) * cell_, origin_.y + (iy + 0.5) * cell_};
}

double narrowest_corridor(const Environment& env) {
  const auto verts = env.vertices();
  const auto edges = env.edges();
  double best = std::numeric_limits<double>::infinity();
  auto prev_of = [&](std::size_t i) {
    const std::size_t r = env.ring_of(i);
    return i == env.ring_begin(r) ? env.ring_begin(r) + env.ring_size(r) - 1 : i - 1;
  };
  // Shortest interior chord from `v` to an edge not in `skip` that does not
  // end at `near_a` or `near_b`.
  auto chords = [&](Point v, std::initializer_list<std::size_t> skip, Point near_a, Point near_b) {
    for (std::size_t j = 0; j < edges.size(); ++j) {
      if (std::find(skip.begin(), skip.end(), j) != skip.end()) continue;
      const Segment& e = edges[j];
      const Point t = e.b - e.a;
      const double s = std::clamp(dot(v - e.a, t) / dot(t, t), 0.0, 1.0);
      const Point x = lerp(e.a, e.b, s);
      const double d = distance(v, x);
      if (d >= best) continue;
      // The chord along v's own neighbouring edges is not a passage.
      if (distance(x, near_a) <= Tolerances::geom || distance(x, near_b) <= Tolerances::geom) continue;
      const Point mid = lerp(v, x, 0.5);
      if (env.boundary_distance(mid) <= Tolerances::geom || !env.contains(mid)) continue;
      if (!segment_inside(env, v, x)) continue;
      best = d;
    }
  };
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const std::size_t prev = prev_of(i);
    chords(verts[i], {i, prev}, verts[env.next_edge(i)], verts[prev]);
  }
  // Edge midpoints catch parallel walls, whose closest pair ends at corners.
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::size_t prev = prev_of(i);
    const std::size_t next = env.next_edge(i);
    const Point m = lerp(edges[i].a, edges[i].b, 0.5);
    chords(m, {i, prev, next}, edges[i].a, edges[i].b);
  }
  return best;
}

namespace {

constexpr double kEps = Tolerances::geom;
constexpr int kBuckets = 256;
constexpr int kMaxSplit = 10;

// Monotone in the polar angle, in [0, 4).
double pseudo_angle(Point d) {
  const double p = d.y / (std::abs(d.x) + std::abs(d.y));
  if (d.x < 0.0) return 2.0 - p;
  return d.y < 0.0 ? 4.0 + p : p;
}

int bucket_of(double pa) { return std::min(kBuckets - 1, static_cast<int>(pa * (kBuckets / 4.0))); }

// Segment tests from one viewpoint; edges are bucketed by the directions they
// subtend so a query only meets edges that can block it.
class Viewer {
 public:
  static constexpr std::uint32_t kNone = 0xffffffffu;

  Viewer(const Environment& env, Point p) : env_(env), p_(p), buckets_(kBuckets) {
    const auto edges = env.edges();
    lines_.reserve(edges.size());
    for (std::size_t g = 0; g < edges.size(); ++g) {
      const Point a = edges[g].a - p;
      const Point b = edges[g].b - p;
      const Point t = b - a;
      const Point unit = (1.0 / norm(t)) * t;
      lines_.push_back({a, b, unit, cross(unit, p - edges[g].a)});

      const double near = segment_distance(p, edges[g].a, edges[g].b);
      const std::pair<double, std::uint32_t> entry{near, static_cast<std::uint32_t>(g)};
      if (near <= kEps) {
        for (auto& bk : buckets_) bk.push_back(entry);
        continue;
      }
      double from = pseudo_angle(a);
      double to = pseudo_angle(b);
      if (cross(a, b) < 0.0) std::swap(from, to);
      // An edge subtends less than a half turn; a longer arc is rounding on a radial edge.
      if (std::fmod(to - from + 4.0, 4.0) > 2.0) std::swap(from, to);
      const int b0 = bucket_of(from) - 1;
      int b1 = bucket_of(to) + 1;
      if (b1 < b0 + 2) b1 += kBuckets;
      for (int k = b0; k <= b1; ++k) buckets_[((k % kBuckets) + kBuckets) % kBuckets].push_back(entry);
    }
    for (auto& bk : buckets_) std::sort(bk.begin(), bk.end());
  }

  /// `hint` is an edge that blocked this query before; it is tried first and
  /// replaced by the blocking edge found.
  bool sees(Point q, std::uint32_t& hint) const {
    const Point d = q - p_;
    const double len = norm(d);
    if (len <= kEps) return true;
    const double tol = kEps * len;
    if (hint != kNone && crosses(lines_[hint], d, tol) == Cross::proper) return false;
    bool touch = false;
    for (const auto& [near, g] : buckets_[bucket_of(pseudo_angle(d))]) {
      if (near > len + kEps) break;
      const Cross c = crosses(lines_[g], d, tol);
      if (c == Cross::proper) {
        hint = g;
        return false;
      }
      touch = touch || c == Cross::touch;
    }
    return !touch || segment_inside(env_, p_, q);
  }

  bool sees(Point q) const {
    std::uint32_t hint = kNone;
    return sees(q, hint);
  }

 private:
  enum class Cross { none, touch, proper };

  // Edge relative to p: endpoints, unit direction, signed distance of p from its line.
  struct Line {
    Point a, b, unit;
    double sp;
  };

  static Cross crosses(const Line& e, Point d, double tol) {
    const double sa = cross(d, e.a);
    const double sb = cross(d, e.b);
    if ((sa > tol && sb > tol) || (sa < -tol && sb < -tol)) return Cross::none;
    const double sq = e.sp + cross(e.unit, d);
    if ((e.sp > kEps && sq > kEps) || (e.sp < -kEps && sq < -kEps)) return Cross::none;
    if (std::abs(sa) > tol && std::abs(sb) > tol && std::abs(e.sp) > kEps && std::abs(sq) > kEps) {
      return Cross::proper;
    }
    return Cross::touch;
  }

  const Environment& env_;
  Point p_;
  std::vector<Line> lines_;
  // Per bucket: (distance from p, edge), nearest first.
  std::vector<std::vector<std::pair<double, std::uint32_t>>> buckets_;
};

}  // namespace

std::vector<std::uint8_t> visible_cells(const Environment& env, const Grid& grid, Point p) {
  const Viewer viewer(env, p);
  std::vector<std::uint8_t> out(grid.size(), 0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.free(i) && viewer.sees(grid.center(i))) out[i] = 1;
  }
  return out;
}

GridVerdict grid_verify(const Environment& env, const Solution& s, int resolution) {
  return grid_verify(env, s, resolution, std::chrono::steady_clock::time_point::max());
}

GridVerdict grid_verify(const Environment& env, const Solution& s, int resolution,
                        std::chrono::steady_clock::time_point deadline) {
  if (resolution < 64) throw std::invalid_argument("grid resolution must be at least 64");
  if (s.waypoints.empty()) throw std::invalid_argument("solution has no waypoints");
  const Grid grid(env, resolution);
  if (narrowest_corridor(env) < 3.0 * grid.cell()) {
    throw ResolutionTooCoarse("a corridor of the environment is narrower than three cells");
  }
  for (const JointConfig& c : s.waypoints) {
    if (c.size() != s.waypoints.front().size()) {
      throw std::invalid_argument("waypoints differ in pursuer count");
    }
    if (!config_inside(env, c)) throw InvalidConfig("waypoint outside the environment");
  }

  // Work on a copy padded by one blocked cell so neighbours need no bounds checks.
  const int nx = grid.nx();
  const int ny = grid.ny();
  const int w = nx + 2;
  const std::size_t padded = static_cast<std::size_t>(w) * (ny + 2);
  auto unpad = [&](std::size_t i) {
    return static_cast<std::size_t>((static_cast<int>(i / w) - 1) * nx + static_cast<int>(i % w) - 1);
  };
  std::vector<std::uint8_t> open(padded, 0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.free(i)) open[(i / nx + 1) * w + i % nx + 1] = 1;
  }
  const std::array<std::ptrdiff_t, 8> around{-w - 1, -w, -w + 1, -1, 1, w - 1, w, w + 1};

  // Per-step memo: stamp == step means the entry is current.
  std::vector<std::uint32_t> seen_stamp(padded, 0);
  std::vector<std::uint8_t> seen_hidden(padded, 0);
  std::vector<std::uint32_t> mark(padded, 0);
  std::uint32_t step = 0;
  std::vector<Viewer> viewers;
  // Last blocking edge per (pursuer, cell); pursuers move little per step.
  const std::size_t n = s.waypoints.front().size();
  std::vector<std::vector<std::uint32_t>> hints(n, std::vector<std::uint32_t>(padded, Viewer::kNone));
  std::vector<std::size_t> slot;

  auto make_viewers = [&](const JointConfig& c, std::vector<Viewer>& out, std::vector<std::size_t>& slots) {
    out.clear();
    slots.clear();
    std::vector<Point> distinct;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (std::find(distinct.begin(), distinct.end(), c[k]) != distinct.end()) continue;
      distinct.push_back(c[k]);
      out.emplace_back(env, c[k]);
      slots.push_back(k);
    }
  };
  auto configure = [&](const JointConfig& c) {
    ++step;
    make_viewers(c, viewers, slot);
  };
  auto hidden = [&](std::size_t i) {
    if (seen_stamp[i] != step) {
      seen_stamp[i] = step;
      const Point q = grid.center(unpad(i));
      bool h = true;
      for (std::size_t k = 0; k < viewers.size() && h; ++k) h = !viewers[k].sees(q, hints[slot[k]][i]);
      seen_hidden[i] = h;
    }
    return seen_hidden[i] != 0;
  };

  std::vector<std::uint32_t> contaminated;
  std::vector<std::uint8_t> inside(padded, 0);
  configure(s.waypoints.front());
  for (std::size_t i = 0; i < padded; ++i) {
    if (open[i] && hidden(i)) {
      contaminated.push_back(static_cast<std::uint32_t>(i));
      inside[i] = 1;
    }
  }

  GridVerdict v;
  v.cell = grid.cell();
  std::vector<std::uint32_t> seeds;
  std::vector<std::uint32_t> next;
  std::vector<std::uint32_t> stack;
  std::vector<Viewer> probe;
  std::vector<std::size_t> probe_slot;

  // A cell stays contaminated only if it is hidden throughout the step. Far
  // from a pursuer the visibility boundary can jump several cells per step, so
  // a step is halved while some surviving cell is seen at its midpoint.
  auto seen_between = [&](const JointConfig& mid) {
    make_viewers(mid, probe, probe_slot);
    for (std::uint32_t c : seeds) {
      // Only the rim can be swept first; interior cells are refilled from it.
      const bool rim = std::any_of(around.begin(), around.end(), [&](std::ptrdiff_t off) {
        const std::size_t nb = c + off;
        return open[nb] && !inside[nb];
      });
      if (!rim) continue;
      const Point q = grid.center(unpad(c));
      for (std::size_t k = 0; k < probe.size(); ++k) {
        if (probe[k].sees(q, hints[probe_slot[k]][c])) return true;
      }
    }
    return false;
  };
  auto advance = [&](auto&& self, const JointConfig& a, const JointConfig& b, int depth) -> void {
    if (contaminated.empty()) return;
    if (deadline != std::chrono::steady_clock::time_point::max() &&
        std::chrono::steady_clock::now() > deadline) {
      throw Timeout("grid replay passed its deadline");
    }
    configure(b);
    seeds.clear();
    for (std::uint32_t c : contaminated) {
      if (hidden(c)) seeds.push_back(c);
    }
    if (depth < kMaxSplit && !seeds.empty()) {
      const JointConfig mid = interpolate(a, b, 0.5);
      if (seen_between(mid)) {
        self(self, a, mid, depth + 1);
        self(self, mid, b, depth + 1);
        return;
      }
    }
    ++v.steps;
    next.clear();
    for (std::uint32_t seed : seeds) {
      if (mark[seed] == step) continue;
      mark[seed] = step;
      stack.push_back(seed);
      while (!stack.empty()) {
        const std::uint32_t c = stack.back();
        stack.pop_back();
        next.push_back(c);
        for (std::ptrdiff_t off : around) {
          const auto nb = static_cast<std::uint32_t>(c + off);
          if (!open[nb] || mark[nb] == step || !hidden(nb)) continue;
          mark[nb] = step;
          stack.push_back(nb);
        }
      }
    }
    for (std::uint32_t c : contaminated) inside[c] = 0;
    for (std::uint32_t c : next) inside[c] = 1;
    contaminated.swap(next);
  };

  const double half = 0.5 * grid.cell();
  for (std::size_t k = 1; k < s.waypoints.size() && !contaminated.empty(); ++k) {
    const JointConfig& a = s.waypoints[k - 1];
    const JointConfig& b = s.waypoints[k];
    const auto m = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(max_displacement(a, b) / half)));
    JointConfig prev = a;
    for (std::size_t j = 1; j <= m && !contaminated.empty(); ++j) {
      JointConfig cur = interpolate(a, b, static_cast<double>(j) / static_cast<double>(m));
      advance(advance, prev, cur, 0);
      prev = std::move(cur);
    }
  }
  v.contaminated_cells = contaminated.size();
  v.contaminated_area = static_cast<double>(contaminated.size()) * grid.cell() * grid.cell();
  v.cleared = contaminated.empty();
  return v;
}

}  // namespace pursuit
