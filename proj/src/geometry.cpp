#include "pursuit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>

#include <boost/geometry.hpp>

#include "pursuit/errors.hpp"

namespace bg = boost::geometry;

namespace pursuit {

namespace {

constexpr double kEps = Tolerances::geom;
constexpr double kPi = std::numbers::pi;

double signed_ring_area(const std::vector<Point>& ring) {
  double a = 0.0;
  for (std::size_t i = 0, n = ring.size(); i < n; ++i) {
    a += cross(ring[i], ring[(i + 1) % n]);
  }
  return 0.5 * a;
}

std::vector<Point> clean_ring(std::vector<Point> ring) {
  if (ring.size() > 1 && distance(ring.front(), ring.back()) <= kEps) ring.pop_back();
  std::vector<Point> out;
  for (Point p : ring) {
    if (out.empty() || distance(out.back(), p) > kEps) out.push_back(p);
  }
  while (out.size() > 1 && distance(out.front(), out.back()) <= kEps) out.pop_back();
  return out;
}

template <typename RingT>
void append_ring(RingT& dst, const std::vector<Point>& src) {
  for (Point p : src) dst.push_back(p);
  dst.push_back(src.front());
}

MultiPolygon drop_slivers(MultiPolygon mp) {
  std::erase_if(mp, [](const Polygon& p) { return std::abs(bg::area(p)) <= Tolerances::area; });
  return mp;
}

// Inward direction at the boundary point closest to p.
Point inward_direction(const Environment& env, Point p) {
  double best = std::numeric_limits<double>::infinity();
  Point dir{0.0, 0.0};
  for (const Segment& e : env.edges()) {
    const double d = segment_distance(p, e.a, e.b);
    const Point t = e.b - e.a;
    const Point left = (1.0 / norm(t)) * Point{-t.y, t.x};
    if (d < best - kEps) {
      best = d;
      dir = left;
    } else if (d <= best + kEps) {
      dir = dir + left;
    }
  }
  const double len = norm(dir);
  return len > 0.0 ? (1.0 / len) * dir : Point{0.0, 0.0};
}

}  // namespace

double segment_distance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

// ---------------------------------------------------------------------------
// Region

Region::Region(MultiPolygon polygons) : polygons_(std::move(polygons)) {}

Region::Region(Polygon polygon) { polygons_.push_back(std::move(polygon)); }

double Region::area() const { return polygons_.empty() ? 0.0 : bg::area(polygons_); }

Box Region::bounds() const {
  Box b;
  for (const Polygon& poly : polygons_) {
    for (const Point& p : poly.outer()) b.extend(p);
  }
  return b;
}

Point Region::centroid() const {
  if (polygons_.empty()) return {};
  Point c;
  bg::centroid(polygons_, c);
  return c;
}

bool Region::contains(Point p) const { return !polygons_.empty() && bg::covered_by(p, polygons_); }

// ---------------------------------------------------------------------------
// Environment

Environment Environment::create(std::vector<Point> outer, std::vector<std::vector<Point>> holes) {
  Environment env;
  outer = clean_ring(std::move(outer));
  if (outer.size() < 3) throw InvalidEnvironment("outer boundary needs at least 3 vertices");
  if (signed_ring_area(outer) < 0.0) {
    std::reverse(outer.begin(), outer.end());
    env.fixes_.push_back("outer boundary was clockwise; reversed");
  }
  for (std::size_t h = 0; h < holes.size(); ++h) {
    holes[h] = clean_ring(std::move(holes[h]));
    if (holes[h].size() < 3) {
      throw InvalidEnvironment("hole " + std::to_string(h) + " needs at least 3 vertices");
    }
    if (signed_ring_area(holes[h]) > 0.0) {
      std::reverse(holes[h].begin(), holes[h].end());
      env.fixes_.push_back("hole " + std::to_string(h) + " was counterclockwise; reversed");
    }
  }

  Polygon poly;
  append_ring(poly.outer(), outer);
  for (const auto& hole : holes) {
    poly.inners().emplace_back();
    append_ring(poly.inners().back(), hole);
  }
  std::string reason;
  if (!bg::is_valid(poly, reason)) throw InvalidEnvironment("invalid environment: " + reason);

  env.outer_ = std::move(outer);
  env.holes_ = std::move(holes);
  env.region_ = Region(std::move(poly));
  env.area_ = env.region_.area();

  auto add_ring = [&env](const std::vector<Point>& ring) {
    const std::size_t id = env.ring_start_.size();
    env.ring_start_.push_back(env.edges_.size());
    for (std::size_t i = 0, n = ring.size(); i < n; ++i) {
      env.edges_.push_back({ring[i], ring[(i + 1) % n]});
      env.vertices_.push_back(ring[i]);
      env.ring_of_.push_back(id);
    }
  };
  add_ring(env.outer_);
  for (const auto& hole : env.holes_) add_ring(hole);
  env.ring_start_.push_back(env.edges_.size());

  for (Point p : env.outer_) env.bounds_.extend(p);
  for (std::size_t i = 0; i < env.outer_.size(); ++i) {
    for (std::size_t j = i + 1; j < env.outer_.size(); ++j) {
      env.diameter_ = std::max(env.diameter_, distance(env.outer_[i], env.outer_[j]));
    }
  }
  return env;
}

double Environment::boundary_distance(Point p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Segment& e : edges_) best = std::min(best, segment_distance(p, e.a, e.b));
  return best;
}

bool Environment::contains(Point p, double eps) const {
  if (p.x < bounds_.lo.x - eps || p.x > bounds_.hi.x + eps || p.y < bounds_.lo.y - eps ||
      p.y > bounds_.hi.y + eps) {
    return false;
  }
  bool inside = false;
  for (const Segment& e : edges_) {
    if (segment_distance(p, e.a, e.b) <= eps) return true;
    // Crossing-number parity; the interior is the even-odd fill of all rings.
    if ((e.a.y > p.y) != (e.b.y > p.y)) {
      const double x = e.a.x + (p.y - e.a.y) * (e.b.x - e.a.x) / (e.b.y - e.a.y);
      if (x > p.x) inside = !inside;
    }
  }
  return inside;
}

// ---------------------------------------------------------------------------
// Visibility

namespace {

// A boundary point located on an edge: edge i runs from vertex i, s in [0, 1).
struct Located {
  Point point;
  std::size_t edge = 0;
  double s = 0.0;
};

struct RayHit {
  double t = std::numeric_limits<double>::infinity();
  Located at;

  void offer(double tt, Point pt, std::size_t edge, double s) {
    if (tt < t) {
      t = tt;
      at = {pt, edge, s};
    }
  }
};

Point nudge_inside(const Environment& env, Point p) {
  const double nudge = 1e-7 * std::max(1.0, env.diameter());
  if (env.boundary_distance(p) >= nudge) return p;
  const Point dir = inward_direction(env, p);
  for (double scale : {1.0, 4.0, 16.0}) {
    const Point q = p + (scale * nudge) * dir;
    if (env.contains(q, 0.0) && env.boundary_distance(q) > 0.25 * nudge) return q;
  }
  return p;
}

// Counterclockwise visibility boundary. A window joins ring[k] to ring[k + 1]
// along a ray; everything else follows environment edges.
struct VisibilityTrace {
  Point origin;
  std::vector<Located> ring;
  std::vector<double> angle;
  std::vector<std::size_t> windows;

  // Strictly outside the (star-shaped) visibility polygon, for points of E.
  bool hides(Point q) const {
    const Point d = q - origin;
    const double a = std::atan2(d.y, d.x);
    const std::size_t m = ring.size();
    const auto hi = static_cast<std::size_t>(std::upper_bound(angle.begin(), angle.end(), a) - angle.begin());
    const std::size_t k = (hi + m - 1) % m;
    const Point p0 = ring[k].point;
    const Point p1 = ring[(k + 1) % m].point;
    return cross(p1 - p0, q - p0) < 0.0;
  }
};

VisibilityTrace trace_visibility(const Environment& env, Point p) {
  if (!env.contains(p)) throw PointOutsideEnvironment("point outside environment");
  const Point origin = nudge_inside(env, p);

  const auto verts = env.vertices();
  const std::size_t m = verts.size();
  std::vector<Point> rel(m);
  std::vector<double> vang(m);
  std::vector<std::size_t> next(m);
  for (std::size_t i = 0; i < m; ++i) {
    rel[i] = verts[i] - origin;
    vang[i] = std::atan2(rel[i].y, rel[i].x);
    next[i] = env.next_edge(i);
  }

  std::vector<std::size_t> dirs;
  dirs.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (norm(rel[i]) > kEps) dirs.push_back(i);
  }
  std::stable_sort(dirs.begin(), dirs.end(), [&](std::size_t a, std::size_t b) { return vang[a] < vang[b]; });

  // Group vertices lying on a common ray from the origin.
  auto on_ray = [&](Point rep, Point w) {
    const Point d = rep - origin;
    const Point u = (1.0 / norm(d)) * d;
    return std::abs(cross(u, w - origin)) <= kEps && dot(u, w - origin) > 0.0;
  };
  std::vector<Point> rays;
  std::vector<double> ray_angle;
  for (std::size_t i : dirs) {
    if (rays.empty() || !on_ray(rays.back(), verts[i])) {
      rays.push_back(verts[i]);
      ray_angle.push_back(vang[i]);
    }
  }
  if (rays.size() > 1 && on_ray(rays.front(), rays.back())) {
    rays.pop_back();
    ray_angle.pop_back();
  }

  // Only edges whose angular span from the origin covers a ray can change its
  // sides; bucket edges per ray, in edge order so ties resolve as before.
  const std::size_t nr = rays.size();
  std::vector<std::size_t> start(nr + 1, 0);
  std::vector<std::size_t> bucket;
  auto for_each_ray = [&](std::size_t g, auto&& fn) {
    const Point a = rel[g];
    const Point b = rel[next[g]];
    const double near = std::min(norm(a), norm(b));
    constexpr double kNear = 1e-6;
    if (near <= kNear || segment_distance(origin, verts[g], verts[next[g]]) <= kNear) {
      for (std::size_t k = 0; k < nr; ++k) fn(k);
      return;
    }
    const double slack = 4.0 * kEps / near + 1e-9;
    const double ta = vang[g];
    const double tb = vang[next[g]];
    double lo = cross(a, b) > 0.0 ? ta : tb;
    double span = std::abs(tb - ta);
    if (span > kPi) span = 2.0 * kPi - span;
    lo -= slack;
    span += 2.0 * slack;
    if (lo < -kPi) lo += 2.0 * kPi;
    auto range = [&](double from, double to) {
      const auto i0 = std::lower_bound(ray_angle.begin(), ray_angle.end(), from) - ray_angle.begin();
      const auto i1 = std::upper_bound(ray_angle.begin(), ray_angle.end(), to) - ray_angle.begin();
      for (auto k = i0; k < i1; ++k) fn(static_cast<std::size_t>(k));
    };
    const double hi = lo + span;
    if (hi < kPi) {
      range(lo, hi);
    } else {
      range(-kPi, hi - 2.0 * kPi);
      range(lo, kPi);
    }
  };
  for (std::size_t g = 0; g < m; ++g) for_each_ray(g, [&](std::size_t k) { ++start[k + 1]; });
  for (std::size_t k = 0; k < nr; ++k) start[k + 1] += start[k];
  bucket.resize(start[nr]);
  {
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (std::size_t g = 0; g < m; ++g) for_each_ray(g, [&](std::size_t k) { bucket[fill[k]++] = g; });
  }

  VisibilityTrace out;
  out.origin = origin;
  out.ring.reserve(2 * nr + 1);
  for (std::size_t k = 0; k < nr; ++k) {
    const Point d = rays[k] - origin;
    const Point u = (1.0 / norm(d)) * d;
    auto side_of = [&](double c) { return std::abs(c) <= kEps ? 0 : (c > 0 ? 1 : -1); };
    RayHit left;
    RayHit right;
    for (std::size_t at = start[k]; at < start[k + 1]; ++at) {
      const std::size_t g = bucket[at];
      const std::size_t h = next[g];
      const double lg = cross(u, rel[g]);
      const double lh = cross(u, rel[h]);
      const int sa = side_of(lg);
      const int sb = side_of(lh);
      if (sa == sb) continue;
      if (sa == 0 || sb == 0) {
        // An edge leaving a vertex on the ray blocks the side it leaves toward.
        const std::size_t w = sa == 0 ? g : h;
        const double t = dot(u, rel[w]);
        if (t <= kEps) continue;
        (sa + sb > 0 ? left : right).offer(t, verts[w], w, 0.0);
        continue;
      }
      const double s = lg / (lg - lh);
      const Point x = lerp(verts[g], verts[h], s);
      const double t = dot(u, x - origin);
      if (t <= kEps) continue;
      left.offer(t, x, g, s);
      right.offer(t, x, g, s);
    }
    if (!std::isfinite(left.t) || !std::isfinite(right.t)) {
      throw std::logic_error("visibility ray escaped the environment");
    }
    out.ring.push_back(right.at);
    if (distance(left.at.point, right.at.point) > kEps) {
      out.windows.push_back(out.ring.size() - 1);
      out.ring.push_back(left.at);
    }
  }
  out.angle.reserve(out.ring.size());
  for (const Located& l : out.ring) {
    const Point d = l.point - origin;
    out.angle.push_back(std::atan2(d.y, d.x));
  }
  // Window ends share their ray's angle; keep the sequence sorted.
  for (std::size_t i = 1; i < out.angle.size(); ++i) out.angle[i] = std::max(out.angle[i], out.angle[i - 1]);
  return out;
}

// E minus the union of several visibility polygons, traced directly.
//
// Every window is a chord of E with its hidden side on the right of start ->
// end. The hidden set is bounded by boundary pieces hidden from everyone and by
// window pieces hidden from every other viewer; both are oriented with the
// hidden set on the left and walked as faces. Window crossings become nodes.
// Returns false when the combinatorics are inconsistent.
class HiddenTracer {
 public:
  HiddenTracer(const Environment& env, std::span<const VisibilityTrace> views)
      : env_(env), views_(views) {}

  bool run(std::vector<HiddenPiece>& out) {
    if (!collect_chords()) return false;
    if (!build_walls()) return false;
    if (!build_crossings()) return false;
    build_chord_edges();
    return walk(out);
  }

 private:
  struct Chord {
    std::size_t viewer;
    Located a;
    Located b;
    std::size_t node_a = 0;
    std::size_t node_b = 0;
    std::vector<std::pair<double, std::size_t>> cuts;  // (t, node) along a -> b
  };
  struct Mark {
    double key;
    bool is_end;
  };
  struct HalfEdge {
    std::size_t from;
    std::size_t to;
    std::optional<WallSpan> wall;
    bool used = false;
  };

  double key(const Located& l) const {
    return static_cast<double>(l.edge - env_.ring_begin(env_.ring_of(l.edge))) + l.s;
  }

  std::size_t add_node(Point p) {
    nodes_.push_back(p);
    out_.emplace_back();
    return nodes_.size() - 1;
  }

  void add_edge(std::size_t from, std::size_t to, std::optional<WallSpan> wall = {}) {
    if (from == to) return;
    edges_.push_back({from, to, wall});
    out_[from].push_back(edges_.size() - 1);
  }

  bool collect_chords() {
    const std::size_t rings = env_.ring_count();
    marks_.assign(views_.size(), std::vector<std::vector<Mark>>(rings));
    seen_.assign(views_.size(), std::vector<bool>(rings, false));
    for (std::size_t v = 0; v < views_.size(); ++v) {
      const VisibilityTrace& vis = views_[v];
      const std::size_t m = vis.ring.size();
      for (const Located& l : vis.ring) seen_[v][env_.ring_of(l.edge)] = true;
      for (std::size_t w : vis.windows) {
        Chord c{v, vis.ring[w], vis.ring[(w + 1) % m], 0, 0, {}};
        marks_[v][env_.ring_of(c.a.edge)].push_back({key(c.a), false});
        marks_[v][env_.ring_of(c.b.edge)].push_back({key(c.b), true});
        chords_.push_back(std::move(c));
      }
      for (auto& ms : marks_[v]) {
        std::sort(ms.begin(), ms.end(), [](const Mark& x, const Mark& y) { return x.key < y.key; });
        for (std::size_t i = 0; i + 1 < ms.size(); ++i) {
          if (ms[i + 1].key - ms[i].key <= kKeyEps) return false;
        }
      }
    }
    return true;
  }

  // Hidden from viewer v just after ring position x.
  bool wall_hidden(std::size_t v, std::size_t r, double x) const {
    const auto& ms = marks_[v][r];
    if (ms.empty()) return !seen_[v][r];
    auto it = std::lower_bound(ms.begin(), ms.end(), x,
                               [](const Mark& mk, double k) { return mk.key < k; });
    const Mark& last = it == ms.begin() ? ms.back() : *(it - 1);
    return !last.is_end;
  }

  bool build_walls() {
    const auto verts = env_.vertices();
    for (std::size_t r = 0; r < env_.ring_count(); ++r) {
      const std::size_t begin = env_.ring_begin(r);
      const std::size_t n = env_.ring_size(r);
      struct Stop {
        double key;
        Point point;
        std::size_t chord;
        bool chord_end;
      };
      constexpr auto kNone = std::numeric_limits<std::size_t>::max();
      std::vector<Stop> stops;
      for (std::size_t i = 0; i < n; ++i) {
        stops.push_back({static_cast<double>(i), verts[begin + i], kNone, false});
      }
      for (std::size_t c = 0; c < chords_.size(); ++c) {
        for (bool end : {false, true}) {
          const Located& l = end ? chords_[c].b : chords_[c].a;
          if (env_.ring_of(l.edge) != r) continue;
          stops.push_back({key(l), l.point, c, end});
        }
      }
      std::stable_sort(stops.begin(), stops.end(),
                       [](const Stop& x, const Stop& y) { return x.key < y.key; });

      // Stops closer than the key tolerance share a node.
      std::vector<std::size_t> node(stops.size());
      std::vector<double> group_key;
      std::vector<std::size_t> group_node;
      for (std::size_t i = 0; i < stops.size(); ++i) {
        const bool same = !group_key.empty() && stops[i].key - group_key.back() <= kKeyEps;
        if (!same) {
          group_key.push_back(stops[i].key);
          group_node.push_back(add_node(stops[i].point));
        }
        node[i] = group_node.back();
      }
      if (group_key.size() > 1 && group_key.front() + static_cast<double>(n) - group_key.back() <= kKeyEps) {
        const std::size_t merged = group_node.front();
        for (std::size_t i = 0; i < stops.size(); ++i) {
          if (node[i] == group_node.back()) node[i] = merged;
        }
        group_node.back() = merged;
      }
      for (std::size_t i = 0; i < stops.size(); ++i) {
        if (stops[i].chord == kNone) continue;
        Chord& c = chords_[stops[i].chord];
        (stops[i].chord_end ? c.node_b : c.node_a) = node[i];
      }

      const std::size_t g = group_key.size();
      for (std::size_t k = 0; k < g; ++k) {
        const std::size_t from = group_node[k];
        const std::size_t to = group_node[(k + 1) % g];
        if (from == to) continue;
        double k1 = group_key[k];
        double k2 = k + 1 < g ? group_key[k + 1] : group_key[0] + static_cast<double>(n);
        double mid = 0.5 * (k1 + k2);
        if (mid >= static_cast<double>(n)) mid -= static_cast<double>(n);
        bool all = true;
        for (std::size_t v = 0; v < views_.size() && all; ++v) all = wall_hidden(v, r, mid);
        if (!all) continue;
        const double base = std::floor(k1);
        add_edge(from, to, WallSpan{begin + static_cast<std::size_t>(base), k1 - base,
                                    std::min(1.0, k2 - base)});
      }
    }
    return true;
  }

  bool build_crossings() {
    for (std::size_t i = 0; i < chords_.size(); ++i) {
      for (std::size_t j = i + 1; j < chords_.size(); ++j) {
        Chord& c = chords_[i];
        Chord& d = chords_[j];
        if (c.viewer == d.viewer) continue;
        const Point p = c.a.point, q = c.b.point, r = d.a.point, s = d.b.point;
        const double lo_x = std::max(std::min(p.x, q.x), std::min(r.x, s.x));
        const double hi_x = std::min(std::max(p.x, q.x), std::max(r.x, s.x));
        const double lo_y = std::max(std::min(p.y, q.y), std::min(r.y, s.y));
        const double hi_y = std::min(std::max(p.y, q.y), std::max(r.y, s.y));
        if (lo_x > hi_x + kEps || lo_y > hi_y + kEps) continue;
        const double d1 = cross(q - p, r - p);
        const double d2 = cross(q - p, s - p);
        const double d3 = cross(s - r, p - r);
        const double d4 = cross(s - r, q - r);
        const double lc = norm(q - p);
        const double ld = norm(s - r);
        const bool touch_c = std::abs(d1) <= kEps * lc || std::abs(d2) <= kEps * lc;
        const bool touch_d = std::abs(d3) <= kEps * ld || std::abs(d4) <= kEps * ld;
        const bool shares = c.node_a == d.node_a || c.node_a == d.node_b || c.node_b == d.node_a ||
                            c.node_b == d.node_b;
        if (touch_c || touch_d) {
          if (shares) {
            // Chords from a common corner only meet there unless collinear.
            if (std::abs(cross(q - p, s - r)) <= kEps * lc * ld) return false;
            continue;
          }
          if ((d1 > 0) == (d2 > 0) && !touch_c) continue;
          if ((d3 > 0) == (d4 > 0) && !touch_d) continue;
          return false;
        }
        if ((d1 > 0) == (d2 > 0) || (d3 > 0) == (d4 > 0)) continue;
        const double tc = d3 / (d3 - d4);
        const double td = d1 / (d1 - d2);
        const std::size_t x = add_node(lerp(p, q, tc));
        c.cuts.push_back({tc, x});
        d.cuts.push_back({td, x});
      }
    }
    return true;
  }

  void build_chord_edges() {
    for (Chord& c : chords_) {
      std::sort(c.cuts.begin(), c.cuts.end());
      std::vector<std::pair<double, std::size_t>> stops;
      stops.push_back({0.0, c.node_a});
      stops.insert(stops.end(), c.cuts.begin(), c.cuts.end());
      stops.push_back({1.0, c.node_b});
      for (std::size_t k = 0; k + 1 < stops.size(); ++k) {
        const Point mid = 0.5 * (nodes_[stops[k].second] + nodes_[stops[k + 1].second]);
        bool all = true;
        for (std::size_t v = 0; v < views_.size() && all; ++v) {
          if (v != c.viewer) all = views_[v].hides(mid);
        }
        if (all) add_edge(stops[k + 1].second, stops[k].second);
      }
    }
  }

  bool walk(std::vector<HiddenPiece>& out) {
    std::vector<std::vector<Point>> loops;
    std::vector<std::vector<WallSpan>> loop_walls;
    for (std::size_t e0 = 0; e0 < edges_.size(); ++e0) {
      if (edges_[e0].used) continue;
      std::vector<Point> loop;
      std::vector<WallSpan> walls;
      std::size_t e = e0;
      for (std::size_t guard = 0;; ++guard) {
        if (guard > edges_.size()) return false;
        HalfEdge& h = edges_[e];
        if (h.used) return false;
        h.used = true;
        loop.push_back(nodes_[h.from]);
        if (h.wall) walls.push_back(*h.wall);
        const auto& cand = out_[h.to];
        std::size_t next = edges_.size();
        if (cand.size() == 1) {
          next = cand.front();
        } else {
          // First candidate clockwise from the reversed incoming direction.
          const Point back = nodes_[h.from] - nodes_[h.to];
          const double in = std::atan2(back.y, back.x);
          double best = std::numeric_limits<double>::infinity();
          for (std::size_t o : cand) {
            if (edges_[o].used && o != e0) continue;
            const Point d = nodes_[edges_[o].to] - nodes_[h.to];
            double rot = in - std::atan2(d.y, d.x);
            while (rot <= 0.0) rot += 2.0 * M_PI;
            while (rot > 2.0 * M_PI) rot -= 2.0 * M_PI;
            if (rot < best) {
              best = rot;
              next = o;
            }
          }
        }
        if (next == edges_.size()) return false;
        if (next == e0) break;
        e = next;
      }
      loops.push_back(clean_ring(std::move(loop)));
      loop_walls.push_back(std::move(walls));
    }

    std::vector<std::size_t> inners;
    for (std::size_t i = 0; i < loops.size(); ++i) {
      const auto& ring = loops[i];
      if (ring.size() < 3) continue;
      const double a = signed_ring_area(ring);
      if (std::abs(a) <= Tolerances::area) continue;
      if (a < 0.0) {
        inners.push_back(i);
        continue;
      }
      HiddenPiece piece;
      append_ring(piece.polygon.outer(), ring);
      piece.walls = std::move(loop_walls[i]);
      out.push_back(std::move(piece));
    }
    for (std::size_t i : inners) {
      const Point probe = loops[i].front();
      auto host = std::find_if(out.begin(), out.end(), [&](const HiddenPiece& piece) {
        return bg::within(probe, piece.polygon.outer());
      });
      if (host == out.end()) return false;
      host->polygon.inners().emplace_back();
      append_ring(host->polygon.inners().back(), loops[i]);
      host->walls.insert(host->walls.end(), loop_walls[i].begin(), loop_walls[i].end());
    }
    for (HiddenPiece& piece : out) {
      std::sort(piece.walls.begin(), piece.walls.end(), [](const WallSpan& a, const WallSpan& b) {
        return a.edge != b.edge ? a.edge < b.edge : a.s0 < b.s0;
      });
    }
    return true;
  }

  static constexpr double kKeyEps = 1e-12;

  const Environment& env_;
  std::span<const VisibilityTrace> views_;
  std::vector<Chord> chords_;
  std::vector<std::vector<std::vector<Mark>>> marks_;  // viewer, ring
  std::vector<std::vector<bool>> seen_;                // viewer, ring
  std::vector<Point> nodes_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<HalfEdge> edges_;
};

Polygon view_polygon(const VisibilityTrace& vis) {
  std::vector<Point> pts;
  pts.reserve(vis.ring.size());
  for (const Located& l : vis.ring) pts.push_back(l.point);
  std::vector<Point> cleaned = clean_ring(std::move(pts));
  Polygon poly;
  if (cleaned.size() < 3) return poly;
  append_ring(poly.outer(), cleaned);
  bg::correct(poly);
  return poly;
}

}  // namespace

Region visibility_polygon(const Environment& env, Point p) {
  Polygon poly = view_polygon(trace_visibility(env, p));
  if (poly.outer().empty()) return Region{};
  return Region(std::move(poly));
}

std::vector<HiddenPiece> hidden_pieces(const Environment& env, std::span<const Point> viewers) {
  std::vector<HiddenPiece> out;
  if (viewers.empty()) {
    out.push_back({env.region().polygons().front(), boundary_walls(env, env.region())});
    return out;
  }
  std::vector<VisibilityTrace> views;
  views.reserve(viewers.size());
  for (Point p : viewers) views.push_back(trace_visibility(env, p));
  if (HiddenTracer(env, views).run(out)) return out;

  out.clear();
  Region result = env.region();
  for (const VisibilityTrace& vis : views) {
    if (result.empty()) break;
    result = subtract(result, Region(view_polygon(vis)));
  }
  for (const Polygon& poly : result.polygons()) {
    out.push_back({poly, boundary_walls(env, Region(poly))});
  }
  return out;
}

Region hidden_region(const Environment& env, std::span<const Point> viewers) {
  MultiPolygon mp;
  for (HiddenPiece& piece : hidden_pieces(env, viewers)) mp.push_back(std::move(piece.polygon));
  return Region(std::move(mp));
}

Region hidden_region(const Environment& env, Point p) {
  return hidden_region(env, std::span<const Point>(&p, 1));
}

bool segment_inside(const Environment& env, Point p, Point q) {
  if (!env.contains(p) || !env.contains(q)) return false;
  const Point d = q - p;
  const double len = norm(d);
  if (len <= kEps) return true;
  const Point u = (1.0 / len) * d;

  std::vector<double> ts{0.0, 1.0};
  for (const Segment& e : env.edges()) {
    const double sa = cross(u, e.a - p);
    const double sb = cross(u, e.b - p);
    const bool a_on = std::abs(sa) <= kEps;
    const bool b_on = std::abs(sb) <= kEps;
    if (!a_on && !b_on && (sa > 0) != (sb > 0)) {
      // Edge straddles the line; check whether the segment straddles the edge.
      const Point t = e.b - e.a;
      const double tl = norm(t);
      const double sp = cross(t, p - e.a) / tl;
      const double sq = cross(t, q - e.a) / tl;
      if (std::abs(sp) > kEps && std::abs(sq) > kEps && (sp > 0) != (sq > 0)) return false;
      if (std::abs(sp) > kEps && std::abs(sq) > kEps) continue;
      // An endpoint of pq touches the edge interior; covered by the 0/1 parameters.
      continue;
    }
    for (auto [on, w] : {std::pair{a_on, e.a}, std::pair{b_on, e.b}}) {
      if (!on) continue;
      const double t = dot(u, w - p) / len;
      if (t > 0.0 && t < 1.0) ts.push_back(t);
    }
  }
  std::sort(ts.begin(), ts.end());
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    if ((ts[i + 1] - ts[i]) * len <= kEps) continue;
    if (!env.contains(lerp(p, q, 0.5 * (ts[i] + ts[i + 1])))) return false;
  }
  return true;
}

std::vector<WallSpan> boundary_walls(const Environment& env, const Region& r) {
  const auto edges = env.edges();
  std::vector<WallSpan> out;
  auto scan = [&](const auto& ring) {
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
      const Point u = ring[i];
      const Point w = ring[i + 1];
      for (std::size_t g = 0; g < edges.size(); ++g) {
        const Segment& e = edges[g];
        const Point t = e.b - e.a;
        const double len2 = dot(t, t);
        const double tol = kEps * std::sqrt(len2);
        if (std::abs(cross(t, u - e.a)) > tol || std::abs(cross(t, w - e.a)) > tol) continue;
        if (segment_distance(u, e.a, e.b) > kEps || segment_distance(w, e.a, e.b) > kEps) continue;
        double s0 = std::clamp(dot(u - e.a, t) / len2, 0.0, 1.0);
        double s1 = std::clamp(dot(w - e.a, t) / len2, 0.0, 1.0);
        if (s0 > s1) std::swap(s0, s1);
        if ((s1 - s0) * std::sqrt(len2) > kEps) out.push_back({g, s0, s1});
        break;
      }
    }
  };
  for (const Polygon& poly : r.polygons()) {
    scan(poly.outer());
    for (const auto& inner : poly.inners()) scan(inner);
  }
  std::sort(out.begin(), out.end(), [](const WallSpan& a, const WallSpan& b) {
    return a.edge != b.edge ? a.edge < b.edge : a.s0 < b.s0;
  });
  return out;
}

bool share_wall(const Environment& env, std::span<const WallSpan> a, std::span<const WallSpan> b,
                double min_length) {
  const auto edges = env.edges();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].edge < b[j].edge) {
      ++i;
    } else if (b[j].edge < a[i].edge) {
      ++j;
    } else {
      const std::size_t g = a[i].edge;
      const double len = distance(edges[g].a, edges[g].b);
      for (std::size_t ii = i; ii < a.size() && a[ii].edge == g; ++ii) {
        for (std::size_t jj = j; jj < b.size() && b[jj].edge == g; ++jj) {
          const double common = std::min(a[ii].s1, b[jj].s1) - std::max(a[ii].s0, b[jj].s0);
          if (common * len > min_length) return true;
        }
      }
      while (i < a.size() && a[i].edge == g) ++i;
      while (j < b.size() && b[j].edge == g) ++j;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Booleans

Region subtract(const Region& from, const Region& cut) {
  if (from.empty()) return {};
  if (cut.empty()) return from;
  if (!from.bounds().overlaps(cut.bounds(), kEps)) return from;
  MultiPolygon out;
  bg::difference(from.polygons(), cut.polygons(), out);
  return Region(drop_slivers(std::move(out)));
}

Region subtract(const Environment& env, std::span<const Region> cover) {
  Region result = env.region();
  for (const Region& c : cover) {
    if (result.empty()) break;
    result = subtract(result, c);
  }
  return result;
}

Region intersect(const Region& a, const Region& b) {
  if (a.empty() || b.empty() || !a.bounds().overlaps(b.bounds(), kEps)) return {};
  MultiPolygon out;
  bg::intersection(a.polygons(), b.polygons(), out);
  return Region(drop_slivers(std::move(out)));
}

namespace {

template <typename F>
void for_each_segment(const Polygon& poly, F&& f) {
  auto ring = [&](const auto& r) {
    for (std::size_t i = 0; i + 1 < r.size(); ++i) f(r[i], r[i + 1]);
  };
  ring(poly.outer());
  for (const auto& inner : poly.inners()) ring(inner);
}

struct Edge {
  Point a, b;
  Box box;
  double len;
};

std::vector<Edge> polygon_edges(const Polygon& poly) {
  std::vector<Edge> out;
  for_each_segment(poly, [&](Point a, Point b) {
    Edge e{a, b, {}, norm(b - a)};
    e.box.extend(a);
    e.box.extend(b);
    out.push_back(e);
  });
  return out;
}

// Crossing-number parity; `p` must not lie on the boundary.
bool inside_edges(const std::vector<Edge>& edges, const Box& box, Point p) {
  if (p.x < box.lo.x || p.x > box.hi.x || p.y < box.lo.y || p.y > box.hi.y) return false;
  bool inside = false;
  for (const Edge& e : edges) {
    if ((e.a.y > p.y) != (e.b.y > p.y)) {
      const double x = e.a.x + (p.y - e.a.y) * (e.b.x - e.a.x) / (e.b.y - e.a.y);
      if (x > p.x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

std::optional<bool> interiors_meet(const Polygon& a, const Polygon& b) {
  const std::vector<Edge> ea = polygon_edges(a);
  const std::vector<Edge> eb = polygon_edges(b);
  Box ba;
  Box bb;
  for (const Edge& e : ea) ba.extend(e.a);
  for (const Edge& e : eb) bb.extend(e.a);
  bool touching = false;
  for (const Edge& x : ea) {
    if (!x.box.overlaps(bb, kEps)) continue;
    const Point p = x.a, q = x.b;
    for (const Edge& y : eb) {
      if (!x.box.overlaps(y.box, kEps)) continue;
      const Point r = y.a, s = y.b;
      const double d1 = cross(q - p, r - p) / x.len;
      const double d2 = cross(q - p, s - p) / x.len;
      const double d3 = cross(s - r, p - r) / y.len;
      const double d4 = cross(s - r, q - r) / y.len;
      if (std::abs(d1) <= kEps || std::abs(d2) <= kEps || std::abs(d3) <= kEps || std::abs(d4) <= kEps) {
        // Meeting only at a common corner: edge midpoints settle it.
        const bool corner = p == r || p == s || q == r || q == s;
        if (corner && std::abs(cross(q - p, s - r)) > kEps * x.len * y.len) continue;
        if (segment_distance(r, p, q) <= kEps || segment_distance(s, p, q) <= kEps ||
            segment_distance(p, r, s) <= kEps || segment_distance(q, r, s) <= kEps) {
          touching = true;
        }
        continue;
      }
      if ((d1 > 0) != (d2 > 0) && (d3 > 0) != (d4 > 0)) return true;
    }
  }
  if (touching) return std::nullopt;
  // Boundaries meet at most in common corners, so every edge lies wholly
  // inside or outside the other polygon.
  for (const Edge& x : ea) {
    if (inside_edges(eb, bb, 0.5 * (x.a + x.b))) return true;
  }
  for (const Edge& y : eb) {
    if (inside_edges(ea, ba, 0.5 * (y.a + y.b))) return true;
  }
  return false;
}

double intersection_area(const Region& a, const Region& b) {
  if (a.empty() || b.empty() || !a.bounds().overlaps(b.bounds(), kEps)) return 0.0;
  MultiPolygon out;
  bg::intersection(a.polygons(), b.polygons(), out);
  return out.empty() ? 0.0 : bg::area(out);
}

std::vector<Region> components(const Region& r) {
  std::vector<Region> out;
  out.reserve(r.polygon_count());
  for (const Polygon& p : r.polygons()) out.emplace_back(p);
  return out;
}

double area(const Region& r) { return r.area(); }

// ---------------------------------------------------------------------------
// Sampling

RegionSampler::RegionSampler(const Region& r) {
  if (r.area() <= Tolerances::area) throw EmptyRegion("region has no area to sample");

  std::vector<Segment> edges;
  std::vector<double> xs;
  auto add_ring = [&](const auto& ring) {
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
      edges.push_back({ring[i], ring[i + 1]});
      xs.push_back(ring[i].x);
    }
  };
  for (const Polygon& poly : r.polygons()) {
    add_ring(poly.outer());
    for (const auto& inner : poly.inners()) add_ring(inner);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  // Between consecutive vertex abscissae no edges cross, so sorting the spanning
  // edges by height and pairing them even-odd yields interior trapezoids.
  struct Span {
    double y0, y1, ym;
  };
  std::vector<Span> spans;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const double x0 = xs[k];
    const double x1 = xs[k + 1];
    if (x1 - x0 <= 0.0) continue;
    const double xm = 0.5 * (x0 + x1);
    spans.clear();
    for (const Segment& e : edges) {
      const double lo = std::min(e.a.x, e.b.x);
      const double hi = std::max(e.a.x, e.b.x);
      if (lo > x0 || hi < x1 || hi == lo) continue;
      auto y_at = [&](double x) { return e.a.y + (x - e.a.x) * (e.b.y - e.a.y) / (e.b.x - e.a.x); };
      spans.push_back({y_at(x0), y_at(x1), y_at(xm)});
    }
    std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) { return a.ym < b.ym; });
    for (std::size_t i = 0; i + 1 < spans.size(); i += 2) {
      const Span& lo = spans[i];
      const Span& hi = spans[i + 1];
      const Point a{x0, lo.y0};
      const Point b{x1, lo.y1};
      const Point c{x1, hi.y1};
      const Point d{x0, hi.y0};
      for (const Triangle& tri : {Triangle{a, b, c}, Triangle{a, c, d}}) {
        const double ta = 0.5 * std::abs(cross(tri.b - tri.a, tri.c - tri.a));
        if (ta <= 0.0) continue;
        total += ta;
        triangles_.push_back(tri);
        cumulative_.push_back(total);
      }
    }
  }
  if (triangles_.empty()) throw EmptyRegion("region decomposition produced no triangles");
}

Point RegionSampler::sample(Rng& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double pick = unit(rng) * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), pick);
  if (it == cumulative_.end()) --it;
  const Triangle& t = triangles_[static_cast<std::size_t>(it - cumulative_.begin())];
  double s = unit(rng);
  double v = unit(rng);
  if (s + v > 1.0) {
    s = 1.0 - s;
    v = 1.0 - v;
  }
  return t.a + s * (t.b - t.a) + v * (t.c - t.a);
}

Point random_point(const Region& r, Rng& rng) { return RegionSampler(r).sample(rng); }

}  // namespace pursuit
