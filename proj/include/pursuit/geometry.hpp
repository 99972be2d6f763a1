#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <boost/geometry/core/cs.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <boost/geometry/geometries/register/point.hpp>

#include "pursuit/tolerances.hpp"

namespace pursuit {

/// Random engine used throughout; every stochastic routine takes one by reference.
using Rng = std::mt19937_64;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point a, Point b) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::sqrt(a.x * a.x + a.y * a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }
inline Point lerp(Point a, Point b, double t) { return a + t * (b - a); }

/// Distance from `p` to the closed segment ab.
double segment_distance(Point p, Point a, Point b);

struct Segment {
  Point a;
  Point b;
};

struct Box {
  Point lo{+INFINITY, +INFINITY};
  Point hi{-INFINITY, -INFINITY};

  void extend(Point p) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  bool empty() const { return lo.x > hi.x; }
  bool overlaps(const Box& o, double pad = 0.0) const {
    return !(o.lo.x > hi.x + pad || o.hi.x < lo.x - pad || o.lo.y > hi.y + pad ||
             o.hi.y < lo.y - pad);
  }
  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
};

}  // namespace pursuit

BOOST_GEOMETRY_REGISTER_POINT_2D(pursuit::Point, double, boost::geometry::cs::cartesian, x, y)

namespace pursuit {

// Counterclockwise outer rings, clockwise holes, explicitly closed.
using Polygon = boost::geometry::model::polygon<Point, false, true>;
using MultiPolygon = boost::geometry::model::multi_polygon<Polygon>;

/// A polygonal subset of the plane: interior-disjoint polygons-with-holes.
class Region {
 public:
  Region() = default;
  explicit Region(MultiPolygon polygons);
  explicit Region(Polygon polygon);

  const MultiPolygon& polygons() const { return polygons_; }
  bool empty() const { return polygons_.empty(); }
  std::size_t polygon_count() const { return polygons_.size(); }

  double area() const;
  Box bounds() const;
  Point centroid() const;
  /// Closed containment (boundary counts as inside).
  bool contains(Point p) const;

 private:
  MultiPolygon polygons_;
};

/// Free space E: an outer boundary minus polygonal holes. Immutable once built.
class Environment {
 public:
  /// Validates and normalizes orientation. Any reorientation is recorded in
  /// `orientation_fixes()`. Throws InvalidEnvironment on invalid input.
  static Environment create(std::vector<Point> outer, std::vector<std::vector<Point>> holes);

  const std::vector<Point>& outer() const { return outer_; }
  const std::vector<std::vector<Point>>& holes() const { return holes_; }
  const std::vector<std::string>& orientation_fixes() const { return fixes_; }

  const Region& region() const { return region_; }
  std::span<const Segment> edges() const { return edges_; }
  std::span<const Point> vertices() const { return vertices_; }

  double area() const { return area_; }
  double diameter() const { return diameter_; }
  const Box& bounds() const { return bounds_; }

  /// Closed membership test: points within `eps` of the boundary count as inside.
  bool contains(Point p, double eps = Tolerances::geom) const;
  double boundary_distance(Point p) const;

  /// Boundary rings in edge order: the outer ring first, then each hole.
  std::size_t ring_count() const { return ring_start_.size() - 1; }
  std::size_t ring_of(std::size_t edge) const { return ring_of_[edge]; }
  std::size_t ring_begin(std::size_t ring) const { return ring_start_[ring]; }
  std::size_t ring_size(std::size_t ring) const { return ring_start_[ring + 1] - ring_start_[ring]; }
  /// Edge following `edge` along its ring; edge i starts at vertex i.
  std::size_t next_edge(std::size_t edge) const {
    const std::size_t r = ring_of_[edge];
    return edge + 1 == ring_start_[r + 1] ? ring_start_[r] : edge + 1;
  }

 private:
  Environment() = default;

  std::vector<Point> outer_;
  std::vector<std::vector<Point>> holes_;
  std::vector<std::string> fixes_;
  Region region_;
  std::vector<Segment> edges_;
  std::vector<Point> vertices_;
  std::vector<std::size_t> ring_start_;
  std::vector<std::size_t> ring_of_;
  double area_ = 0.0;
  double diameter_ = 0.0;
  Box bounds_;
};

/// Points of E that see `p`. Star-shaped about `p`. Throws PointOutsideEnvironment.
Region visibility_polygon(const Environment& env, Point p);

/// A piece of boundary edge `edge`, as parameters s0 < s1 along it.
struct WallSpan {
  std::size_t edge = 0;
  double s0 = 0.0;
  double s1 = 0.0;
};

/// Pieces of E's boundary that are also boundary of `r`, sorted by edge.
std::vector<WallSpan> boundary_walls(const Environment& env, const Region& r);
/// True if some boundary edge has a common piece longer than `min_length`.
bool share_wall(const Environment& env, std::span<const WallSpan> a, std::span<const WallSpan> b,
                double min_length);

/// E minus the visibility polygon of `p`, built from the windows of the
/// visibility polygon. Pieces at or below the area tolerance are dropped.
Region hidden_region(const Environment& env, Point p);
/// E minus the union of the viewers' visibility polygons.
Region hidden_region(const Environment& env, std::span<const Point> viewers);

/// One component of a hidden region with the boundary pieces it touches.
struct HiddenPiece {
  Polygon polygon;
  std::vector<WallSpan> walls;
};
std::vector<HiddenPiece> hidden_pieces(const Environment& env, std::span<const Point> viewers);

/// True iff the closed segment pq lies in E; grazing contact with the boundary is allowed.
bool segment_inside(const Environment& env, Point p, Point q);

/// E minus the union of `cover`. Components at or below the area tolerance are dropped.
Region subtract(const Environment& env, std::span<const Region> cover);
Region subtract(const Region& from, const Region& cut);
Region intersect(const Region& a, const Region& b);
/// Whether the interiors of a and b meet; empty when the boundaries touch and
/// the question needs an overlay.
std::optional<bool> interiors_meet(const Polygon& a, const Polygon& b);
/// Area of a ∩ b, with a bounding-box early out.
double intersection_area(const Region& a, const Region& b);

/// Path-connected pieces of `r`, one per polygon.
std::vector<Region> components(const Region& r);
double area(const Region& r);

/// Uniform sampling over a region's area via a vertical trapezoid decomposition.
class RegionSampler {
 public:
  /// Throws EmptyRegion if the region's area does not exceed the area tolerance.
  explicit RegionSampler(const Region& r);
  Point sample(Rng& rng) const;

 private:
  struct Triangle {
    Point a, b, c;
  };
  std::vector<Triangle> triangles_;
  std::vector<double> cumulative_;
};

Point random_point(const Region& r, Rng& rng);

}  // namespace pursuit
