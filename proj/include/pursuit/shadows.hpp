#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "pursuit/geometry.hpp"

namespace pursuit {

/// Positions of all n pursuers; a point of E^n.
struct JointConfig {
  std::vector<Point> positions;

  std::size_t size() const { return positions.size(); }
  const Point& operator[](std::size_t i) const { return positions[i]; }
  Point& operator[](std::size_t i) { return positions[i]; }
  friend bool operator==(const JointConfig&, const JointConfig&) = default;
};

/// Euclidean distance in R^(2n).
double joint_distance(const JointConfig& a, const JointConfig& b);
/// Largest single-pursuer displacement between two configurations.
double max_displacement(const JointConfig& a, const JointConfig& b);
JointConfig interpolate(const JointConfig& a, const JointConfig& b, double t);
/// True iff every pursuer's straight segment lies in E.
bool motion_inside(const Environment& env, const JointConfig& a, const JointConfig& b);
bool config_inside(const Environment& env, const JointConfig& c);

/// Connected components of E minus the pursuers' joint visibility, ordered
/// lexicographically by centroid.
struct ShadowSet {
  std::vector<Region> shadows;
  std::vector<double> areas;
  std::vector<Box> bounds;
  std::vector<std::vector<WallSpan>> walls;

  std::size_t size() const { return shadows.size(); }
  bool empty() const { return shadows.empty(); }
};

ShadowSet shadow_set(const Environment& env, const JointConfig& c);

/// One bit per shadow; a set bit means contaminated.
using LabelBits = boost::dynamic_bitset<std::uint64_t>;

struct Provenance {
  std::size_t vertex = 0;
  std::size_t label = 0;
  std::size_t edge = 0;
};

struct ShadowLabel {
  LabelBits contaminated;
  std::optional<Provenance> provenance;

  bool fully_cleared() const { return contaminated.none(); }
  friend bool operator==(const ShadowLabel& a, const ShadowLabel& b) {
    return a.contaminated == b.contaminated;
  }
};

ShadowLabel all_contaminated(const ShadowSet& s);

struct ShadowEvents {
  std::size_t appear = 0;
  std::size_t disappear = 0;
  std::size_t merge = 0;
  std::size_t split = 0;
};

/// Which start shadows flow into which end shadows along a motion. The status of
/// an end shadow is the OR of its sources: appear (no source) is clear, merge is
/// contaminated unless all sources are clear, split copies the parent.
class ShadowRelation {
 public:
  ShadowRelation() = default;
  ShadowRelation(std::size_t from_count, std::size_t to_count);
  static ShadowRelation identity(std::size_t count);
  /// Pairs of shadows whose interiors overlap by more than the area tolerance.
  static ShadowRelation overlap(const Environment& env, const ShadowSet& from,
                                const ShadowSet& to);

  std::size_t from_count() const { return succs_.size(); }
  std::size_t to_count() const { return preds_.size(); }
  bool related(std::size_t from, std::size_t to) const { return preds_[to].test(from); }
  void relate(std::size_t from, std::size_t to);

  /// True if some shadow on either side has no partner.
  bool has_unmatched() const;
  ShadowEvents events() const;

  /// Label after the motion, given the label before it.
  LabelBits forward(const LabelBits& before) const;
  /// Label after the reversed motion (end to start).
  LabelBits backward(const LabelBits& after) const;
  /// This motion followed by `next`.
  ShadowRelation then(const ShadowRelation& next) const;
  ShadowRelation reversed() const;

  friend bool operator==(const ShadowRelation& a, const ShadowRelation& b) {
    return a.preds_ == b.preds_;
  }

 private:
  std::vector<LabelBits> preds_;  // per end shadow: its start shadows
  std::vector<LabelBits> succs_;  // per start shadow: its end shadows
};

struct MotionOptions {
  /// Per-pursuer step length; non-positive selects diam(E) / 500.
  double step = 0.0;
  /// Bisection depth used when a step leaves some shadow without a partner.
  int max_refine_depth = 6;
};

double default_step(const Environment& env);

struct MotionTrace {
  ShadowRelation relation;
  ShadowEvents events;
  std::size_t shadow_sets_computed = 0;
};

/// Sweeps the straight joint motion a -> b and composes per-step shadow
/// correspondences. `from`/`to` must be shadow_set(a) / shadow_set(b).
MotionTrace trace_motion(const Environment& env, const JointConfig& a, const ShadowSet& from,
                         const JointConfig& b, const ShadowSet& to, const MotionOptions& opts = {});

/// Label over shadow_set(to) reached from `label` over shadow_set(from).
/// Throws InvalidEdge if some pursuer's segment leaves E.
ShadowLabel transition(const Environment& env, const JointConfig& from, const JointConfig& to,
                       const ShadowLabel& label, const MotionOptions& opts = {});

/// Contaminated iff any parent is contaminated (true = contaminated).
bool merge_status(std::span<const bool> parents);

double contaminated_area(const ShadowSet& shadows, const LabelBits& label);
double contaminated_area(const Environment& env, const JointConfig& c, const ShadowLabel& label);

}  // namespace pursuit
