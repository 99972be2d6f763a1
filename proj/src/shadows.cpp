#include "pursuit/shadows.hpp"

#include <algorithm>
#include <cmath>

#include <boost/geometry.hpp>

#include "pursuit/errors.hpp"

namespace pursuit {

double joint_distance(const JointConfig& a, const JointConfig& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Point d = a[i] - b[i];
    s += dot(d, d);
  }
  return std::sqrt(s);
}

double max_displacement(const JointConfig& a, const JointConfig& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, distance(a[i], b[i]));
  return m;
}

JointConfig interpolate(const JointConfig& a, const JointConfig& b, double t) {
  JointConfig c;
  c.positions.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c.positions.push_back(lerp(a[i], b[i], t));
  return c;
}

bool motion_inside(const Environment& env, const JointConfig& a, const JointConfig& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!segment_inside(env, a[i], b[i])) return false;
  }
  return true;
}

bool config_inside(const Environment& env, const JointConfig& c) {
  return std::all_of(c.positions.begin(), c.positions.end(),
                     [&](Point p) { return env.contains(p); });
}

ShadowSet shadow_set(const Environment& env, const JointConfig& c) {
  std::vector<Point> distinct;
  for (Point p : c.positions) {
    if (std::find(distinct.begin(), distinct.end(), p) == distinct.end()) distinct.push_back(p);
  }

  // Shadows are the intersections of one hidden piece per pursuer; pieces of a
  // single pursuer are disjoint, so every pairwise result is its own component.
  struct Keyed {
    Point centroid;
    HiddenPiece piece;
    double area;
  };
  std::vector<Keyed> keyed;
  for (HiddenPiece& piece : hidden_pieces(env, distinct)) {
    const double a = boost::geometry::area(piece.polygon);
    if (a <= Tolerances::area) continue;
    Point c0;
    boost::geometry::centroid(piece.polygon, c0);
    keyed.push_back({c0, std::move(piece), a});
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    return a.centroid.x != b.centroid.x ? a.centroid.x < b.centroid.x
                                        : a.centroid.y < b.centroid.y;
  });

  ShadowSet out;
  for (Keyed& k : keyed) {
    Region r(std::move(k.piece.polygon));
    out.bounds.push_back(r.bounds());
    out.walls.push_back(std::move(k.piece.walls));
    out.areas.push_back(k.area);
    out.shadows.push_back(std::move(r));
  }
  return out;
}

ShadowLabel all_contaminated(const ShadowSet& s) {
  ShadowLabel l;
  l.contaminated = LabelBits(s.size());
  l.contaminated.set();
  return l;
}

// ---------------------------------------------------------------------------
// ShadowRelation

ShadowRelation::ShadowRelation(std::size_t from_count, std::size_t to_count)
    : preds_(to_count, LabelBits(from_count)), succs_(from_count, LabelBits(to_count)) {}

ShadowRelation ShadowRelation::identity(std::size_t count) {
  ShadowRelation r(count, count);
  for (std::size_t i = 0; i < count; ++i) r.relate(i, i);
  return r;
}

ShadowRelation ShadowRelation::overlap(const Environment& env, const ShadowSet& from,
                                       const ShadowSet& to) {
  ShadowRelation r(from.size(), to.size());
  for (std::size_t i = 0; i < from.size(); ++i) {
    for (std::size_t j = 0; j < to.size(); ++j) {
      if (!from.bounds[i].overlaps(to.bounds[j], Tolerances::geom)) continue;
      // A common piece of wall means the interiors meet next to it.
      if (share_wall(env, from.walls[i], to.walls[j], Tolerances::geom)) {
        r.relate(i, j);
        continue;
      }
      const auto meet = interiors_meet(from.shadows[i].polygons().front(),
                                       to.shadows[j].polygons().front());
      if (meet == false) continue;
      if (intersection_area(from.shadows[i], to.shadows[j]) > Tolerances::area) r.relate(i, j);
    }
  }
  return r;
}

void ShadowRelation::relate(std::size_t from, std::size_t to) {
  preds_[to].set(from);
  succs_[from].set(to);
}

bool ShadowRelation::has_unmatched() const {
  auto none = [](const LabelBits& b) { return b.none(); };
  return std::any_of(preds_.begin(), preds_.end(), none) ||
         std::any_of(succs_.begin(), succs_.end(), none);
}

ShadowEvents ShadowRelation::events() const {
  ShadowEvents e;
  for (const LabelBits& p : preds_) {
    const auto c = p.count();
    if (c == 0) ++e.appear;
    if (c > 1) ++e.merge;
  }
  for (const LabelBits& s : succs_) {
    const auto c = s.count();
    if (c == 0) ++e.disappear;
    if (c > 1) ++e.split;
  }
  return e;
}

LabelBits ShadowRelation::forward(const LabelBits& before) const {
  LabelBits out(preds_.size());
  for (std::size_t j = 0; j < preds_.size(); ++j) {
    if (preds_[j].intersects(before)) out.set(j);
  }
  return out;
}

LabelBits ShadowRelation::backward(const LabelBits& after) const {
  LabelBits out(succs_.size());
  for (std::size_t i = 0; i < succs_.size(); ++i) {
    if (succs_[i].intersects(after)) out.set(i);
  }
  return out;
}

ShadowRelation ShadowRelation::then(const ShadowRelation& next) const {
  ShadowRelation r(from_count(), next.to_count());
  for (std::size_t j = 0; j < next.to_count(); ++j) {
    LabelBits acc(from_count());
    const LabelBits& mid = next.preds_[j];
    for (auto k = mid.find_first(); k != LabelBits::npos; k = mid.find_next(k)) acc |= preds_[k];
    for (auto i = acc.find_first(); i != LabelBits::npos; i = acc.find_next(i)) r.relate(i, j);
  }
  return r;
}

ShadowRelation ShadowRelation::reversed() const {
  ShadowRelation r;
  r.preds_ = succs_;
  r.succs_ = preds_;
  return r;
}

// ---------------------------------------------------------------------------
// Motion sweep

double default_step(const Environment& env) { return env.diameter() / 500.0; }

namespace {

struct Sweep {
  const Environment& env;
  const JointConfig& a;
  const JointConfig& b;
  const MotionOptions& opts;
  MotionTrace& trace;

  ShadowRelation interval(double t0, const ShadowSet& s0, double t1, const ShadowSet& s1,
                          int depth) {
    ShadowRelation o = ShadowRelation::overlap(env, s0, s1);
    if (!o.has_unmatched() || depth >= opts.max_refine_depth) {
      const ShadowEvents e = o.events();
      trace.events.appear += e.appear;
      trace.events.disappear += e.disappear;
      trace.events.merge += e.merge;
      trace.events.split += e.split;
      return o;
    }
    const double tm = 0.5 * (t0 + t1);
    const ShadowSet sm = shadow_set(env, interpolate(a, b, tm));
    ++trace.shadow_sets_computed;
    ShadowRelation first = interval(t0, s0, tm, sm, depth + 1);
    return first.then(interval(tm, sm, t1, s1, depth + 1));
  }
};

}  // namespace

MotionTrace trace_motion(const Environment& env, const JointConfig& a, const ShadowSet& from,
                         const JointConfig& b, const ShadowSet& to, const MotionOptions& opts) {
  MotionTrace trace;
  const double step = opts.step > 0.0 ? opts.step : default_step(env);
  const auto steps =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(max_displacement(a, b) / step)));

  Sweep sweep{env, a, b, opts, trace};
  ShadowRelation rel = ShadowRelation::identity(from.size());
  ShadowSet buffers[2];
  const ShadowSet* prev = &from;
  double prev_t = 0.0;
  for (std::size_t s = 1; s <= steps; ++s) {
    const double t = static_cast<double>(s) / static_cast<double>(steps);
    const ShadowSet* cur = &to;
    if (s < steps) {
      ShadowSet& buf = buffers[s % 2];
      buf = shadow_set(env, interpolate(a, b, t));
      ++trace.shadow_sets_computed;
      cur = &buf;
    }
    rel = rel.then(sweep.interval(prev_t, *prev, t, *cur, 0));
    prev = cur;
    prev_t = t;
  }
  trace.relation = std::move(rel);
  return trace;
}

ShadowLabel transition(const Environment& env, const JointConfig& from, const JointConfig& to,
                       const ShadowLabel& label, const MotionOptions& opts) {
  if (!motion_inside(env, from, to)) throw InvalidEdge("a pursuer's segment leaves the environment");
  const ShadowSet s0 = shadow_set(env, from);
  if (label.contaminated.size() != s0.size()) {
    throw std::invalid_argument("label does not match the start configuration's shadows");
  }
  const ShadowSet s1 = shadow_set(env, to);
  const MotionTrace trace = trace_motion(env, from, s0, to, s1, opts);
  ShadowLabel out;
  out.contaminated = trace.relation.forward(label.contaminated);
  return out;
}

bool merge_status(std::span<const bool> parents) {
  return std::any_of(parents.begin(), parents.end(), [](bool c) { return c; });
}

double contaminated_area(const ShadowSet& shadows, const LabelBits& label) {
  double sum = 0.0;
  for (auto i = label.find_first(); i != LabelBits::npos; i = label.find_next(i)) {
    sum += shadows.areas[i];
  }
  return sum;
}

double contaminated_area(const Environment& env, const JointConfig& c, const ShadowLabel& label) {
  const ShadowSet s = shadow_set(env, c);
  if (label.contaminated.size() != s.size()) {
    throw std::invalid_argument("label does not match the configuration's shadows");
  }
  return contaminated_area(s, label.contaminated);
}

}  // namespace pursuit
