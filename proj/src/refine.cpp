#include "pursuit/refine.hpp"

#include <algorithm>
#include <cmath>

#include "pursuit/errors.hpp"
#include "pursuit/verify.hpp"

namespace pursuit {

bool is_solution(const Environment& env, const std::vector<JointConfig>& path,
                 const MotionOptions& opts) {
  if (path.empty()) return false;
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (path[i].size() != path[0].size() || !motion_inside(env, path[i - 1], path[i])) return false;
  }
  ShadowSet prev = shadow_set(env, path[0]);
  LabelBits label = all_contaminated(prev).contaminated;
  for (std::size_t i = 1; i < path.size() && label.any(); ++i) {
    ShadowSet next = shadow_set(env, path[i]);
    label = trace_motion(env, path[i - 1], prev, path[i], next, opts).relation.forward(label);
    prev = std::move(next);
  }
  return label.none();
}

namespace {

// A path with its shadow sets, per-segment relations, the label at every
// waypoint and, per waypoint, the relation from there to the end.
class Annotated {
 public:
  Annotated(const Environment& env, std::vector<JointConfig> path, const MotionOptions& opts)
      : env_(env), opts_(opts), path_(std::move(path)) {
    for (const JointConfig& c : path_) shadows_.push_back(shadow_set(env_, c));
    for (std::size_t i = 0; i + 1 < path_.size(); ++i) relations_.push_back(trace(i, i + 1));
    index();
  }

  const std::vector<JointConfig>& path() const { return path_; }
  double length() const { return arc_.back(); }

  /// Drops everything after the first waypoint whose label is clear.
  void truncate() {
    const auto first = std::find_if(labels_.begin(), labels_.end(), [](const LabelBits& l) { return l.none(); });
    const auto keep = static_cast<std::size_t>(first - labels_.begin()) + 1;
    if (keep >= path_.size()) return;
    path_.resize(keep);
    shadows_.resize(keep);
    relations_.resize(keep - 1);
    index();
  }

  /// Ends the path part way along its last leg when the team is already clear
  /// there; bisects for the earliest such point down to `tol` in arc length.
  bool trim_last_leg(double tol) {
    if (path_.size() < 2) return false;
    const std::size_t i = path_.size() - 2;
    const double len = arc_[i + 1] - arc_[i];
    if (labels_[i].none() || len <= tol) return false;
    double lo = 0.0, hi = 1.0;
    JointConfig best;
    ShadowSet best_shadows;
    ShadowRelation best_rel;
    while ((hi - lo) * len > tol) {
      const double mid = 0.5 * (lo + hi);
      JointConfig m = interpolate(path_[i], path_[i + 1], mid);
      ShadowSet sm = shadow_set(env_, m);
      ShadowRelation r = trace_motion(env_, path_[i], shadows_[i], m, sm, opts_).relation;
      if (r.forward(labels_[i]).none()) {
        hi = mid;
        best = std::move(m);
        best_shadows = std::move(sm);
        best_rel = std::move(r);
      } else {
        lo = mid;
      }
    }
    if (hi >= 1.0) return false;
    path_.back() = std::move(best);
    shadows_.back() = std::move(best_shadows);
    relations_.back() = std::move(best_rel);
    index();
    return true;
  }

  /// Tries the cut from arc position za to zb; keeps it if the path stays a solution.
  /// The labels are replayed with `screen` first; only survivors are traced at full resolution.
  bool try_cut(double za, double zb, double min_gain, const MotionOptions* screen, std::size_t& traced) {
    const auto [i, ta] = locate(za);
    const auto [j, tb] = locate(zb);
    const JointConfig a = ta > 0.0 ? interpolate(path_[i], path_[i + 1], ta) : path_[i];
    const JointConfig b = tb < 1.0 ? interpolate(path_[j], path_[j + 1], tb) : path_[j + 1];
    const double gain = (zb - za) - joint_distance(a, b);
    if (gain <= min_gain || !motion_inside(env_, a, b)) return false;
    ++traced;

    const ShadowSet sa = ta > 0.0 ? shadow_set(env_, a) : shadows_[i];
    const ShadowSet sb = tb < 1.0 ? shadow_set(env_, b) : shadows_[j + 1];
    ShadowRelation head, cut, tail;
    auto clears = [&](const MotionOptions& o) {
      LabelBits label = labels_[i];
      if (ta > 0.0) {
        head = trace_motion(env_, path_[i], shadows_[i], a, sa, o).relation;
        label = head.forward(label);
      }
      cut = trace_motion(env_, a, sa, b, sb, o).relation;
      label = cut.forward(label);
      if (tb < 1.0) {
        tail = trace_motion(env_, b, sb, path_[j + 1], shadows_[j + 1], o).relation;
        label = tail.forward(label);
      }
      return suffix_[j + 1].forward(label).none();
    };
    if (screen && !clears(*screen)) return false;
    if (!clears(opts_)) return false;

    // Splice: path[0..i], a?, b?, path[j+1..].
    std::vector<JointConfig> path(path_.begin(), path_.begin() + static_cast<std::ptrdiff_t>(i) + 1);
    std::vector<ShadowSet> shadows(shadows_.begin(), shadows_.begin() + static_cast<std::ptrdiff_t>(i) + 1);
    std::vector<ShadowRelation> rels(relations_.begin(), relations_.begin() + static_cast<std::ptrdiff_t>(i));
    if (ta > 0.0) {
      path.push_back(a);
      shadows.push_back(sa);
      rels.push_back(std::move(head));
    }
    rels.push_back(std::move(cut));
    if (tb < 1.0) {
      path.push_back(b);
      shadows.push_back(sb);
      rels.push_back(std::move(tail));
    }
    path.insert(path.end(), path_.begin() + static_cast<std::ptrdiff_t>(j) + 1, path_.end());
    shadows.insert(shadows.end(), shadows_.begin() + static_cast<std::ptrdiff_t>(j) + 1, shadows_.end());
    rels.insert(rels.end(), relations_.begin() + static_cast<std::ptrdiff_t>(j) + 1, relations_.end());
    path_ = std::move(path);
    shadows_ = std::move(shadows);
    relations_ = std::move(rels);
    index();
    return true;
  }

 private:
  ShadowRelation trace(std::size_t i, std::size_t j) const {
    return trace_motion(env_, path_[i], shadows_[i], path_[j], shadows_[j], opts_).relation;
  }

  void index() {
    arc_.assign(1, 0.0);
    for (std::size_t i = 0; i + 1 < path_.size(); ++i) {
      arc_.push_back(arc_.back() + joint_distance(path_[i], path_[i + 1]));
    }
    labels_.assign(1, all_contaminated(shadows_[0]).contaminated);
    for (const ShadowRelation& r : relations_) labels_.push_back(r.forward(labels_.back()));
    suffix_.assign(path_.size(), ShadowRelation::identity(shadows_.back().size()));
    for (std::size_t i = path_.size() - 1; i-- > 0;) suffix_[i] = relations_[i].then(suffix_[i + 1]);
  }

  /// Segment index and parameter of arc position z; z on a waypoint gives t = 0
  /// of the following segment, except at the very end.
  std::pair<std::size_t, double> locate(double z) const {
    const std::size_t segs = path_.size() - 1;
    auto it = std::upper_bound(arc_.begin(), arc_.end(), z);
    std::size_t i = it == arc_.begin() ? 0 : static_cast<std::size_t>(it - arc_.begin()) - 1;
    i = std::min(i, segs - 1);
    const double len = arc_[i + 1] - arc_[i];
    const double t = len > 0.0 ? std::clamp((z - arc_[i]) / len, 0.0, 1.0) : 0.0;
    return {i, t};
  }

  const Environment& env_;
  MotionOptions opts_;
  std::vector<JointConfig> path_;
  std::vector<ShadowSet> shadows_;
  std::vector<ShadowRelation> relations_;
  std::vector<double> arc_;
  std::vector<LabelBits> labels_;
  std::vector<ShadowRelation> suffix_;
};

bool certified(const Environment& env, const Solution& s, const std::vector<int>& resolutions) {
  for (int r : resolutions) {
    if (!grid_verify(env, s, r).cleared) return false;
  }
  return true;
}

}  // namespace

RefineReport refine(const Environment& env, const Solution& s, const RefineOptions& opts) {
  if (!is_solution(env, s.waypoints, opts.motion)) throw NotASolution("input path does not clear the environment");
  RefineReport report;
  report.length_before = length(s);

  Annotated path(env, s.waypoints, opts.motion);
  path.truncate();
  const double total = path.length();
  const double min_gain = 1e-6 * total;
  path.trim_last_leg(min_gain);
  // Accepted versions, newest last, in case the grid disagrees with the labels.
  std::vector<std::vector<JointConfig>> history{s.waypoints, path.path()};

  MotionOptions screen = opts.motion;
  screen.step = (opts.motion.step > 0.0 ? opts.motion.step : default_step(env)) * opts.screen_factor;
  const MotionOptions* screening = opts.screen_factor > 1.0 ? &screen : nullptr;
  if (path.path().size() > 1 && total > 0.0) {
    for (double c = total; c >= total * opts.min_fraction; c *= opts.decay) {
      for (double za = 0.0; za + c <= path.length() + 1e-12; za += opts.advance * c) {
        ++report.candidates;
        if (path.try_cut(za, std::min(za + c, path.length()), min_gain, screening, report.replayed)) {
          ++report.accepted;
          history.push_back(path.path());
        }
      }
    }
    if (path.trim_last_leg(min_gain)) history.push_back(path.path());
  }

  // The newest version that replays cleanly both ways wins; the input always does.
  for (auto it = history.rbegin(); it != history.rend(); ++it) {
    Solution out{s.num_pursuers, *it};
    if (it + 1 == history.rend() ||
        (is_solution(env, out.waypoints, opts.motion) && certified(env, out, opts.certify_resolutions))) {
      report.solution = std::move(out);
      break;
    }
  }
  report.length_after = length(report.solution);
  return report;
}

}  // namespace pursuit
