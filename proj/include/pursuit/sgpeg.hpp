#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <vector>

#include "pursuit/io.hpp"
#include "pursuit/solution.hpp"

namespace pursuit {

struct SgpegOptions {
  /// Joint-space connection radius; non-positive selects 0.35 * diam(E) * sqrt(n).
  double connect_radius = 0.0;
  /// New edges are skipped when the graph already joins the endpoints by a
  /// path at most beta times their distance.
  double beta = 2.0;
  MotionOptions motion;
};

/// Sample-generated pursuit-evasion graph over E^n. Each vertex keeps the
/// antichain of reachable labels that are not dominated (a label dominates
/// another when its contaminated set is a subset of the other's).
class Sgpeg {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  struct Vertex {
    JointConfig config;
    ShadowSet shadows;
    std::vector<std::size_t> labels;  // arena ids, the current antichain
    std::vector<std::size_t> out;     // edge ids
  };
  /// Edges are stored in pairs: the reverse of edge e is e ^ 1.
  struct Edge {
    std::size_t from = 0;
    std::size_t to = 0;
    double length = 0.0;
    ShadowRelation relation;
    ShadowEvents events;
  };
  /// A reachable label; `label.provenance` names its parent for traceback.
  struct LabelRecord {
    std::size_t vertex = 0;
    ShadowLabel label;
    double contaminated_area = 0.0;
    bool alive = true;
  };

  Sgpeg(const Environment& env, std::size_t n, SgpegOptions opts = {});

  std::size_t pursuers() const { return n_; }
  double connect_radius() const;
  const SgpegOptions& options() const { return opts_; }

  /// Inserts a vertex for `c`, connects it and propagates labels to a fixpoint.
  /// Throws InvalidConfig if some position is outside E or the size is not n.
  std::size_t add_sample(const JointConfig& c);
  /// Makes the vertex for `c` (added if missing) the root with the
  /// all-contaminated label; every other label in the graph is discarded.
  std::size_t set_root(const JointConfig& c);
  std::optional<std::size_t> root() const { return root_; }

  /// Inserts `label` at `v` unless an existing label dominates it; removes the
  /// labels it dominates. Returns the arena id, or npos when rejected.
  std::size_t insert_label(std::size_t v, ShadowLabel label);
  /// Runs the worklist to a fixpoint.
  void propagate();

  enum class Expand { clone, clear };
  /// clone: every configuration gains a copy of its first pursuer, labels and
  /// edges are kept. clear: the graph is emptied and must be re-rooted.
  void add_pursuer(Expand mode);

  /// Smallest contaminated area over all labels; area(E) before a root is set.
  /// Throws EmptyGraph without vertices.
  double best_contamination() const;
  /// Waypoints from the root to a fully cleared label, if one exists.
  std::optional<Solution> extract_solution() const;
  /// Edge ids along the path extract_solution returns.
  std::vector<std::size_t> solution_edges() const;
  /// Deletes edge `e` and its reverse, then recomputes every label from the root.
  void remove_edge_pair(std::size_t e);

  std::size_t vertex_count() const { return vertices_.size(); }
  /// Directed edges; they come in pairs.
  std::size_t edge_count() const { return edges_.size() - removed_edges_; }
  const Vertex& vertex(std::size_t id) const { return vertices_[id]; }
  const Edge& edge(std::size_t id) const { return edges_[id]; }
  const LabelRecord& label(std::size_t id) const { return arena_[id]; }
  std::size_t trace_calls() const { return trace_calls_; }

  Json to_json() const;

 private:
  std::size_t add_vertex(const JointConfig& c);
  void connect(std::size_t v);
  void add_edge_pair(std::size_t u, std::size_t v, MotionTrace trace);
  /// Shortest-path lengths from `src`, exploring only up to `limit`.
  std::vector<double> graph_distances(std::size_t src, double limit) const;
  void enqueue_labels(std::size_t v);

  const Environment* env_;
  std::size_t n_;
  SgpegOptions opts_;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<LabelRecord> arena_;
  std::deque<std::size_t> worklist_;
  std::optional<std::size_t> root_;
  std::size_t best_ = npos;
  std::size_t trace_calls_ = 0;
  std::size_t removed_edges_ = 0;
};

}  // namespace pursuit
