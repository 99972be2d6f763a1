#include "pursuit/sgpeg.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <stdexcept>

#include "pursuit/errors.hpp"

namespace pursuit {

Sgpeg::Sgpeg(const Environment& env, std::size_t n, SgpegOptions opts)
    : env_(&env), n_(n), opts_(opts) {
  if (n == 0) throw std::invalid_argument("a graph needs at least one pursuer");
}

double Sgpeg::connect_radius() const {
  if (opts_.connect_radius > 0.0) return opts_.connect_radius;
  return 0.35 * env_->diameter() * std::sqrt(static_cast<double>(n_));
}

std::size_t Sgpeg::add_vertex(const JointConfig& c) {
  if (c.size() != n_) throw InvalidConfig("configuration size differs from the team size");
  if (!config_inside(*env_, c)) throw InvalidConfig("a pursuer is outside the environment");
  Vertex v;
  v.config = c;
  v.shadows = shadow_set(*env_, c);
  vertices_.push_back(std::move(v));
  return vertices_.size() - 1;
}

std::size_t Sgpeg::add_sample(const JointConfig& c) {
  const std::size_t v = add_vertex(c);
  connect(v);
  propagate();
  return v;
}

std::vector<double> Sgpeg::graph_distances(std::size_t src, double limit) const {
  std::vector<double> dist(vertices_.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[src] = 0.0;
  heap.push({0.0, src});
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (std::size_t e : vertices_[u].out) {
      const double nd = d + edges_[e].length;
      const std::size_t w = edges_[e].to;
      if (nd < dist[w] && nd <= limit) {
        dist[w] = nd;
        heap.push({nd, w});
      }
    }
  }
  return dist;
}

void Sgpeg::connect(std::size_t v) {
  const JointConfig& c = vertices_[v].config;
  const double radius = connect_radius();
  std::vector<std::pair<double, std::size_t>> near;
  for (std::size_t u = 0; u < vertices_.size(); ++u) {
    if (u == v) continue;
    const double d = joint_distance(vertices_[u].config, c);
    if (d <= radius) near.push_back({d, u});
  }
  std::sort(near.begin(), near.end());

  const double limit = opts_.beta * radius;
  std::vector<double> dist = graph_distances(v, limit);
  for (const auto& [d, u] : near) {
    if (dist[u] <= opts_.beta * d) continue;
    const Vertex& from = vertices_[u];
    if (!motion_inside(*env_, from.config, c)) continue;
    ++trace_calls_;
    MotionTrace trace = trace_motion(*env_, from.config, from.shadows, c, vertices_[v].shadows,
                                     opts_.motion);
    add_edge_pair(u, v, std::move(trace));
    dist = graph_distances(v, limit);
  }
}

void Sgpeg::add_edge_pair(std::size_t u, std::size_t v, MotionTrace trace) {
  const double len = joint_distance(vertices_[u].config, vertices_[v].config);
  Edge back;
  back.from = v;
  back.to = u;
  back.length = len;
  back.relation = trace.relation.reversed();
  back.events = {trace.events.disappear, trace.events.appear, trace.events.split, trace.events.merge};
  Edge fwd;
  fwd.from = u;
  fwd.to = v;
  fwd.length = len;
  fwd.relation = std::move(trace.relation);
  fwd.events = trace.events;

  edges_.push_back(std::move(fwd));
  vertices_[u].out.push_back(edges_.size() - 1);
  edges_.push_back(std::move(back));
  vertices_[v].out.push_back(edges_.size() - 1);
  enqueue_labels(u);
  enqueue_labels(v);
}

void Sgpeg::enqueue_labels(std::size_t v) {
  for (std::size_t id : vertices_[v].labels) worklist_.push_back(id);
}

std::size_t Sgpeg::insert_label(std::size_t v, ShadowLabel label) {
  Vertex& vx = vertices_.at(v);
  if (label.contaminated.size() != vx.shadows.size()) {
    throw std::invalid_argument("label size differs from the vertex's shadow count");
  }
  for (std::size_t id : vx.labels) {
    if (arena_[id].label.contaminated.is_subset_of(label.contaminated)) return npos;
  }
  std::erase_if(vx.labels, [&](std::size_t id) {
    if (!label.contaminated.is_subset_of(arena_[id].label.contaminated)) return false;
    arena_[id].alive = false;
    return true;
  });

  LabelRecord rec;
  rec.vertex = v;
  rec.contaminated_area = contaminated_area(vx.shadows, label.contaminated);
  rec.label = std::move(label);
  arena_.push_back(std::move(rec));
  const std::size_t id = arena_.size() - 1;
  vx.labels.push_back(id);
  worklist_.push_back(id);
  if (best_ == npos || !arena_[best_].alive ||
      arena_[id].contaminated_area < arena_[best_].contaminated_area) {
    best_ = id;
  }
  return id;
}

void Sgpeg::propagate() {
  while (!worklist_.empty()) {
    const std::size_t id = worklist_.front();
    worklist_.pop_front();
    if (!arena_[id].alive) continue;
    const std::size_t u = arena_[id].vertex;
    for (std::size_t e : vertices_[u].out) {
      const Edge& edge = edges_[e];
      ShadowLabel next;
      next.contaminated = edge.relation.forward(arena_[id].label.contaminated);
      next.provenance = Provenance{u, id, e};
      insert_label(edge.to, std::move(next));
    }
  }
}

std::size_t Sgpeg::set_root(const JointConfig& c) {
  std::size_t v = npos;
  for (std::size_t u = 0; u < vertices_.size() && v == npos; ++u) {
    if (vertices_[u].config == c) v = u;
  }
  if (v == npos) {
    v = add_vertex(c);
    connect(v);
  }
  arena_.clear();
  worklist_.clear();
  for (Vertex& vx : vertices_) vx.labels.clear();
  best_ = npos;
  root_ = v;
  insert_label(v, all_contaminated(vertices_[v].shadows));
  propagate();
  return v;
}

void Sgpeg::add_pursuer(Expand mode) {
  ++n_;
  if (mode == Expand::clone) {
    for (Vertex& v : vertices_) v.config.positions.push_back(v.config.positions.front());
    return;
  }
  vertices_.clear();
  edges_.clear();
  removed_edges_ = 0;
  arena_.clear();
  worklist_.clear();
  root_.reset();
  best_ = npos;
}

double Sgpeg::best_contamination() const {
  if (vertices_.empty()) throw EmptyGraph("the graph has no vertices");
  if (best_ == npos) return env_->area();
  return arena_[best_].contaminated_area;
}

std::optional<Solution> Sgpeg::extract_solution() const {
  if (best_ == npos || !arena_[best_].label.fully_cleared()) return std::nullopt;
  Solution s;
  s.num_pursuers = n_;
  for (std::size_t id = best_;;) {
    const LabelRecord& rec = arena_[id];
    s.waypoints.push_back(vertices_[rec.vertex].config);
    if (!rec.label.provenance) break;
    id = rec.label.provenance->label;
  }
  std::reverse(s.waypoints.begin(), s.waypoints.end());
  return s;
}

std::vector<std::size_t> Sgpeg::solution_edges() const {
  std::vector<std::size_t> out;
  if (best_ == npos || !arena_[best_].label.fully_cleared()) return out;
  for (std::size_t id = best_; arena_[id].label.provenance;) {
    out.push_back(arena_[id].label.provenance->edge);
    id = arena_[id].label.provenance->label;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

void Sgpeg::remove_edge_pair(std::size_t e) {
  for (std::size_t d : {e, e ^ 1}) {
    auto& out = vertices_[edges_.at(d).from].out;
    const auto it = std::find(out.begin(), out.end(), d);
    if (it == out.end()) return;
    out.erase(it);
    ++removed_edges_;
  }
  if (root_) set_root(vertices_[*root_].config);
}

Json Sgpeg::to_json() const {
  Json verts = Json::array();
  for (const Vertex& v : vertices_) {
    Json labels = Json::array();
    for (std::size_t id : v.labels) {
      const LabelBits& b = arena_[id].label.contaminated;
      std::string bits(b.size(), '0');
      for (std::size_t i = 0; i < b.size(); ++i) bits[i] = b.test(i) ? '1' : '0';
      labels.push_back(bits);
    }
    verts.push_back({{"config", config_to_json(v.config)},
                     {"shadows", v.shadows.size()},
                     {"labels", labels}});
  }
  Json edges = Json::array();
  for (const Vertex& v : vertices_) {
    for (std::size_t e : v.out) edges.push_back({edges_[e].from, edges_[e].to});
  }
  Json out{{"num_pursuers", n_}, {"vertices", verts}, {"edges", edges}};
  out["root"] = root_ ? Json(*root_) : Json(nullptr);
  return out;
}

}  // namespace pursuit
