#include "pursuit/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "pursuit/errors.hpp"

namespace pursuit {

std::vector<Point> Web::points() const {
  std::vector<Point> all = initial;
  all.insert(all.end(), intersection.begin(), intersection.end());
  return all;
}

Web build_web(const Environment& env, Rng& rng) {
  Web web;
  const double target = Tolerances::cover_fraction * env.area();
  std::vector<Region> views;
  double smallest = env.area();
  Region uncovered = env.region();
  double residual = env.area();
  while (residual > target) {
    const std::size_t cap =
        10 * static_cast<std::size_t>(std::ceil(env.area() / std::max(smallest, Tolerances::area)));
    if (web.initial.size() >= cap) {
      throw CoverageStall("initial points exceed the safety cap of " + std::to_string(cap));
    }
    const Point p = random_point(uncovered, rng);
    web.initial.push_back(p);
    views.push_back(visibility_polygon(env, p));
    smallest = std::min(smallest, views.back().area());
    uncovered = hidden_region(env, web.initial);
    residual = uncovered.area();
  }
  web.residual = residual;

  for (std::size_t i = 0; i < views.size(); ++i) {
    for (std::size_t j = i + 1; j < views.size(); ++j) {
      if (!views[i].bounds().overlaps(views[j].bounds())) continue;
      const Region both = intersect(views[i], views[j]);
      if (both.area() <= Tolerances::area) continue;
      web.intersection.push_back(random_point(both, rng));
      web.pairs.push_back({i, j});
    }
  }
  return web;
}

bool web_connected(const Environment& env, const Web& web) {
  const std::vector<Point> pts = web.points();
  if (pts.empty()) return true;
  std::vector<bool> seen(pts.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v = 0; v < pts.size(); ++v) {
      if (seen[v] || !segment_inside(env, pts[u], pts[v])) continue;
      seen[v] = true;
      ++reached;
      stack.push_back(v);
    }
  }
  return reached == pts.size();
}

Json web_to_json(const Web& web) {
  Json p = Json::array();
  for (Point q : web.initial) p.push_back(point_to_json(q));
  Json q = Json::array();
  for (Point r : web.intersection) q.push_back(point_to_json(r));
  Json pairs = Json::array();
  for (const auto& pr : web.pairs) pairs.push_back({pr[0], pr[1]});
  return {{"initial", p}, {"intersection", q}, {"pairs", pairs}};
}

void WebSampler::add_web() {
  webs_.push_back(build_web(*env_, *rng_));
  std::vector<Point> order = webs_.back().points();
  std::shuffle(order.begin(), order.end(), *rng_);
  order_.push_back(std::move(order));
  drawn_.emplace_back();
}

void WebSampler::rebuild(std::size_t n) {
  webs_.clear();
  order_.clear();
  drawn_.clear();
  for (std::size_t i = 0; i < n; ++i) add_web();
  ++generations_;
}

JointConfig WebSampler::next_sample(std::size_t n) {
  if (webs_.empty()) {
    rebuild(n);
  } else {
    while (webs_.size() < n) add_web();
    const bool exhausted = std::any_of(order_.begin(), order_.begin() + static_cast<std::ptrdiff_t>(n),
                                       [](const std::vector<Point>& o) { return o.empty(); });
    if (exhausted) rebuild(std::max(n, webs_.size()));
  }
  JointConfig c;
  for (std::size_t i = 0; i < n; ++i) {
    c.positions.push_back(order_[i].back());
    order_[i].pop_back();
    drawn_[i].push_back(c.positions.back());
  }
  return c;
}

JointConfig UniformSampler::next_sample(std::size_t n) {
  JointConfig c;
  for (std::size_t i = 0; i < n; ++i) c.positions.push_back(region_.sample(*rng_));
  return c;
}

}  // namespace pursuit
