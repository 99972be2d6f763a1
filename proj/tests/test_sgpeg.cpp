#include <gtest/gtest.h>

#include <set>

#include "oracle.hpp"
#include "pursuit/errors.hpp"
#include "pursuit/refine.hpp"
#include "pursuit/sgpeg.hpp"
#include "pursuit/verify.hpp"

using namespace pursuit;

namespace {

JointConfig one(Point p) { return JointConfig{{p}}; }

// Wide enough to join any two points of the small maps.
SgpegOptions wide() {
  SgpegOptions o;
  o.connect_radius = 10.0;
  return o;
}

JointConfig random_config(const RegionSampler& s, Rng& rng, std::size_t n) {
  JointConfig c;
  for (std::size_t i = 0; i < n; ++i) c.positions.push_back(s.sample(rng));
  return c;
}

void expect_antichains(const Sgpeg& g) {
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const auto& ids = g.vertex(v).labels;
    for (std::size_t a : ids) {
      EXPECT_TRUE(g.label(a).alive);
      EXPECT_EQ(g.label(a).label.contaminated.size(), g.vertex(v).shadows.size());
      for (std::size_t b : ids) {
        if (a == b) continue;
        EXPECT_FALSE(g.label(a).label.contaminated.is_subset_of(g.label(b).label.contaminated))
            << "vertex " << v;
      }
    }
  }
}

void expect_paired_edges(const Sgpeg& g) {
  std::set<std::pair<std::size_t, std::size_t>> arcs;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    for (std::size_t e : g.vertex(v).out) {
      EXPECT_EQ(g.edge(e).from, v);
      arcs.insert({g.edge(e).from, g.edge(e).to});
    }
  }
  for (const auto& [u, v] : arcs) EXPECT_TRUE(arcs.count({v, u})) << u << "->" << v;
  EXPECT_EQ(arcs.size(), g.edge_count());
}

// A vertex with at least two shadows on the H-like map.
std::pair<Environment, JointConfig> two_shadow_config() {
  Environment env = oracle::corpus("h_like");
  Rng rng(3);
  const RegionSampler sampler(env.region());
  for (;;) {
    const JointConfig c = random_config(sampler, rng, 1);
    if (shadow_set(env, c).size() >= 2) return {std::move(env), c};
  }
}

}  // namespace

TEST(SetRoot, ConvexRootIsSolved) {
  const Environment sq = oracle::unit_square();
  Sgpeg g(sq, 1);
  const auto r = g.set_root(one({0.5, 0.5}));
  EXPECT_EQ(g.root(), r);
  ASSERT_EQ(g.vertex(r).labels.size(), 1u);
  EXPECT_TRUE(g.label(g.vertex(r).labels[0]).label.fully_cleared());
  const auto s = g.extract_solution();
  ASSERT_TRUE(s);
  ASSERT_EQ(s->waypoints.size(), 1u);
  EXPECT_EQ(s->waypoints[0], one({0.5, 0.5}));
}

TEST(SetRoot, LShapeRootIsContaminated) {
  const Environment l = oracle::l_shape();
  Sgpeg g(l, 1);
  const auto r = g.set_root(one({1.8, 0.5}));
  ASSERT_EQ(g.vertex(r).labels.size(), 1u);
  const LabelBits& b = g.label(g.vertex(r).labels[0]).label.contaminated;
  ASSERT_EQ(b.size(), 1u);
  EXPECT_TRUE(b[0]);
  EXPECT_FALSE(g.extract_solution());

  const oracle::Raster raster(l, 200);
  const auto hidden = oracle::hidden_cells(l, raster, {{1.8, 0.5}});
  const double grid_area = std::count(hidden.begin(), hidden.end(), 1) * raster.cell_area();
  EXPECT_NEAR(g.best_contamination(), grid_area, 0.02 * grid_area);
}

TEST(SetRoot, SecondCallReplacesRootAndResetsLabels) {
  const Environment l = oracle::l_shape();
  Sgpeg g(l, 1, wide());
  g.set_root(one({1.8, 0.5}));
  g.add_sample(one({0.7, 0.7}));
  ASSERT_NEAR(g.best_contamination(), 0.0, 1e-12);
  const auto r = g.set_root(one({1.5, 0.3}));
  EXPECT_EQ(g.root(), r);
  EXPECT_EQ(g.vertex_count(), 3u);
  // Only labels reachable from the new root remain; it still reaches (0.7, 0.7).
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    for (std::size_t id : g.vertex(v).labels) {
      std::size_t cur = id;
      while (g.label(cur).label.provenance) cur = g.label(cur).label.provenance->label;
      EXPECT_EQ(g.label(cur).vertex, r);
    }
  }
  EXPECT_NEAR(g.best_contamination(), 0.0, 1e-12);
}

TEST(AddSample, FirstSampleIsIsolated) {
  const Environment l = oracle::l_shape();
  Sgpeg g(l, 1);
  g.add_sample(one({0.5, 0.5}));
  EXPECT_EQ(g.vertex_count(), 1u);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(AddSample, ConvexSecondSampleConnects) {
  const Environment sq = oracle::unit_square();
  Sgpeg g(sq, 1);
  g.set_root(one({0.2, 0.2}));
  g.add_sample(one({0.5, 0.5}));
  EXPECT_EQ(g.edge_count(), 2u);
  for (std::size_t v = 0; v < 2; ++v) {
    ASSERT_EQ(g.vertex(v).labels.size(), 1u);
    EXPECT_TRUE(g.label(g.vertex(v).labels[0]).label.fully_cleared());
  }
  EXPECT_EQ(g.best_contamination(), 0.0);
}

TEST(AddSample, LShapeTwoVertexSolution) {
  const Environment l = oracle::l_shape();
  Sgpeg g(l, 1, wide());
  g.set_root(one({1.8, 0.5}));
  const auto v = g.add_sample(one({0.7, 0.7}));
  bool zero = false;
  for (std::size_t id : g.vertex(v).labels) zero = zero || g.label(id).contaminated_area == 0.0;
  EXPECT_TRUE(zero);
  const auto s = g.extract_solution();
  ASSERT_TRUE(s);
  ASSERT_EQ(s->waypoints.size(), 2u);
  EXPECT_EQ(s->waypoints[0], one({1.8, 0.5}));
  EXPECT_EQ(s->waypoints[1], one({0.7, 0.7}));
  EXPECT_TRUE(is_solution(l, s->waypoints));
  EXPECT_TRUE(grid_verify(l, *s, 128).cleared);
}

TEST(AddSample, OutsideThrows) {
  const Environment l = oracle::l_shape();
  Sgpeg g(l, 1);
  EXPECT_THROW(g.add_sample(one({1.5, 1.5})), InvalidConfig);
  Sgpeg g2(l, 2);
  EXPECT_THROW(g2.add_sample(one({0.5, 0.5})), InvalidConfig);
}

TEST(AddSample, RedundantEdgesSkipped) {
  const Environment sq = oracle::unit_square();
  SgpegOptions opts;
  opts.connect_radius = 10.0;
  Sgpeg g(sq, 1, opts);
  g.add_sample(one({0.1, 0.5}));
  g.add_sample(one({0.5, 0.5}));
  // (0.9, 0.5) reaches (0.1, 0.5) through (0.5, 0.5) at exactly the distance.
  g.add_sample(one({0.9, 0.5}));
  EXPECT_EQ(g.edge_count(), 4u);
}

TEST(Propagate, NoEdgesNoChange) {
  const Environment l = oracle::l_shape();
  Sgpeg g(l, 1);
  g.set_root(one({1.8, 0.5}));
  const std::size_t before = g.vertex(0).labels.size();
  g.propagate();
  EXPECT_EQ(g.vertex(0).labels.size(), before);
}

TEST(Propagate, ConvexTriangleFixpoint) {
  const Environment sq = oracle::unit_square();
  SgpegOptions opts;
  opts.beta = 1.0;
  opts.connect_radius = 10.0;
  Sgpeg g(sq, 1, opts);
  g.set_root(one({0.1, 0.1}));
  g.add_sample(one({0.9, 0.1}));
  g.add_sample(one({0.5, 0.9}));
  EXPECT_EQ(g.edge_count(), 6u);
  for (std::size_t v = 0; v < 3; ++v) {
    ASSERT_EQ(g.vertex(v).labels.size(), 1u);
    EXPECT_TRUE(g.label(g.vertex(v).labels[0]).label.fully_cleared());
  }
  const Json before = g.to_json();
  g.propagate();
  EXPECT_EQ(g.to_json(), before);
}

TEST(InsertLabel, DominanceCases) {
  auto [env, c] = two_shadow_config();
  Sgpeg g(env, 1);
  const auto v = g.add_sample(c);
  const std::size_t k = g.vertex(v).shadows.size();
  auto label = [&](bool b0, bool b1) {
    ShadowLabel l;
    l.contaminated = LabelBits(k);
    l.contaminated[0] = b0;
    l.contaminated[1] = b1;
    return l;
  };
  // [clear, contaminated] then [clear, clear]: strict dominance replaces it.
  ASSERT_NE(g.insert_label(v, label(false, true)), Sgpeg::npos);
  ASSERT_NE(g.insert_label(v, label(false, false)), Sgpeg::npos);
  ASSERT_EQ(g.vertex(v).labels.size(), 1u);
  EXPECT_TRUE(g.label(g.vertex(v).labels[0]).label.contaminated.none());

  Sgpeg h(env, 1);
  const auto w = h.add_sample(c);
  ASSERT_NE(h.insert_label(w, label(false, true)), Sgpeg::npos);
  EXPECT_NE(h.insert_label(w, label(true, false)), Sgpeg::npos);
  EXPECT_EQ(h.vertex(w).labels.size(), 2u);
  EXPECT_EQ(h.insert_label(w, label(true, false)), Sgpeg::npos);
  EXPECT_EQ(h.vertex(w).labels.size(), 2u);
  EXPECT_EQ(h.insert_label(w, label(true, true)), Sgpeg::npos);
  expect_antichains(h);
}

TEST(AddPursuer, CloneAppendsFirstPosition) {
  const Environment env = oracle::corpus("h_like");
  Sgpeg g(env, 2);
  const JointConfig c{{{1.0, 1.0}, {14.0, 9.0}}};
  g.set_root(c);
  g.add_pursuer(Sgpeg::Expand::clone);
  EXPECT_EQ(g.pursuers(), 3u);
  EXPECT_EQ(g.vertex(0).config, (JointConfig{{{1.0, 1.0}, {14.0, 9.0}, {1.0, 1.0}}}));
  EXPECT_EQ(shadow_set(env, g.vertex(0).config).size(), g.vertex(0).shadows.size());
}

TEST(AddPursuer, ClonePreservesLabelsOnRandomGraph) {
  const Environment env = oracle::corpus("h_like");
  Rng rng(12);
  const RegionSampler sampler(env.region());
  Sgpeg g(env, 1);
  g.set_root(random_config(sampler, rng, 1));
  for (int k = 0; k < 15; ++k) g.add_sample(random_config(sampler, rng, 1));
  const Json before = g.to_json();
  const double best = g.best_contamination();
  const std::size_t edges = g.edge_count();
  g.add_pursuer(Sgpeg::Expand::clone);
  EXPECT_EQ(g.edge_count(), edges);
  EXPECT_EQ(g.best_contamination(), best);
  Json after = g.to_json();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    EXPECT_EQ(after["vertices"][v]["labels"], before["vertices"][v]["labels"]);
  }
  EXPECT_EQ(after["edges"], before["edges"]);
  // Growing on after the clone keeps the invariants.
  for (int k = 0; k < 5; ++k) g.add_sample(random_config(sampler, rng, 2));
  expect_antichains(g);
  expect_paired_edges(g);
}

TEST(AddPursuer, ClearEmptiesGraph) {
  const Environment env = oracle::corpus("h_like");
  Rng rng(4);
  const RegionSampler sampler(env.region());
  Sgpeg g(env, 1);
  g.set_root(random_config(sampler, rng, 1));
  while (g.vertex_count() < 40) g.add_sample(random_config(sampler, rng, 1));
  g.add_pursuer(Sgpeg::Expand::clear);
  EXPECT_EQ(g.vertex_count(), 0u);
  EXPECT_EQ(g.edge_count(), 0u);
  EXPECT_EQ(g.pursuers(), 2u);
  EXPECT_FALSE(g.root());
  EXPECT_THROW(g.best_contamination(), EmptyGraph);
}

TEST(BestContamination, EmptyAndConvex) {
  const Environment sq = oracle::unit_square();
  Sgpeg g(sq, 1);
  EXPECT_THROW(g.best_contamination(), EmptyGraph);
  g.add_sample(one({0.5, 0.5}));
  EXPECT_EQ(g.best_contamination(), sq.area());
  g.set_root(one({0.5, 0.5}));
  EXPECT_EQ(g.best_contamination(), 0.0);
}

TEST(Graph, InvariantsAndExtractedSolutionsReplay) {
  Rng rng(8);
  for (const auto& name : {"l_shape", "h_like", "office_like"}) {
    const Environment env = oracle::corpus(name);
    const RegionSampler sampler(env.region());
    for (std::size_t n = 1; n <= 2; ++n) {
      Sgpeg g(env, n);
      g.set_root(random_config(sampler, rng, n));
      for (int k = 0; k < 25 && !g.extract_solution(); ++k) {
        g.add_sample(random_config(sampler, rng, n));
        double best = INFINITY;
        for (std::size_t v = 0; v < g.vertex_count(); ++v) {
          for (std::size_t id : g.vertex(v).labels) best = std::min(best, g.label(id).contaminated_area);
        }
        EXPECT_EQ(g.best_contamination(), best);
      }
      expect_antichains(g);
      expect_paired_edges(g);
      if (const auto s = g.extract_solution()) {
        EXPECT_TRUE(is_solution(env, s->waypoints)) << name;
        EXPECT_EQ(g.solution_edges().size() + 1, s->waypoints.size());
        EXPECT_EQ(s->waypoints.front(), g.vertex(*g.root()).config);
      }
    }
  }
}

TEST(Graph, RemoveEdgePairRecomputesLabels) {
  const Environment l = oracle::l_shape();
  Sgpeg g(l, 1, wide());
  g.set_root(one({1.8, 0.5}));
  g.add_sample(one({0.7, 0.7}));
  ASSERT_TRUE(g.extract_solution());
  const auto edges = g.solution_edges();
  ASSERT_EQ(edges.size(), 1u);
  g.remove_edge_pair(edges[0]);
  EXPECT_EQ(g.edge_count(), 0u);
  EXPECT_FALSE(g.extract_solution());
  EXPECT_GT(g.best_contamination(), 0.0);
}

TEST(Graph, JsonDump) {
  const Environment l = oracle::l_shape();
  Sgpeg g(l, 1, wide());
  g.set_root(one({1.8, 0.5}));
  g.add_sample(one({0.7, 0.7}));
  const Json j = g.to_json();
  EXPECT_EQ(j["num_pursuers"], 1);
  EXPECT_EQ(j["vertices"].size(), 2u);
  EXPECT_EQ(j["edges"].size(), 2u);
  EXPECT_EQ(j["root"], 0);
  // The round trip through (0.7, 0.7) clears the root's own shadow too.
  EXPECT_EQ(j["vertices"][0]["labels"], Json::array({"0"}));
  EXPECT_EQ(j["vertices"][1]["labels"], Json::array({""}));
}
