#include <gtest/gtest.h>

#include <set>

#include "oracle.hpp"
#include "pursuit/errors.hpp"
#include "pursuit/sampling.hpp"

using namespace pursuit;

namespace {

std::set<std::pair<double, double>> keyset(const std::vector<Point>& pts) {
  std::set<std::pair<double, double>> s;
  for (Point p : pts) s.insert({p.x, p.y});
  return s;
}

}  // namespace

TEST(Web, UnitSquareNeedsOnePoint) {
  Rng rng(1);
  const Environment sq = oracle::unit_square();
  const Web w = build_web(sq, rng);
  EXPECT_EQ(w.initial.size(), 1u);
  EXPECT_TRUE(w.intersection.empty());
  EXPECT_TRUE(web_connected(sq, w));
}

TEST(Web, LShapeCoversAndLinks) {
  Rng rng(2);
  const Environment l = oracle::l_shape();
  for (int k = 0; k < 20; ++k) {
    const Web w = build_web(l, rng);
    EXPECT_GE(w.initial.size(), 1u);
    EXPECT_LE(w.residual, Tolerances::cover_fraction * l.area());
    EXPECT_EQ(w.pairs.size(), w.intersection.size());
    EXPECT_TRUE(web_connected(l, w));
  }
}

TEST(Web, PropertiesOnCorpus) {
  Rng rng(3);
  for (const auto& name : oracle::corpus_names()) {
    const Environment env = oracle::corpus(name);
    const oracle::Raster raster(env, 60);
    for (int k = 0; k < 3; ++k) {
      const Web w = build_web(env, rng);
      for (Point p : w.points()) EXPECT_TRUE(env.contains(p)) << name;
      // Each intersection point sees both of the initial points that made it.
      for (std::size_t i = 0; i < w.intersection.size(); ++i) {
        const auto [a, b] = w.pairs[i];
        EXPECT_LT(a, b);
        EXPECT_TRUE(oracle::segment_clear(env, w.intersection[i], w.initial[a], 500)) << name;
        EXPECT_TRUE(oracle::segment_clear(env, w.intersection[i], w.initial[b], 500)) << name;
      }
      // Coverage by the ray oracle: stray hidden cells sit only along walls.
      const auto hidden = oracle::hidden_cells(env, raster, w.initial, 200);
      const double hidden_area = std::count(hidden.begin(), hidden.end(), 1) * raster.cell_area();
      EXPECT_LE(hidden_area, 0.01 * env.area()) << name;
      EXPECT_LE(w.residual, Tolerances::cover_fraction * env.area()) << name;
      EXPECT_TRUE(web_connected(env, w)) << name;
    }
  }
}

TEST(Web, JsonShape) {
  Rng rng(4);
  const Environment l = oracle::l_shape();
  const Web w = build_web(l, rng);
  const Json j = web_to_json(w);
  EXPECT_EQ(j["initial"].size(), w.initial.size());
  EXPECT_EQ(j["intersection"].size(), w.intersection.size());
  EXPECT_EQ(j["pairs"].size(), w.pairs.size());
}

TEST(WebSampler, ConvexDrawsThenRebuilds) {
  Rng rng(5);
  const Environment sq = oracle::unit_square();
  WebSampler s(sq, rng);
  const JointConfig a = s.next_sample(1);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(s.generations(), 1u);
  EXPECT_EQ(a.positions[0], s.webs()[0].initial[0]);
  const JointConfig b = s.next_sample(1);
  EXPECT_EQ(s.generations(), 2u);
  EXPECT_NE(a.positions[0], b.positions[0]);
}

TEST(WebSampler, DrawsWithoutReplacementPerGeneration) {
  Rng rng(6);
  const Environment env = oracle::corpus("h_like");
  WebSampler s(env, rng);
  s.next_sample(1);
  const std::size_t w = s.webs()[0].size();
  ASSERT_GT(w, 1u);
  std::size_t gens = 1;
  std::vector<Point> in_gen{s.drawn()[0].back()};
  for (std::size_t k = 1; k < 10 * w; ++k) {
    const JointConfig c = s.next_sample(1);
    if (s.generations() != gens) {
      gens = s.generations();
      in_gen.clear();
    }
    in_gen.push_back(c.positions[0]);
    EXPECT_EQ(keyset(in_gen).size(), in_gen.size());
    EXPECT_EQ(keyset(s.webs()[0].points()).count({c.positions[0].x, c.positions[0].y}), 1u);
  }
  // Web sizes vary between generations, so the count is close to ten.
  EXPECT_GE(s.generations(), 5u);
  EXPECT_LE(s.generations(), 20u);
}

TEST(WebSampler, ExactlyTenGenerationsOnFixedSizeWebs) {
  // On a convex map each web is a single point.
  Rng rng(7);
  const Environment sq = oracle::unit_square();
  WebSampler s(sq, rng);
  for (int k = 0; k < 10; ++k) s.next_sample(1);
  EXPECT_EQ(s.generations(), 10u);
}

TEST(WebSampler, IndependentWebsPerPursuer) {
  Rng rng(8);
  const Environment env = oracle::corpus("office_like");
  WebSampler s(env, rng);
  const JointConfig c = s.next_sample(2);
  ASSERT_EQ(c.size(), 2u);
  ASSERT_EQ(s.webs().size(), 2u);
  EXPECT_NE(keyset(s.webs()[0].points()), keyset(s.webs()[1].points()));
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(keyset(s.webs()[i].points()).count({c.positions[i].x, c.positions[i].y}), 1u);
  }
  // Growing the team keeps the existing webs.
  const auto before = keyset(s.webs()[0].points());
  s.next_sample(3);
  ASSERT_EQ(s.webs().size(), 3u);
  EXPECT_EQ(keyset(s.webs()[0].points()), before);
}

TEST(WebSampler, Deterministic) {
  const Environment env = oracle::corpus("spider_like");
  auto run = [&] {
    Rng rng(9);
    WebSampler s(env, rng);
    std::vector<Point> out;
    for (int k = 0; k < 40; ++k) {
      for (Point p : s.next_sample(2).positions) out.push_back(p);
    }
    return out;
  };
  EXPECT_EQ(run(), run());
}

TEST(WebSampler, DenserAtHJunctions) {
  // Crossbar junction squares against plain crossbar squares of equal size.
  const Environment env = oracle::corpus("h_like");
  Rng rng(10);
  auto in_box = [](Point p, double cx) { return std::abs(p.x - cx) <= 0.75 && std::abs(p.y - 5.0) <= 0.75; };
  int junction = 0, plain = 0;
  for (int k = 0; k < 750; ++k) {
    const Web w = build_web(env, rng);
    for (Point p : w.points()) {
      junction += in_box(p, 7.75) || in_box(p, 14.75) || in_box(p, 0.75);
      plain += in_box(p, 4.25) || in_box(p, 11.25) || in_box(p, 3.5);
    }
  }
  EXPECT_GT(junction, plain);
}

TEST(UniformSampler, InsideAndSized) {
  Rng rng(11);
  const Environment env = oracle::corpus("office_like");
  UniformSampler s(env, rng);
  for (int k = 0; k < 200; ++k) {
    const JointConfig c = s.next_sample(3);
    ASSERT_EQ(c.size(), 3u);
    for (Point p : c.positions) EXPECT_TRUE(oracle::inside(env, p));
  }
}
