#include <gtest/gtest.h>

#include "oracle.hpp"
#include "pursuit/errors.hpp"
#include "pursuit/verify.hpp"

using namespace pursuit;

namespace {

JointConfig one(Point p) { return JointConfig{{p}}; }

Solution single(std::vector<Point> pts) {
  Solution s;
  s.num_pursuers = 1;
  for (Point p : pts) s.waypoints.push_back(one(p));
  return s;
}

}  // namespace

TEST(GridVerify, ConvexStationaryCleared) {
  const GridVerdict v = grid_verify(oracle::unit_square(), single({{0.5, 0.5}}), 128);
  EXPECT_TRUE(v.cleared);
  EXPECT_EQ(v.contaminated_cells, 0u);
}

TEST(GridVerify, LShapeStationaryLeavesArm) {
  const Environment l = oracle::l_shape();
  const GridVerdict v = grid_verify(l, single({{1.8, 0.5}}), 256);
  EXPECT_FALSE(v.cleared);
  const double shadow = shadow_set(l, one({1.8, 0.5})).areas.at(0);
  EXPECT_NEAR(v.contaminated_area, shadow, 0.03 * shadow);
  EXPECT_NEAR(v.contaminated_area, v.contaminated_cells * v.cell * v.cell, 1e-12);
}

TEST(GridVerify, LShapeSweepClearedAtEveryResolution) {
  const Environment l = oracle::l_shape();
  for (int r : {128, 256, 512}) {
    const GridVerdict v = grid_verify(l, single({{1.8, 0.5}, {0.7, 0.7}}), r);
    EXPECT_TRUE(v.cleared) << r;
    EXPECT_GT(v.steps, 0u);
  }
}

TEST(GridVerify, ClearedAreaStaysClear) {
  // Once nothing is contaminated, walking back cannot bring anything back.
  const Environment l = oracle::l_shape();
  EXPECT_TRUE(grid_verify(l, single({{1.8, 0.5}, {0.7, 0.7}, {1.8, 0.5}}), 128).cleared);
}

TEST(GridVerify, HLikeOneStepIsNotEnough) {
  const Environment env = oracle::corpus("h_like");
  const GridVerdict v = grid_verify(env, single({{0.75, 1.0}, {0.75, 9.0}}), 128);
  EXPECT_FALSE(v.cleared);
  EXPECT_GT(v.contaminated_area, 10.0);
}

TEST(GridVerify, CellNeverSeenStaysContaminated) {
  // A pocket behind a hole corner: the pursuer never leaves the left side.
  const Environment env = Environment::create({{0, 0}, {4, 0}, {4, 2}, {0, 2}},
                                              {{{2, 0.5}, {3, 0.5}, {3, 1.5}, {2, 1.5}}});
  const GridVerdict v = grid_verify(env, single({{0.5, 1.0}, {1.0, 1.0}}), 128);
  EXPECT_FALSE(v.cleared);
  EXPECT_GT(v.contaminated_area, 0.0);
}

TEST(GridVerify, RejectsCoarseGrids) {
  EXPECT_THROW(grid_verify(oracle::l_shape(), single({{0.5, 0.5}}), 32), std::invalid_argument);
  const Environment env = Environment::create({{0, 0}, {10, 0}, {10, 0.1}, {0, 0.1}}, {});
  EXPECT_THROW(grid_verify(env, single({{5, 0.05}}), 64), ResolutionTooCoarse);
}

TEST(GridVerify, DeadlineThrowsTimeout) {
  const Environment env = oracle::corpus("office_like");
  const Solution s = single({{1, 1}, {14, 1}, {14, 9}});
  EXPECT_THROW(grid_verify(env, s, 256, std::chrono::steady_clock::now()), Timeout);
}

TEST(NarrowestCorridor, Examples) {
  EXPECT_NEAR(narrowest_corridor(oracle::unit_square()), 1.0, 1e-12);
  EXPECT_NEAR(narrowest_corridor(oracle::l_shape()), 1.0, 1e-12);
  EXPECT_NEAR(narrowest_corridor(oracle::corpus("h_like")), 1.5, 1e-9);
  EXPECT_NEAR(narrowest_corridor(Environment::create({{0, 0}, {10, 0}, {10, 0.1}, {0, 0.1}}, {})), 0.1,
              1e-12);
}

TEST(Grid, FreeCellsMatchOracle) {
  for (const auto& name : oracle::corpus_names()) {
    const Environment env = oracle::corpus(name);
    const Grid g(env, 64);
    const oracle::Raster r(env, 64);
    ASSERT_EQ(g.nx(), r.nx) << name;
    ASSERT_EQ(g.ny(), r.ny) << name;
    std::size_t same = 0;
    for (std::size_t i = 0; i < g.size(); ++i) same += g.free(i) == (r.free[i] != 0);
    EXPECT_GE(same, g.size() - g.size() / 200) << name;
  }
}

TEST(VisibleCells, MatchesSampledSegments) {
  Rng rng(3);
  for (const auto& name : {"l_shape", "spider_like", "office_like"}) {
    const Environment env = oracle::corpus(name);
    const Grid g(env, 64);
    const RegionSampler sampler(env.region());
    const Point p = sampler.sample(rng);
    const auto vis = visible_cells(env, g, p);
    std::size_t total = 0, agree = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!g.free(i)) continue;
      ++total;
      agree += (vis[i] != 0) == oracle::segment_clear(env, p, g.center(i), 400);
    }
    EXPECT_GE(agree, total - total / 100) << name;
  }
}
