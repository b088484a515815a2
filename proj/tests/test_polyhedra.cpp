// Double description, V/H conversions and exact union coverage.

#include <gtest/gtest.h>

#include "support.hpp"

using namespace cpwl;
using testsupport::rv;

TEST(DoubleDescription, HalfPlane) {
  HalfspaceSystem sys(2);
  sys.add_inequality(rv({1, 0}), Rat(0));  // x <= 0
  ConeGenerators g = dd_cone(sys);
  ASSERT_EQ(g.lines.size(), 1u);
  EXPECT_TRUE(spans_equal(g.lines, {rv({0, 1})}, 2));
  ASSERT_EQ(g.rays.size(), 1u);
  EXPECT_EQ(g.rays[0], rv({-1, 0}));
}

TEST(DoubleDescription, Quadrant) {
  HalfspaceSystem sys(2);
  sys.add_inequality(rv({-1, 0}), Rat(0));
  sys.add_inequality(rv({0, -1}), Rat(0));
  ConeGenerators g = dd_cone(sys);
  EXPECT_TRUE(g.lines.empty());
  ASSERT_EQ(g.rays.size(), 2u);
  EXPECT_EQ(g.rays[0], rv({0, 1}));
  EXPECT_EQ(g.rays[1], rv({1, 0}));
}

TEST(DoubleDescription, PointedThreeDimCone) {
  // Octant in R^3: three extreme rays, no lineality.
  HalfspaceSystem sys(3);
  sys.add_inequality(rv({-1, 0, 0}), Rat(0));
  sys.add_inequality(rv({0, -1, 0}), Rat(0));
  sys.add_inequality(rv({0, 0, -1}), Rat(0));
  ConeGenerators g = dd_cone(sys);
  EXPECT_TRUE(g.lines.empty());
  EXPECT_EQ(g.rays.size(), 3u);
}

TEST(DoubleDescription, EqualityCutsToLine) {
  HalfspaceSystem sys(2);
  sys.add_equality(rv({1, -1}), Rat(0));
  ConeGenerators g = dd_cone(sys);
  ASSERT_EQ(g.lines.size(), 1u);
  EXPECT_TRUE(spans_equal(g.lines, {rv({1, 1})}, 2));
  EXPECT_TRUE(g.rays.empty());
}

TEST(DoubleDescription, TrivialCone) {
  HalfspaceSystem sys(1);
  sys.add_inequality(rv({1}), Rat(0));
  sys.add_inequality(rv({-1}), Rat(0));
  ConeGenerators g = dd_cone(sys);
  EXPECT_TRUE(g.lines.empty());
  EXPECT_TRUE(g.rays.empty());
}

TEST(DoubleDescription, RoundTripThroughPolar) {
  // H -> V -> H -> V is stable on seeded cones.
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    int dim = 1 + static_cast<int>(rng.next_int(0, 2));
    HalfspaceSystem sys(dim);
    for (int r = 0; r < 1 + rng.next_int(0, 2); ++r) {
      RatVec n(dim);
      for (int j = 0; j < dim; ++j) n[j] = rng.next_rat(3);
      if (n.is_zero()) continue;
      if (rng.next_int(0, 3) == 0)
        sys.add_equality(n, 0);
      else
        sys.add_inequality(n, 0);
    }
    ConeGenerators g = dd_cone(sys);
    HalfspaceSystem back = cone_to_halfspaces(g.rays, g.lines, dim);
    ConeGenerators g2 = dd_cone(back);
    EXPECT_EQ(g.lines, g2.lines);
    EXPECT_EQ(g.rays, g2.rays);
    // every generator satisfies the original system
    for (const RatVec& ray : g.rays) EXPECT_TRUE(sys.contains(ray));
    for (const RatVec& line : g.lines) {
      EXPECT_TRUE(sys.contains(line));
      EXPECT_TRUE(sys.contains(-line));
    }
  }
}

TEST(DoubleDescription, ExactSetEqualityUpToFourDims) {
  // {u : Eu = 0, Au <= 0} equals the cone generated by the computed lineality
  // basis and extreme rays, decided by the exact union machinery.
  SplitMix64 rng(777001);
  for (int trial = 0; trial < 30; ++trial) {
    int dim = 2 + static_cast<int>(rng.next_int(0, 2));
    HalfspaceSystem sys(dim);
    int nrows = 1 + static_cast<int>(rng.next_int(0, 3));
    for (int r = 0; r < nrows; ++r) {
      RatVec n(dim);
      for (int j = 0; j < dim; ++j) n[j] = rng.next_rat(2);
      if (n.is_zero()) continue;
      if (rng.next_int(0, 4) == 0)
        sys.add_equality(n, 0);
      else
        sys.add_inequality(n, 0);
    }
    ConeGenerators g = dd_cone(sys);
    HalfspaceSystem rebuilt = cone_to_halfspaces(g.rays, g.lines, dim);
    EXPECT_TRUE(unions_equal({sys}, {rebuilt}));
  }
}

TEST(Conversions, SegmentToHalfspaces) {
  GeneratorSet seg(1);
  seg.points = {rv({-1}), rv({1})};
  HalfspaceSystem h = generators_to_halfspaces(seg);
  EXPECT_TRUE(h.contains(rv({0})));
  EXPECT_TRUE(h.contains(rv({1})));
  EXPECT_FALSE(h.contains(rv({2})));
  EXPECT_FALSE(h.contains(rv({-2})));
}

TEST(Conversions, PointPlusRay) {
  GeneratorSet g(2);
  g.points = {rv({1, 0})};
  g.rays = {rv({0, 1})};
  HalfspaceSystem h = generators_to_halfspaces(g);
  EXPECT_TRUE(h.contains(rv({1, 5})));
  EXPECT_FALSE(h.contains(rv({1, -1})));
  EXPECT_FALSE(h.contains(rv({0, 0})));
}

TEST(Conversions, ConeMembershipMatchesHalfspaces) {
  SplitMix64 rng(31337);
  for (int trial = 0; trial < 20; ++trial) {
    int dim = 1 + static_cast<int>(rng.next_int(0, 2));
    GeneratorSet g(dim);
    for (int i = 0; i < rng.next_int(0, 2); ++i) {
      RatVec r(dim);
      for (int j = 0; j < dim; ++j) r[j] = rng.next_rat(3);
      g.rays.push_back(std::move(r));
    }
    for (int i = 0; i < rng.next_int(0, 1); ++i) {
      RatVec l(dim);
      for (int j = 0; j < dim; ++j) l[j] = rng.next_rat(3);
      g.lines.push_back(std::move(l));
    }
    HalfspaceSystem h = generators_to_halfspaces(g);
    for (int probe = 0; probe < 10; ++probe) {
      RatVec x(dim);
      for (int j = 0; j < dim; ++j) x[j] = rng.next_rat(4);
      EXPECT_EQ(h.contains(x), generator_membership(x, g).has_value());
    }
  }
}

TEST(UnionCoverage, IntervalSplitAcrossTwoPieces) {
  // [-1, 1] = [-1, 0] ∪ [0, 1]; no single piece covers it.
  auto interval = [](const Rat& lo, const Rat& hi) {
    HalfspaceSystem h(1);
    h.add_inequality(rv({-1}), -lo);
    h.add_inequality(rv({1}), hi);
    return h;
  };
  std::vector<HalfspaceSystem> big{interval(Rat(-1), Rat(1))};
  std::vector<HalfspaceSystem> parts{interval(Rat(-1), Rat(0)), interval(Rat(0), Rat(1))};
  EXPECT_TRUE(unions_equal(big, parts));
  std::vector<HalfspaceSystem> missing{interval(Rat(-1), Rat(0))};
  EXPECT_FALSE(unions_equal(big, missing));
}

TEST(UnionCoverage, ConeCrossingTwoPiecesIsNotContained) {
  // cone{(1,0),(0,1)} strictly exceeds cone{(1,0)} ∪ cone{(0,1)} even though
  // every generator lies in the union.
  GeneratorSet quad(2);
  quad.rays = {rv({1, 0}), rv({0, 1})};
  GeneratorSet xaxis(2), yaxis(2);
  xaxis.rays = {rv({1, 0})};
  yaxis.rays = {rv({0, 1})};
  std::vector<HalfspaceSystem> whole{generators_to_halfspaces(quad)};
  std::vector<HalfspaceSystem> arms{generators_to_halfspaces(xaxis),
                                    generators_to_halfspaces(yaxis)};
  EXPECT_FALSE(unions_equal(whole, arms));
  EXPECT_TRUE(union_covers(whole, Region(arms[0])));
  EXPECT_TRUE(union_covers(whole, Region(arms[1])));
}

TEST(GeneratorSets, SubsetChecks) {
  GeneratorSet halfline(1);
  halfline.rays = {rv({1})};
  GeneratorSet line(1);
  line.lines = {rv({1})};
  EXPECT_TRUE(generator_set_subset(halfline, line));
  EXPECT_FALSE(generator_set_subset(line, halfline));
  EXPECT_TRUE(generator_set_equal(line, line));
}
