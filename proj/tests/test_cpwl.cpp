// CPWL functions: values, active sets, subdifferentials, decompositions, the
// support-vertex constructor, and the convexity/monotonicity properties.

#include <gtest/gtest.h>

#include "support.hpp"

using namespace cpwl;
using testsupport::rv;

TEST(Evaluate, AbsoluteValue) {
  CpwlFunction f = testsupport::theta_abs();
  EXPECT_EQ(*f.evaluate(rv({2})), Rat(2));
  EXPECT_EQ(*f.evaluate(rv({-3})), Rat(3));
  EXPECT_EQ(*f.evaluate(rv({0})), Rat(0));
}

TEST(Evaluate, IndicatorIsInfiniteOutside) {
  CpwlFunction f = testsupport::theta_halfline();
  EXPECT_FALSE(f.evaluate(rv({1})).has_value());
  EXPECT_EQ(*f.evaluate(rv({-1})), Rat(0));
}

TEST(Evaluate, MaxOfCoordinates) {
  CpwlFunction f = testsupport::theta_max2();
  EXPECT_EQ(*f.evaluate(rv({3, 5})), Rat(5));
}

TEST(Evaluate, DimensionMismatchRejected) {
  CpwlFunction f = testsupport::theta_abs();
  EXPECT_THROW(f.evaluate(rv({1, 2})), std::invalid_argument);
}

TEST(Construction, EmptyDomainRejected) {
  HalfspaceSystem dom(1);
  dom.add_inequality(rv({1}), Rat(-1));
  dom.add_inequality(rv({-1}), Rat(-1));  // x <= -1 and x >= 1
  EXPECT_THROW(CpwlFunction({{rv({0}), Rat(0)}}, dom), std::invalid_argument);
}

TEST(ActiveSets, TieAtKink) {
  CpwlFunction f = testsupport::theta_abs();
  ActiveSets a = f.active_sets(rv({0}));
  EXPECT_EQ(a.pieces, (std::vector<int>{0, 1}));
  EXPECT_TRUE(a.rows.empty());
  ActiveSets b = f.active_sets(rv({3}));
  EXPECT_EQ(b.pieces, (std::vector<int>{0}));
}

TEST(ActiveSets, TightDomainRow) {
  CpwlFunction f = testsupport::theta_halfline();
  ActiveSets a = f.active_sets(rv({0}));
  EXPECT_EQ(a.pieces, (std::vector<int>{0}));
  EXPECT_EQ(a.rows, (std::vector<int>{0}));
  EXPECT_THROW(f.active_sets(rv({1})), PreconditionError);
}

TEST(Subdifferential, IntervalAtKink) {
  CpwlFunction f = testsupport::theta_abs();
  GeneratorSet g = f.subdifferential(rv({0}));
  EXPECT_EQ(g.points.size(), 2u);
  EXPECT_TRUE(g.rays.empty());
  EXPECT_TRUE(f.is_subgradient(rv({0}), rv({1})));
  EXPECT_TRUE(f.is_subgradient(rv({0}), RatVec{Rat(-1, 2)}));
  EXPECT_FALSE(f.is_subgradient(rv({0}), rv({2})));
}

TEST(Subdifferential, HalfLineAtBoundary) {
  CpwlFunction f = testsupport::theta_halfline();
  GeneratorSet g = f.subdifferential(rv({0}));
  ASSERT_EQ(g.points.size(), 1u);
  ASSERT_EQ(g.rays.size(), 1u);
  EXPECT_TRUE(f.is_subgradient(rv({0}), rv({5})));
  EXPECT_FALSE(f.is_subgradient(rv({0}), rv({-1})));
}

TEST(Subdifferential, MaxAtDiagonal) {
  CpwlFunction f = testsupport::theta_max2();
  GeneratorSet g = f.subdifferential(rv({1, 1}));
  EXPECT_EQ(g.points.size(), 2u);
  EXPECT_TRUE(f.is_subgradient(rv({1, 1}), RatVec{Rat(1, 2), Rat(1, 2)}));
}

TEST(SingularSubdifferential, LipschitzGivesZero) {
  CpwlFunction f = testsupport::theta_abs();
  GeneratorSet g = f.singular_subdifferential(rv({0}));
  EXPECT_TRUE(g.points.empty());
  EXPECT_TRUE(g.rays.empty());
}

TEST(SingularSubdifferential, QuadrantNormalCone) {
  CpwlFunction f = testsupport::theta_quadrant();
  GeneratorSet g = f.singular_subdifferential(rv({0, 0}));
  EXPECT_EQ(g.rays.size(), 2u);
  EXPECT_TRUE(recession_contains(g, rv({1, 0})));
  EXPECT_TRUE(recession_contains(g, rv({0, 1})));
  EXPECT_FALSE(recession_contains(g, rv({-1, 0})));
}

TEST(Decompose, MidpointAtKink) {
  CpwlFunction f = testsupport::theta_abs();
  SubgradientDecomposition dec = f.decompose_subgradient(rv({0}), rv({0}));
  EXPECT_EQ(dec.piece_coeffs[0], Rat(1, 2));
  EXPECT_EQ(dec.piece_coeffs[1], Rat(1, 2));
  EXPECT_EQ(dec.piece_support, (std::vector<int>{0, 1}));
  EXPECT_TRUE(dec.row_support.empty());
}

TEST(Decompose, VertexHasSingletonSupport) {
  CpwlFunction f = testsupport::theta_abs();
  SubgradientDecomposition dec = f.decompose_subgradient(rv({0}), rv({1}));
  EXPECT_EQ(dec.piece_coeffs[0], Rat(1));
  EXPECT_EQ(dec.piece_support, (std::vector<int>{0}));
}

TEST(Decompose, ConePartCarriesRowMultiplier) {
  CpwlFunction f = testsupport::theta_halfline();
  SubgradientDecomposition dec = f.decompose_subgradient(rv({0}), rv({2}));
  EXPECT_EQ(dec.piece_coeffs[0], Rat(1));
  EXPECT_EQ(dec.row_coeffs[0], Rat(2));
  EXPECT_EQ(dec.piece_support, (std::vector<int>{0}));
  EXPECT_EQ(dec.row_support, (std::vector<int>{0}));
}

TEST(Decompose, NonSubgradientRejected) {
  CpwlFunction f = testsupport::theta_abs();
  EXPECT_THROW(f.decompose_subgradient(rv({0}), rv({2})), PreconditionError);
}

TEST(Decompose, SupportsAreMaximal) {
  // Any other valid decomposition found by an LP has support inside (J1, J2).
  SplitMix64 rng(4242);
  for (const auto& inst : {testsupport::theta_abs(), testsupport::theta_halfline(),
                           testsupport::theta_max2(), testsupport::random_cpwl(rng, 2, 3, 2)}) {
    for (const auto& sample : testsupport::stratum_points(inst, 3)) {
      for (const RatVec& v : sample.subgradients) {
        SubgradientDecomposition dec = inst.decompose_subgradient(sample.z, v);
        EXPECT_EQ(dec.conv_part + dec.cone_part, v);
        ActiveSets act = inst.active_sets(sample.z);
        // vertex-style witnesses from maximizing random objectives
        for (int probe = 0; probe < 4; ++probe) {
          lp::GeneralProblem gp;
          int nk = static_cast<int>(act.pieces.size());
          int ni = static_cast<int>(act.rows.size());
          gp.nvars = nk + ni;
          for (int row = 0; row < inst.dim(); ++row) {
            RatVec coeff(gp.nvars);
            for (int j = 0; j < nk; ++j) coeff[j] = inst.piece(act.pieces[j]).gradient[row];
            for (int j = 0; j < ni; ++j) coeff[nk + j] = inst.row_normal(act.rows[j])[row];
            gp.eq.push_back({std::move(coeff), v[row]});
          }
          RatVec ones(gp.nvars);
          for (int j = 0; j < nk; ++j) ones[j] = 1;
          gp.eq.push_back({std::move(ones), Rat(1)});
          for (int j = 0; j < gp.nvars; ++j) {
            RatVec neg(gp.nvars);
            neg[j] = -1;
            gp.le.push_back({std::move(neg), Rat(0)});
          }
          RatVec obj(gp.nvars);
          for (int j = 0; j < gp.nvars; ++j) obj[j] = rng.next_rat(3);
          gp.objective = obj;
          gp.maximize = true;
          lp::GeneralResult res = lp::solve_general(gp);
          if (res.status != lp::Status::optimal) continue;
          for (int j = 0; j < nk; ++j)
            if (res.x[j] > 0)
              EXPECT_NE(std::find(dec.piece_support.begin(), dec.piece_support.end(),
                                  act.pieces[j]),
                        dec.piece_support.end());
          for (int j = 0; j < ni; ++j)
            if (res.x[nk + j] > 0)
              EXPECT_NE(std::find(dec.row_support.begin(), dec.row_support.end(), act.rows[j]),
                        dec.row_support.end());
        }
      }
    }
  }
}

TEST(DuplicatePieces, KeptWithUserIndexing) {
  // Identical pieces are not deduplicated; both indices stay active and both
  // can carry multipliers.
  CpwlFunction f({{rv({1}), Rat(0)}, {rv({1}), Rat(0)}, {rv({-1}), Rat(0)}},
                 HalfspaceSystem(1));
  EXPECT_EQ(f.piece_count(), 3);
  ActiveSets a = f.active_sets(rv({2}));
  EXPECT_EQ(a.pieces, (std::vector<int>{0, 1}));
  SubgradientDecomposition dec = f.decompose_subgradient(rv({2}), rv({1}));
  EXPECT_EQ(dec.piece_support, (std::vector<int>{0, 1}));
  EXPECT_EQ(dec.piece_coeffs[0] + dec.piece_coeffs[1], Rat(1));
}

TEST(SupportVertices, AbsoluteValueFromVertices) {
  CpwlFunction f = CpwlFunction::from_support_vertices({rv({1}), rv({-1})});
  EXPECT_EQ(*f.evaluate(rv({3})), Rat(3));
  EXPECT_EQ(*f.evaluate(rv({-2})), Rat(2));
}

TEST(SupportVertices, SingletonIsZeroFunction) {
  CpwlFunction f = CpwlFunction::from_support_vertices({rv({0})});
  EXPECT_EQ(*f.evaluate(rv({17})), Rat(0));
}

TEST(SupportVertices, UnitSquare) {
  CpwlFunction f = CpwlFunction::from_support_vertices(
      {rv({0, 0}), rv({1, 0}), rv({0, 1}), rv({1, 1})});
  EXPECT_EQ(*f.evaluate(rv({2, 3})), Rat(5));    // max{0, 2, 3, 5}
  EXPECT_EQ(*f.evaluate(rv({-2, 1})), Rat(1));   // max{0, -2, 1, -1}
  EXPECT_EQ(*f.evaluate(rv({-2, -1})), Rat(0));
  EXPECT_THROW(CpwlFunction::from_support_vertices({}), std::invalid_argument);
}

TEST(Convexity, SubgradientInequalityOnSamples) {
  SplitMix64 rng(808);
  for (const auto& fam : testsupport::oracle_family()) {
    const CpwlFunction& f = fam.theta;
    auto points = testsupport::stratum_points(f, 2);
    for (const auto& s : points) {
      for (const RatVec& v : s.subgradients) {
        for (const auto& other : points) {
          std::optional<Rat> fz = f.evaluate(s.z);
          std::optional<Rat> fo = f.evaluate(other.z);
          ASSERT_TRUE(fz && fo);
          EXPECT_GE(*fo, *fz + dot(v, other.z - s.z));
        }
      }
    }
  }
  (void)rng;
}

TEST(Monotonicity, ActiveSetsShrinkInsideRadius) {
  SplitMix64 rng(909);
  for (const auto& fam : testsupport::oracle_family()) {
    const CpwlFunction& f = fam.theta;
    for (const auto& s : testsupport::stratum_points(f, 1)) {
      ActiveSets base = f.active_sets(s.z);
      Rat radius = f.active_set_radius(s.z);
      EXPECT_GT(radius, Rat(0));
      for (int probe = 0; probe < 8; ++probe) {
        RatVec dir(f.dim());
        for (int j = 0; j < f.dim(); ++j) dir[j] = rng.next_rat(4);
        Rat norm = dir.linf_norm();
        if (norm == 0) continue;
        RatVec z = s.z + (radius / norm * Rat(rng.next_int(1, 4), 4)) * dir;
        if (!f.in_domain(z)) continue;
        ActiveSets near = f.active_sets(z);
        for (int i : near.pieces)
          EXPECT_NE(std::find(base.pieces.begin(), base.pieces.end(), i), base.pieces.end());
        for (int t : near.rows)
          EXPECT_NE(std::find(base.rows.begin(), base.rows.end(), t), base.rows.end());
      }
    }
  }
}
