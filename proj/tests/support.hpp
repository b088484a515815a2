#pragma once
// Shared instance builders for the unit and acceptance suites: the small named
// functions every suite leans on, seeded random generators, and the fixed
// instance families behind the oracle-equivalence, stability and minimax
// criteria.

#include <string>
#include <vector>

#include "cpwl/minimax.hpp"
#include "cpwl/oracle.hpp"
#include "cpwl/prng.hpp"

namespace testsupport {

using namespace cpwl;

inline RatVec rv(std::initializer_list<long long> xs) {
  RatVec v(static_cast<int>(xs.size()));
  int i = 0;
  for (long long x : xs) v[i++] = Rat(x);
  return v;
}

// -- named functions --------------------------------------------------------

inline CpwlFunction theta_abs() {
  return CpwlFunction({{rv({1}), Rat(0)}, {rv({-1}), Rat(0)}}, HalfspaceSystem(1));
}

/// Indicator of (-inf, 0]: one zero piece, one domain row z <= 0.
inline CpwlFunction theta_halfline() {
  HalfspaceSystem dom(1);
  dom.add_inequality(rv({1}), Rat(0));
  return CpwlFunction({{rv({0}), Rat(0)}}, dom);
}

inline CpwlFunction theta_max2() {
  return CpwlFunction({{rv({1, 0}), Rat(0)}, {rv({0, 1}), Rat(0)}}, HalfspaceSystem(2));
}

/// |z1| as a function on R^2.
inline CpwlFunction theta_abs_z1() {
  return CpwlFunction({{rv({1, 0}), Rat(0)}, {rv({-1, 0}), Rat(0)}}, HalfspaceSystem(2));
}

inline CpwlFunction theta_max0z() {
  return CpwlFunction({{rv({0}), Rat(0)}, {rv({1}), Rat(0)}}, HalfspaceSystem(1));
}

inline CpwlFunction theta_linear(RatVec gradient, Rat offset = Rat(0)) {
  int m = gradient.dim();
  return CpwlFunction({{std::move(gradient), std::move(offset)}}, HalfspaceSystem(m));
}

/// Zero function on the negative quadrant of R^2.
inline CpwlFunction theta_quadrant() {
  HalfspaceSystem dom(2);
  dom.add_inequality(rv({1, 0}), Rat(0));
  dom.add_inequality(rv({0, 1}), Rat(0));
  return CpwlFunction({{rv({0, 0}), Rat(0)}}, dom);
}

// -- seeded generators ------------------------------------------------------

/// Random CPWL function with a guaranteed-nonempty domain: rows are anchored
/// at a random point, half of them tight there.
inline CpwlFunction random_cpwl(SplitMix64& rng, int m, int l, int p, int height = 4) {
  std::vector<AffinePiece> pieces;
  for (int i = 0; i < l; ++i) {
    RatVec a(m);
    for (int j = 0; j < m; ++j) a[j] = rng.next_rat(height);
    pieces.push_back({std::move(a), rng.next_rat(height)});
  }
  RatVec anchor(m);
  for (int j = 0; j < m; ++j) anchor[j] = rng.next_rat(2);
  HalfspaceSystem dom(m);
  for (int t = 0; t < p; ++t) {
    RatVec d(m);
    bool zero = true;
    while (zero) {
      for (int j = 0; j < m; ++j) d[j] = rng.next_rat(height);
      zero = d.is_zero();
    }
    Rat slack = rng.next_int(0, 1) == 0 ? Rat(0) : Rat(rng.next_int(1, 4), rng.next_int(1, 2));
    dom.add_inequality(d, dot(d, anchor) + slack);
  }
  return CpwlFunction(std::move(pieces), std::move(dom));
}

// -- the oracle family (criteria 1-4) ---------------------------------------

struct FamilyInstance {
  std::string name;
  CpwlFunction theta;
};

/// Exhaustive structural family at desk scale: every (m, l, p) signature with
/// m <= 2, l <= 3, p <= 2 carries two seeded instances of height <= 4, plus
/// the named degenerate cases.
inline std::vector<FamilyInstance> oracle_family() {
  std::vector<FamilyInstance> fam;
  fam.push_back({"abs", theta_abs()});
  fam.push_back({"halfline-indicator", theta_halfline()});
  fam.push_back({"max2", theta_max2()});
  fam.push_back({"abs-z1", theta_abs_z1()});
  fam.push_back({"linear-1d", theta_linear(rv({2}), Rat(1))});
  fam.push_back({"quadrant", theta_quadrant()});
  fam.push_back({"unit-square-support",
                 CpwlFunction::from_support_vertices({rv({0, 0}), rv({1, 0}), rv({0, 1}), rv({1, 1})})});
  SplitMix64 rng(20240811);
  for (int m = 1; m <= 2; ++m)
    for (int l = 1; l <= 3; ++l)
      for (int p = 0; p <= 2; ++p)
        for (int copy = 0; copy < 2; ++copy) {
          std::string name = "seeded-m" + std::to_string(m) + "l" + std::to_string(l) + "p" +
                             std::to_string(p) + "-" + std::to_string(copy);
          fam.push_back({std::move(name), random_cpwl(rng, m, l, p)});
        }
  return fam;
}

struct GraphPointSample {
  RatVec z;
  std::vector<RatVec> subgradients;
};

/// One representative point per nonempty stratum, each with up to
/// `per_point` distinct subgradient samples (vertices, centroid, centroid
/// plus ray steps, midpoints).
inline std::vector<GraphPointSample> stratum_points(const CpwlFunction& theta, int per_point,
                                                    int max_active = 12) {
  std::vector<GraphPointSample> out;
  for (const GraphPiece& piece : graph_pieces(theta, max_active)) {
    auto [sys, strict] = stratum_system(theta, piece.stratum_pieces, piece.stratum_rows);
    std::optional<RatVec> z = feasible_point(sys, strict);
    if (!z) continue;
    GraphPointSample sample;
    sample.z = *z;
    GeneratorSet sub = theta.subdifferential(*z);
    RatVec centroid = RatVec::zero(theta.dim());
    for (const RatVec& p : sub.points) centroid += p;
    centroid *= Rat(1, static_cast<long long>(sub.points.size()));
    auto push_unique = [&](const RatVec& v) {
      if (static_cast<int>(sample.subgradients.size()) >= per_point) return;
      for (const RatVec& e : sample.subgradients)
        if (e == v) return;
      sample.subgradients.push_back(v);
    };
    push_unique(centroid);
    for (const RatVec& p : sub.points) push_unique(p);
    for (const RatVec& p : sub.points) push_unique(Rat(1, 2) * (p + centroid));
    for (const RatVec& r : sub.rays) {
      push_unique(centroid + r);
      push_unique(centroid + Rat(1, 2) * r);
      push_unique(centroid + Rat(2) * r);
    }
    for (std::size_t a = 0; a + 1 < sub.points.size(); ++a)
      push_unique(Rat(1, 4) * sub.points[a] + Rat(3, 4) * sub.points[a + 1]);
    out.push_back(std::move(sample));
  }
  return out;
}

/// Fixed-seed direction set: origin, signed axes, then random rationals.
inline std::vector<RatVec> direction_set(int dim, int count, std::uint64_t seed = 7) {
  std::vector<RatVec> dirs;
  dirs.push_back(RatVec::zero(dim));
  for (int i = 0; i < dim; ++i) {
    dirs.push_back(RatVec::unit(dim, i));
    dirs.push_back(-RatVec::unit(dim, i));
  }
  SplitMix64 rng(seed);
  while (static_cast<int>(dirs.size()) < count) {
    RatVec d(dim);
    for (int i = 0; i < dim; ++i) d[i] = rng.next_rat(4);
    if (!d.is_zero()) dirs.push_back(std::move(d));
  }
  return dirs;
}

// -- composite instances (criteria 5, 6, 9) ---------------------------------

/// Stationary-by-construction composite instance over a seeded CPWL function:
/// the tilt is assembled from a sampled multiplier.
inline CompositeProblemData random_composite(SplitMix64& rng, int variant) {
  int m = 1 + static_cast<int>(rng.next_int(0, 1));
  int l = 1 + static_cast<int>(rng.next_int(0, 2));
  int p = static_cast<int>(rng.next_int(0, 2));
  int n = 1 + static_cast<int>(rng.next_int(0, 2));
  CpwlFunction theta = random_cpwl(rng, m, l, p, 3);
  auto samples = stratum_points(theta, 1);
  const GraphPointSample& pick = samples[static_cast<std::size_t>(
      rng.next_int(0, static_cast<long long>(samples.size()) - 1))];
  RatVec zbar = pick.z;
  RatVec lambda = pick.subgradients.front();

  RatMat jx(m, n);
  if (variant % 7 == 0) {
    // leave all-zero: fully degenerate
  } else if (variant % 7 == 1) {
    for (int i = 0; i < std::min(m, n); ++i) jx.at(i, i) = 1;  // full rank slice
  } else {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) jx.at(i, j) = rng.next_rat(3);
  }
  RatVec grad0(n);
  for (int j = 0; j < n; ++j) grad0[j] = rng.next_rat(3);
  RatMat h0(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      Rat s = rng.next_rat(3);
      h0.at(i, j) = s;
      h0.at(j, i) = s;
    }
  std::vector<RatMat> hxx, hxw;
  for (int c = 0; c < m; ++c) {
    RatMat h(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        Rat s = rng.next_rat(2);
        h.at(i, j) = s;
        h.at(j, i) = s;
      }
    hxx.push_back(std::move(h));
    hxw.push_back(RatMat(n, 0));
  }
  RatVec vbar = grad0;
  for (int j = 0; j < n; ++j) vbar[j] += dot(lambda, jx.col(j));
  return CompositeProblemData{std::move(theta), n, 0,      std::move(grad0), RatVec(0),
                              std::move(jx),    RatMat(m, 0), std::move(h0), RatMat(n, 0),
                              std::move(hxx),   std::move(hxw), std::move(zbar), std::move(vbar)};
}

/// Degenerate instances with a provably non-singleton multiplier set: zero
/// x-Jacobian and a tilt equal to grad phi0, so the set is the whole
/// subdifferential at a kink.
inline CompositeProblemData degenerate_composite(int variant) {
  SplitMix64 rng(9000 + static_cast<std::uint64_t>(variant));
  CpwlFunction theta = variant % 2 == 0 ? theta_abs() : theta_max0z();
  int n = 1 + variant % 2;
  int m = 1;
  RatVec grad0(n);
  for (int j = 0; j < n; ++j) grad0[j] = rng.next_rat(3);
  std::vector<RatMat> hxx{RatMat(n, n)}, hxw{RatMat(n, 0)};
  return CompositeProblemData{std::move(theta), n, 0, grad0, RatVec(0), RatMat(m, n), RatMat(m, 0),
                              RatMat::identity(n), RatMat(n, 0), std::move(hxx), std::move(hxw),
                              rv({0}), grad0};
}

// -- quadratic probe instances (criterion 7) --------------------------------

struct ProbeCase {
  std::string name;
  QuadraticProblemInstance instance;
};

inline QuadraticPoly zero_poly(int n, int d) {
  return QuadraticPoly{Rat(0), RatVec(n), RatVec(d), RatMat(n, n), RatMat(n, d), RatMat(d, d)};
}

/// phi(x,w) = <g, x> + <gw, w> coordinate map, affine in x.
inline QuadraticPoly affine_component(RatVec gx, RatVec gw) {
  int n = gx.dim(), d = gw.dim();
  QuadraticPoly q = zero_poly(n, d);
  q.gx = std::move(gx);
  q.gw = std::move(gw);
  return q;
}

/// Mixed constructed family, SSOSC pass and fail by curvature choice. All
/// instances keep the inner maps affine in x, with unit-scale kinks so that
/// the certifier's neighborhood covers the probe grid.
inline std::vector<ProbeCase> probe_family() {
  std::vector<ProbeCase> out;
  auto curved = [&](int n, int d, std::vector<Rat> diag) {
    QuadraticPoly q = zero_poly(n, d);
    for (int i = 0; i < n; ++i) q.axx.at(i, i) = diag[static_cast<std::size_t>(i)];
    return q;
  };

  // n=1, m=1: theta = |.| and max{0,z} over Phi(x) = x, curvature swept.
  for (Rat c : {Rat(0), Rat(2), Rat(-1)}) {
    QuadraticProblemInstance inst{theta_abs(), 1, 0, curved(1, 0, {c}),
                                  {affine_component(rv({1}), RatVec(0))},
                                  rv({0}), RatVec(0), rv({0}), Rat(1, 2)};
    out.push_back({"abs-c" + rat_str(c), std::move(inst)});
  }
  for (Rat c : {Rat(2), Rat(-1), Rat(0)}) {
    QuadraticProblemInstance inst{theta_max0z(), 1, 0, curved(1, 0, {c}),
                                  {affine_component(rv({1}), RatVec(0))},
                                  rv({0}), RatVec(0), rv({0}), Rat(1, 2)};
    out.push_back({"max0z-c" + rat_str(c), std::move(inst)});
  }
  // The three worked composite examples (d = 1, Phi = x + w).
  {
    QuadraticProblemInstance base{theta_abs(), 1, 1, zero_poly(1, 1),
                                  {affine_component(rv({1}), rv({1}))},
                                  rv({0}), rv({0}), rv({0}), Rat(1, 2)};
    out.push_back({"worked-min-abs", base});
    QuadraticProblemInstance concave{theta_max0z(), 1, 1, curved(1, 1, {Rat(-1)}),
                                     {affine_component(rv({1}), rv({1}))},
                                     rv({0}), rv({0}), rv({0}), Rat(1, 2)};
    out.push_back({"worked-concave", std::move(concave)});
    QuadraticProblemInstance convex{theta_max0z(), 1, 1, curved(1, 1, {Rat(2)}),
                                    {affine_component(rv({1}), rv({1}))},
                                    rv({0}), rv({0}), rv({0}), Rat(1, 2)};
    out.push_back({"worked-convex", std::move(convex)});
  }
  // n=2, m=2: theta = max{z1, z2} over the identity, stationary tilt (1/2, 1/2).
  for (Rat c : {Rat(2), Rat(-2)}) {
    std::vector<QuadraticPoly> comps{affine_component(rv({1, 0}), RatVec(0)),
                                     affine_component(rv({0, 1}), RatVec(0))};
    QuadraticProblemInstance inst{theta_max2(), 2, 0, curved(2, 0, {c, c}), std::move(comps),
                                  rv({0, 0}), RatVec(0),
                                  RatVec{Rat(1, 2), Rat(1, 2)}, Rat(1, 2)};
    out.push_back({"max2-c" + rat_str(c), std::move(inst)});
  }
  // n=2: theta = |z1| on R^2, SSOSC lives on the x2 axis.
  for (Rat c2 : {Rat(1), Rat(-1)}) {
    std::vector<QuadraticPoly> comps{affine_component(rv({1, 0}), RatVec(0)),
                                     affine_component(rv({0, 1}), RatVec(0))};
    QuadraticProblemInstance inst{theta_abs_z1(), 2, 0, curved(2, 0, {Rat(1), c2}),
                                  std::move(comps), rv({0, 0}), RatVec(0), rv({0, 0}), Rat(1, 2)};
    out.push_back({"absz1-c" + rat_str(c2), std::move(inst)});
  }
  // Kink of |x| realized through m=2: theta = max{z1, z2}, Phi = (x, -x).
  for (Rat c : {Rat(0), Rat(-2), Rat(1)}) {
    std::vector<QuadraticPoly> comps{affine_component(rv({1}), RatVec(0)),
                                     affine_component(rv({-1}), RatVec(0))};
    QuadraticProblemInstance inst{theta_max2(), 1, 0, curved(1, 0, {c}), std::move(comps),
                                  rv({0}), RatVec(0), rv({0}), Rat(1, 2)};
    out.push_back({"pm-c" + rat_str(c), std::move(inst)});
  }
  // Active domain row with strictly positive multiplier: theta = indicator of
  // (-inf, 0], Phi = x, tilt 1; stable for both curvature signs.
  for (Rat c : {Rat(0), Rat(-1)}) {
    QuadraticProblemInstance inst{theta_halfline(), 1, 0, curved(1, 0, {c}),
                                  {affine_component(rv({1}), RatVec(0))},
                                  rv({0}), RatVec(0), rv({1}), Rat(1, 2)};
    out.push_back({"halfline-c" + rat_str(c), std::move(inst)});
  }
  // m=3: theta = max{z1, z2, z3}, Phi = (x, -x, 2x - 1); the third branch is
  // inactive at the base, so the multiplier stays unique.
  for (Rat c : {Rat(2), Rat(-2)}) {
    QuadraticPoly third = affine_component(rv({2}), RatVec(0));
    third.constant = Rat(-1);
    std::vector<QuadraticPoly> comps{affine_component(rv({1}), RatVec(0)),
                                     affine_component(rv({-1}), RatVec(0)), std::move(third)};
    CpwlFunction theta({{rv({1, 0, 0}), Rat(0)}, {rv({0, 1, 0}), Rat(0)}, {rv({0, 0, 1}), Rat(0)}},
                       HalfspaceSystem(3));
    QuadraticProblemInstance inst{std::move(theta), 1, 0, curved(1, 0, {c}), std::move(comps),
                                  rv({0}), RatVec(0), rv({0}), Rat(1, 3)};
    out.push_back({"three-slopes-c" + rat_str(c), std::move(inst)});
  }
  // w-coupled curvature: phi0 gains a Bxw block; the box radius is kept well
  // inside the kink-dominated zone.
  for (Rat c : {Rat(3), Rat(-3)}) {
    QuadraticPoly phi0 = curved(1, 1, {c});
    phi0.bxw.at(0, 0) = Rat(1, 2);
    phi0.cww.at(0, 0) = Rat(1);
    QuadraticProblemInstance inst{theta_abs(), 1, 1, std::move(phi0),
                                  {affine_component(rv({1}), rv({1}))},
                                  rv({0}), rv({0}), rv({0}), Rat(1, 10)};
    out.push_back({"coupled-c" + rat_str(c), std::move(inst)});
  }
  // Shifted base point: theta = |.| at zbar = 1 (smooth stratum); the
  // stationary tilt there is c + 1.
  for (Rat c : {Rat(1), Rat(-1)}) {
    QuadraticProblemInstance inst{theta_abs(), 1, 0, curved(1, 0, {c}),
                                  {affine_component(rv({1}), RatVec(0))},
                                  rv({1}), RatVec(0), RatVec{c + 1}, Rat(1, 4)};
    out.push_back({"smooth-c" + rat_str(c), std::move(inst)});
  }
  // Scaled kink max{2z, -z} over Phi = x, stationary tilt 1/2.
  for (Rat c : {Rat(0), Rat(-1)}) {
    CpwlFunction theta({{rv({2}), Rat(0)}, {rv({-1}), Rat(0)}}, HalfspaceSystem(1));
    QuadraticProblemInstance inst{std::move(theta), 1, 0, curved(1, 0, {c}),
                                  {affine_component(rv({1}), RatVec(0))},
                                  rv({0}), RatVec(0), RatVec{Rat(1, 2)}, Rat(1, 2)};
    out.push_back({"skew-kink-c" + rat_str(c), std::move(inst)});
  }
  // Four tied support pieces (unit square): the subspace collapses, so the
  // verdict holds for either curvature sign.
  for (Rat c : {Rat(1), Rat(-1)}) {
    std::vector<QuadraticPoly> comps{affine_component(rv({1, 0}), RatVec(0)),
                                     affine_component(rv({0, 1}), RatVec(0))};
    QuadraticProblemInstance inst{
        CpwlFunction::from_support_vertices({rv({0, 0}), rv({1, 0}), rv({0, 1}), rv({1, 1})}),
        2, 0, curved(2, 0, {c, c}), std::move(comps),
        rv({0, 0}), RatVec(0), RatVec{Rat(1, 2), Rat(1, 2)}, Rat(1, 8)};
    out.push_back({"square-c" + rat_str(c), std::move(inst)});
  }
  // Indefinite Hessians whose restriction to the diagonal subspace decides.
  for (auto [c1, c2] : {std::pair<Rat, Rat>{Rat(2), Rat(-1)}, {Rat(-2), Rat(1)}}) {
    std::vector<QuadraticPoly> comps{affine_component(rv({1, 0}), RatVec(0)),
                                     affine_component(rv({0, 1}), RatVec(0))};
    QuadraticProblemInstance inst{theta_max2(), 2, 0, curved(2, 0, {c1, c2}), std::move(comps),
                                  rv({0, 0}), RatVec(0),
                                  RatVec{Rat(1, 2), Rat(1, 2)}, Rat(1, 8)};
    out.push_back({"mixed-diag-" + rat_str(c1) + "-" + rat_str(c2), std::move(inst)});
  }
  // Interior tilt at the kink of |.|: the relative-interior multiplier keeps
  // the collapse of the subspace.
  for (Rat c : {Rat(0), Rat(-1)}) {
    QuadraticProblemInstance inst{theta_abs(), 1, 0, curved(1, 0, {c}),
                                  {affine_component(rv({1}), RatVec(0))},
                                  rv({0}), RatVec(0), RatVec{Rat(1, 2)}, Rat(1, 4)};
    out.push_back({"interior-tilt-c" + rat_str(c), std::move(inst)});
  }
  return out;
}

// -- minimax instances (criterion 8) ----------------------------------------

struct MinimaxCase {
  std::string name;
  MinimaxProblemData data;
};

inline MinimaxCase worked_minimax() {
  MinimaxProblemData mp;
  mp.n = 1;
  mp.d = 0;
  mp.objectives = {{rv({1}), RatVec(0), RatMat(1, 1), RatMat(1, 0)},
                   {rv({-1}), RatVec(0), RatMat(1, 1), RatMat(1, 0)}};
  mp.constraints = {{rv({1}), RatVec(0), RatMat(1, 1), RatMat(1, 0)}};
  mp.constraint_set = HalfspaceSystem(1);
  mp.constraint_set.add_inequality(rv({1}), Rat(1));
  mp.z1 = rv({0, 0});
  mp.z2 = rv({0});
  mp.vbar = rv({0});
  return {"worked-max-abs", std::move(mp)};
}

inline std::vector<MinimaxCase> minimax_family() {
  std::vector<MinimaxCase> out;
  out.push_back(worked_minimax());
  {
    // Same with curvature folded into the branches (kink still dominates).
    MinimaxCase c = worked_minimax();
    c.name = "worked-max-abs-curved";
    for (SmoothTermData& t : c.data.objectives) t.hess_xx.at(0, 0) = Rat(-2);
    out.push_back(std::move(c));
  }
  {
    // Smooth concave single branch: not fully stable.
    MinimaxProblemData mp;
    mp.n = 1;
    mp.d = 0;
    mp.objectives = {{rv({0}), RatVec(0), RatMat(1, 1), RatMat(1, 0)}};
    mp.objectives[0].hess_xx.at(0, 0) = Rat(-1);
    mp.constraint_set = HalfspaceSystem(0);
    mp.z1 = rv({0});
    mp.z2 = RatVec(0);
    mp.vbar = rv({0});
    out.push_back({"smooth-concave", std::move(mp)});
  }
  SplitMix64 rng(555001);
  for (int k = 0; k < 20; ++k) {
    int n = 1 + static_cast<int>(rng.next_int(0, 1));
    int l = 1 + static_cast<int>(rng.next_int(0, 2));
    int r = static_cast<int>(rng.next_int(0, 2));
    int p = r == 0 ? 0 : static_cast<int>(rng.next_int(0, 2));
    MinimaxProblemData mp;
    mp.n = n;
    mp.d = 0;
    for (int i = 0; i < l; ++i) {
      SmoothTermData t{RatVec(n), RatVec(0), RatMat(n, n), RatMat(n, 0)};
      for (int j = 0; j < n; ++j) t.grad_x[j] = rng.next_rat(3);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b <= a; ++b) {
          Rat s = rng.next_rat(2);
          t.hess_xx.at(a, b) = s;
          t.hess_xx.at(b, a) = s;
        }
      mp.objectives.push_back(std::move(t));
    }
    for (int s = 0; s < r; ++s) {
      SmoothTermData t{RatVec(n), RatVec(0), RatMat(n, n), RatMat(n, 0)};
      for (int j = 0; j < n; ++j) t.grad_x[j] = rng.next_rat(3);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b <= a; ++b) {
          Rat sym = rng.next_rat(2);
          t.hess_xx.at(a, b) = sym;
          t.hess_xx.at(b, a) = sym;
        }
      mp.constraints.push_back(std::move(t));
    }
    // Branch values with forced ties among a prefix.
    int ties = 1 + static_cast<int>(rng.next_int(0, l - 1));
    mp.z1 = RatVec(l);
    Rat top(2);
    for (int i = 0; i < l; ++i)
      mp.z1[i] = i < ties ? top : top - Rat(rng.next_int(1, 3), rng.next_int(1, 2));
    // Feasible z2 with a mix of tight and slack rows.
    mp.z2 = RatVec(r);
    for (int s = 0; s < r; ++s) mp.z2[s] = rng.next_rat(2);
    mp.constraint_set = HalfspaceSystem(r);
    for (int t = 0; t < p; ++t) {
      RatVec c(r);
      bool zero = true;
      while (zero) {
        for (int s = 0; s < r; ++s) c[s] = rng.next_rat(2);
        zero = c.is_zero();
      }
      Rat slack = rng.next_int(0, 1) == 0 ? Rat(0) : Rat(rng.next_int(1, 3));
      mp.constraint_set.add_inequality(c, dot(c, mp.z2) + slack);
    }
    // Stationary tilt assembled from sampled multipliers.
    std::vector<int> kk, ii;
    for (int i = 0; i < ties; ++i) kk.push_back(i);
    for (int t = 0; t < p; ++t)
      if (dot(mp.constraint_set.inequalities[static_cast<std::size_t>(t)].normal, mp.z2) ==
          mp.constraint_set.inequalities[static_cast<std::size_t>(t)].rhs)
        ii.push_back(t);
    RatVec vbar = RatVec::zero(n);
    Rat total(0);
    std::vector<Rat> lam;
    for (std::size_t i = 0; i < kk.size(); ++i) {
      Rat c(rng.next_int(1, 3));
      lam.push_back(c);
      total += c;
    }
    for (std::size_t i = 0; i < kk.size(); ++i)
      vbar += (lam[i] / total) * mp.objectives[static_cast<std::size_t>(kk[i])].grad_x;
    for (int t : ii) {
      Rat eta(rng.next_int(0, 2));
      if (eta == 0) continue;
      const RatVec& c = mp.constraint_set.inequalities[static_cast<std::size_t>(t)].normal;
      for (int s = 0; s < r; ++s)
        if (c[s] != 0) vbar += (eta * c[s]) * mp.constraints[static_cast<std::size_t>(s)].grad_x;
    }
    mp.vbar = vbar;
    out.push_back({"seeded-" + std::to_string(k), std::move(mp)});
  }
  return out;
}

}  // namespace testsupport
