#pragma once
// Linear reduction of a CPWL function at a point: an s x m matrix B with
// ker B = S(zbar)^perp and a reduced CPWL function vartheta on R^s such that
//
//   theta(z) - <b, z> = vartheta(B z)   for all z with |z - zbar|_inf <= radius,
//
// where S(zbar) is the subspace parallel to aff(subdifferential at zbar),
// s = dim S(zbar), and b is the lowest-index active gradient. The change of
// variables A is an invertible congruence with orthogonal (not orthonormal)
// rational columns: the first s span S(zbar), the rest its complement; square
// roots never appear and the compensating scaling is folded into vartheta.

#include <vector>

#include "cpwl/prng.hpp"
#include "cpwl/second_order.hpp"

namespace cpwl {

struct ReductionResult {
  RatVec shift;       // b: subtracted gradient, an element of aff(subdiff)
  RatMat congruence;  // A, m x m, orthogonal columns
  RatMat projection;  // B, s x m, ker B = S^perp
  int reduced_dim = 0;
  CpwlFunction reduced;  // vartheta on R^s
  Rat radius = 0;        // validity radius in the sup norm
  RatVec base_point;     // zbar
  RatVec base_image;     // A^{-1} zbar
};

/// (basis of S(zbar), shift b). S is span{a_i - a_j : i,j in K} +
/// span{d_i : i in I}; b is the active gradient with the smallest index.
inline std::pair<std::vector<RatVec>, RatVec> affine_hull(const CpwlFunction& theta,
                                                          const RatVec& zbar) {
  ActiveSets act = theta.active_sets(zbar);
  std::vector<RatVec> gens;
  for (std::size_t x = 0; x < act.pieces.size(); ++x)
    for (std::size_t y = x + 1; y < act.pieces.size(); ++y)
      gens.push_back(theta.piece(act.pieces[x]).gradient - theta.piece(act.pieces[y]).gradient);
  for (int i : act.rows) gens.push_back(theta.row_normal(i));
  return {span_basis(gens, theta.dim()), theta.piece(act.pieces.front()).gradient};
}

namespace detail_red {

/// Gram-Schmidt over Q without normalization: pairwise orthogonal, same span.
inline std::vector<RatVec> orthogonalize(const std::vector<RatVec>& basis) {
  std::vector<RatVec> out;
  for (RatVec v : basis) {
    for (const RatVec& w : out) v -= (dot(v, w) / dot(w, w)) * w;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace detail_red

inline ReductionResult build_reduction(const CpwlFunction& theta, const RatVec& zbar) {
  const int m = theta.dim();
  auto [s_basis, shift] = affine_hull(theta, zbar);
  const int s = static_cast<int>(s_basis.size());

  std::vector<RatVec> cols = detail_red::orthogonalize(s_basis);
  std::vector<RatVec> comp = detail_red::orthogonalize(orthogonal_complement(s_basis, m));
  cols.insert(cols.end(), comp.begin(), comp.end());
  RatMat a_mat = RatMat::from_cols(cols, m);

  // A^{-1} = D^{-1} A^T with D = A^T A diagonal by orthogonality.
  RatMat a_inv(m, m);
  for (int i = 0; i < m; ++i) {
    Rat d = dot(cols[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(i)]);
    for (int j = 0; j < m; ++j) a_inv.at(i, j) = cols[static_cast<std::size_t>(i)][j] / d;
  }
  RatMat b_mat(s, m);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < m; ++j) b_mat.at(i, j) = a_inv.at(i, j);

  RatVec base_image = a_inv * zbar;
  RatVec tail_image = base_image.slice(s, m);

  // vartheta(x) = theta_shifted(A (x, tail_image)) written out as explicit
  // pieces and domain rows over R^s.
  std::vector<AffinePiece> pieces;
  RatMat a_t = a_mat.transpose();
  for (const AffinePiece& p : theta.pieces()) {
    RatVec pulled = a_t * (p.gradient - shift);
    pieces.push_back({pulled.slice(0, s), p.offset - dot(pulled.slice(s, m), tail_image)});
  }
  HalfspaceSystem dom(s);
  for (int t = 0; t < theta.row_count(); ++t) {
    RatVec pulled = a_t * theta.row_normal(t);
    dom.add_inequality(pulled.slice(0, s), theta.row_rhs(t) - dot(pulled.slice(s, m), tail_image));
  }

  ReductionResult red{shift,
                      a_mat,
                      b_mat,
                      s,
                      CpwlFunction(std::move(pieces), std::move(dom)),
                      Rat(0),
                      zbar,
                      base_image};

  // Inside the active-set radius only K(zbar)/I(zbar) matter; shrink further
  // so that the projection through A stays inside that ball.
  RatMat proj(m, m);  // A [B; 0] = orthogonal projector onto S(zbar)
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Rat sum = 0;
      for (int k = 0; k < s; ++k) sum += a_mat.at(i, k) * b_mat.at(k, j);
      proj.at(i, j) = sum;
    }
  Rat gain = proj.max_row_l1();
  red.radius = theta.active_set_radius(zbar) / (gain > 1 ? gain : Rat(1));
  return red;
}

/// Exact check of theta(z) - <b,z> = vartheta(Bz) over a deterministic grid of
/// `samples` points inside the validity radius: the base point, axis
/// perturbations, then seeded random directions. Points may leave the domain;
/// then both sides must be infinite together.
inline bool verify_reduction(const CpwlFunction& theta, const ReductionResult& red, int samples,
                             std::uint64_t seed = 0) {
  const int m = theta.dim();
  std::vector<RatVec> grid;
  grid.push_back(red.base_point);
  for (int i = 0; i < m && static_cast<int>(grid.size()) < samples; ++i)
    for (int sgn : {1, -1}) {
      RatVec z = red.base_point;
      z[i] += Rat(sgn) * red.radius;
      grid.push_back(std::move(z));
    }
  SplitMix64 rng(seed);
  while (static_cast<int>(grid.size()) < samples) {
    RatVec dir(m);
    for (int i = 0; i < m; ++i) dir[i] = rng.next_rat(4);
    Rat norm = dir.linf_norm();
    if (norm == 0) continue;
    Rat scale = Rat(rng.next_int(1, 8), 8) / norm;
    grid.push_back(red.base_point + (scale * red.radius) * dir);
  }
  if (static_cast<int>(grid.size()) > samples) grid.resize(static_cast<std::size_t>(samples));

  for (const RatVec& z : grid) {
    std::optional<Rat> lhs = theta.evaluate(z);
    std::optional<Rat> rhs = red.reduced.evaluate(red.projection * z);
    if (lhs.has_value() != rhs.has_value()) return false;
    if (lhs && *lhs - dot(red.shift, z) != *rhs) return false;
  }
  return true;
}

}  // namespace cpwl
