#pragma once
// Finite systems of linear equalities <n,x> = r and inequalities <n,x> <= r
// over one ambient dimension.

#include <vector>

#include "cpwl/linalg.hpp"

namespace cpwl {

struct LinearRow {
  RatVec normal;
  Rat rhs;
};

struct HalfspaceSystem {
  int dim = 0;
  std::vector<LinearRow> equalities;
  std::vector<LinearRow> inequalities;

  HalfspaceSystem() = default;
  explicit HalfspaceSystem(int d) : dim(d) {}

  void add_equality(RatVec n, Rat r) {
    detail::require(n.dim() == dim, "halfspace row dimension mismatch");
    equalities.push_back({std::move(n), std::move(r)});
  }
  void add_inequality(RatVec n, Rat r) {
    detail::require(n.dim() == dim, "halfspace row dimension mismatch");
    inequalities.push_back({std::move(n), std::move(r)});
  }

  bool contains(const RatVec& x) const {
    detail::require(x.dim() == dim, "point dimension mismatch");
    for (const LinearRow& e : equalities)
      if (dot(e.normal, x) != e.rhs) return false;
    for (const LinearRow& q : inequalities)
      if (dot(q.normal, x) > q.rhs) return false;
    return true;
  }

  bool is_homogeneous() const {
    for (const LinearRow& e : equalities)
      if (e.rhs != 0) return false;
    for (const LinearRow& q : inequalities)
      if (q.rhs != 0) return false;
    return true;
  }

  /// Concatenation of two systems over the same space.
  friend HalfspaceSystem merge(const HalfspaceSystem& a, const HalfspaceSystem& b) {
    detail::require(a.dim == b.dim, "cannot merge systems of different dimension");
    HalfspaceSystem out = a;
    out.equalities.insert(out.equalities.end(), b.equalities.begin(), b.equalities.end());
    out.inequalities.insert(out.inequalities.end(), b.inequalities.begin(), b.inequalities.end());
    return out;
  }
};

}  // namespace cpwl
