#pragma once
// Polyhedral primitives shared by the analysis modules:
//
//  * GeneratorSet          conv(points) + cone(rays) + span(lines)
//  * feasible_point        relative-interior queries via slack maximization
//  * generator_membership  exact multipliers via LP feasibility
//  * dd_cone               double description for homogeneous cones
//                          (lineality basis + extreme rays, exact)
//  * V <-> H conversions through polarity
//  * union_covers          exact inclusion of a region in a finite union of
//                          polyhedra by recursive complement splitting
//
// Cones carry their lineality explicitly; rays are kept primitive and the
// final ray lists are extremality-filtered and sorted, so equal cones have
// equal representations.

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "cpwl/halfspace.hpp"
#include "cpwl/simplex.hpp"

namespace cpwl {

inline bool lex_less(const RatVec& a, const RatVec& b) {
  for (int i = 0; i < std::min(a.dim(), b.dim()); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return a.dim() < b.dim();
}

/// conv(points) + cone(rays) + span(lines); empty `points` means the conv part
/// is omitted (the set is then a cone through the origin).
struct GeneratorSet {
  int dim = 0;
  std::vector<RatVec> points;
  std::vector<RatVec> rays;
  std::vector<RatVec> lines;

  GeneratorSet() = default;
  explicit GeneratorSet(int d) : dim(d) {}

  static GeneratorSet subspace(std::vector<RatVec> basis, int d) {
    GeneratorSet g(d);
    g.lines = std::move(basis);
    return g;
  }
  static GeneratorSet single_point(RatVec p) {
    GeneratorSet g(p.dim());
    g.points.push_back(std::move(p));
    return g;
  }

  bool conv_omitted() const { return points.empty(); }
};

struct Multipliers {
  std::vector<Rat> point_coeffs;  // lambda >= 0, sum 1 (absent when no points)
  std::vector<Rat> ray_coeffs;    // mu >= 0
  std::vector<Rat> line_coeffs;   // nu free
};

/// A point of the system satisfying the listed inequalities strictly, found by
/// maximizing one shared slack (truncated at 1); absent when no such point
/// exists. With `strict` empty this is a plain feasibility query.
inline std::optional<RatVec> feasible_point(const HalfspaceSystem& sys,
                                            const std::vector<int>& strict = {}) {
  const int n = sys.dim;
  std::vector<bool> is_strict(sys.inequalities.size(), false);
  for (int idx : strict) {
    detail::require(idx >= 0 && idx < static_cast<int>(sys.inequalities.size()),
                    "strict index out of range");
    is_strict[static_cast<std::size_t>(idx)] = true;
  }
  lp::GeneralProblem gp;
  gp.nvars = n + 1;  // x, then the slack t
  for (const LinearRow& e : sys.equalities) gp.eq.push_back({concat(e.normal, RatVec(1)), e.rhs});
  for (std::size_t k = 0; k < sys.inequalities.size(); ++k) {
    RatVec ext = concat(sys.inequalities[k].normal, RatVec(1));
    if (is_strict[k]) ext[n] = 1;
    gp.le.push_back({std::move(ext), sys.inequalities[k].rhs});
  }
  {
    RatVec tcap(n + 1);
    tcap[n] = 1;
    gp.le.push_back({std::move(tcap), Rat(1)});
    RatVec tpos(n + 1);
    tpos[n] = -1;
    gp.le.push_back({std::move(tpos), Rat(0)});
  }
  gp.objective = RatVec(n + 1);
  gp.objective[n] = 1;
  gp.maximize = true;
  lp::GeneralResult res = lp::solve_general(gp);
  if (res.status != lp::Status::optimal) return std::nullopt;
  if (!strict.empty() && res.value <= 0) return std::nullopt;
  return res.x.slice(0, n);
}

/// Decides v in conv(points)+cone(rays)+span(lines) and returns exact
/// multipliers on success. The convex-combination constraint is omitted when
/// `points` is empty.
inline std::optional<Multipliers> generator_membership(const RatVec& v,
                                                       const std::vector<RatVec>& points,
                                                       const std::vector<RatVec>& rays,
                                                       const std::vector<RatVec>& lines) {
  const int d = v.dim();
  const int np = static_cast<int>(points.size());
  const int nr = static_cast<int>(rays.size());
  const int nl = static_cast<int>(lines.size());
  lp::GeneralProblem gp;
  gp.nvars = np + nr + nl;
  for (int row = 0; row < d; ++row) {
    RatVec coeff(gp.nvars);
    for (int j = 0; j < np; ++j) {
      detail::require(points[j].dim() == d, "generator dimension mismatch");
      coeff[j] = points[j][row];
    }
    for (int j = 0; j < nr; ++j) {
      detail::require(rays[j].dim() == d, "generator dimension mismatch");
      coeff[np + j] = rays[j][row];
    }
    for (int j = 0; j < nl; ++j) {
      detail::require(lines[j].dim() == d, "generator dimension mismatch");
      coeff[np + nr + j] = lines[j][row];
    }
    gp.eq.push_back({std::move(coeff), v[row]});
  }
  if (np > 0) {
    RatVec ones(gp.nvars);
    for (int j = 0; j < np; ++j) ones[j] = 1;
    gp.eq.push_back({std::move(ones), Rat(1)});
  }
  for (int j = 0; j < np + nr; ++j) {
    RatVec neg(gp.nvars);
    neg[j] = -1;
    gp.le.push_back({std::move(neg), Rat(0)});
  }
  lp::GeneralResult res = lp::solve_general(gp);
  if (res.status != lp::Status::optimal) return std::nullopt;
  Multipliers m;
  for (int j = 0; j < np; ++j) m.point_coeffs.push_back(res.x[j]);
  for (int j = 0; j < nr; ++j) m.ray_coeffs.push_back(res.x[np + j]);
  for (int j = 0; j < nl; ++j) m.line_coeffs.push_back(res.x[np + nr + j]);
  return m;
}

inline std::optional<Multipliers> generator_membership(const RatVec& v, const GeneratorSet& g) {
  return generator_membership(v, g.points, g.rays, g.lines);
}

/// Membership in the recession part cone(rays)+span(lines) of a generator set.
inline bool recession_contains(const GeneratorSet& g, const RatVec& v) {
  return generator_membership(v, {}, g.rays, g.lines).has_value();
}

/// Containment of finitely generated convex sets: every point generator of `a`
/// must lie in `b` and every ray/line of `a` in the recession part of `b`.
inline bool generator_set_subset(const GeneratorSet& a, const GeneratorSet& b) {
  if (a.conv_omitted() && !generator_membership(RatVec::zero(a.dim), b).has_value()) return false;
  for (const RatVec& p : a.points)
    if (!generator_membership(p, b).has_value()) return false;
  for (const RatVec& r : a.rays)
    if (!recession_contains(b, r)) return false;
  for (const RatVec& l : a.lines)
    if (!recession_contains(b, l) || !recession_contains(b, -l)) return false;
  return true;
}

inline bool generator_set_equal(const GeneratorSet& a, const GeneratorSet& b) {
  return generator_set_subset(a, b) && generator_set_subset(b, a);
}

// ---------------------------------------------------------------------------
// Double description.

struct ConeGenerators {
  std::vector<RatVec> lines;  // lineality basis
  std::vector<RatVec> rays;   // extreme rays, primitive, lex-sorted
};

namespace detail_dd {

struct Row {
  RatVec normal;
  bool equality;
};

inline int tight_rank(const std::vector<Row>& processed, const RatVec& r1, const RatVec& r2,
                      bool pair, int dim) {
  std::vector<RatVec> tight;
  for (const Row& row : processed) {
    if (dot(row.normal, r1) != 0) continue;
    if (pair && dot(row.normal, r2) != 0) continue;
    tight.push_back(row.normal);
  }
  if (tight.empty()) return 0;
  return rank(RatMat::from_rows(tight, dim));
}

}  // namespace detail_dd

/// Minimal generator description (lineality basis + extreme rays) of the
/// homogeneous cone {u : Eu = 0, Au <= 0}. Equalities are processed first;
/// while lineality remains, a constraint that sees it pivots one lineality
/// generator out instead of combining rays.
inline ConeGenerators dd_cone(const HalfspaceSystem& sys) {
  detail::require(sys.is_homogeneous(), "dd_cone expects a homogeneous system");
  const int d = sys.dim;
  std::vector<detail_dd::Row> todo;
  for (const LinearRow& e : sys.equalities)
    if (!e.normal.is_zero()) todo.push_back({e.normal, true});
  for (const LinearRow& q : sys.inequalities)
    if (!q.normal.is_zero()) todo.push_back({q.normal, false});

  std::vector<RatVec> lines;
  for (int i = 0; i < d; ++i) lines.push_back(RatVec::unit(d, i));
  std::vector<RatVec> rays;
  std::vector<detail_dd::Row> processed;

  for (const detail_dd::Row& row : todo) {
    const RatVec& a = row.normal;
    int pivot = -1;
    for (std::size_t i = 0; i < lines.size(); ++i)
      if (dot(a, lines[i]) != 0) {
        pivot = static_cast<int>(i);
        break;
      }
    if (pivot >= 0) {
      RatVec l0 = lines[static_cast<std::size_t>(pivot)];
      Rat al0 = dot(a, l0);
      lines.erase(lines.begin() + pivot);
      for (RatVec& l : lines)
        if (dot(a, l) != 0) l -= (dot(a, l) / al0) * l0;
      for (RatVec& r : rays)
        if (dot(a, r) != 0) r = primitive_ray(r - (dot(a, r) / al0) * l0);
      if (!row.equality) rays.push_back(primitive_ray(al0 > 0 ? -l0 : l0));
      processed.push_back(row);
      continue;
    }
    std::vector<RatVec> zero, neg, pos;
    for (const RatVec& r : rays) {
      Rat s = dot(a, r);
      (s == 0 ? zero : (s < 0 ? neg : pos)).push_back(r);
    }
    std::vector<RatVec> next = zero;
    if (!row.equality) next.insert(next.end(), neg.begin(), neg.end());
    const int lin = static_cast<int>(lines.size());
    for (const RatVec& rp : pos)
      for (const RatVec& rn : neg) {
        if (detail_dd::tight_rank(processed, rp, rn, true, d) != d - lin - 2) continue;
        RatVec combo = primitive_ray(dot(a, rp) * rn - dot(a, rn) * rp);
        bool dup = false;
        for (const RatVec& ex : next)
          if (ex == combo) {
            dup = true;
            break;
          }
        if (!dup) next.push_back(combo);
      }
    rays = std::move(next);
    processed.push_back(row);
  }

  // Extremality filter and canonical order.
  ConeGenerators out;
  out.lines = span_basis(lines, d);
  const int lin = static_cast<int>(out.lines.size());
  for (const RatVec& r : rays) {
    if (r.is_zero()) continue;
    if (detail_dd::tight_rank(processed, r, r, false, d) != d - lin - 1) continue;
    bool dup = false;
    for (const RatVec& ex : out.rays)
      if (ex == r) dup = true;
    if (!dup) out.rays.push_back(r);
  }
  std::sort(out.rays.begin(), out.rays.end(), lex_less);
  return out;
}

/// H-description of the cone span(lines)+cone(rays) via the polar cone.
inline HalfspaceSystem cone_to_halfspaces(const std::vector<RatVec>& rays,
                                          const std::vector<RatVec>& lines, int dim) {
  HalfspaceSystem polar(dim);
  for (const RatVec& l : lines) polar.add_equality(l, 0);
  for (const RatVec& r : rays) polar.add_inequality(r, 0);
  ConeGenerators g = dd_cone(polar);
  HalfspaceSystem out(dim);
  for (const RatVec& l : g.lines) out.add_equality(l, 0);
  for (const RatVec& r : g.rays) out.add_inequality(r, 0);
  return out;
}

/// H-description of conv(points)+cone(rays)+span(lines). Cones go through one
/// polar step; sets with points are homogenized first.
inline HalfspaceSystem generators_to_halfspaces(const GeneratorSet& g) {
  if (g.conv_omitted()) return cone_to_halfspaces(g.rays, g.lines, g.dim);
  HalfspaceSystem polar(g.dim + 1);
  for (const RatVec& p : g.points) {
    RatVec h = concat(p, RatVec(1));
    h[g.dim] = 1;
    polar.add_inequality(std::move(h), 0);
  }
  for (const RatVec& r : g.rays) polar.add_inequality(concat(r, RatVec(1)), 0);
  for (const RatVec& l : g.lines) polar.add_equality(concat(l, RatVec(1)), 0);
  ConeGenerators hom = dd_cone(polar);
  HalfspaceSystem out(g.dim);
  for (const RatVec& l : hom.lines) out.add_equality(l.slice(0, g.dim), -l[g.dim]);
  for (const RatVec& r : hom.rays) out.add_inequality(r.slice(0, g.dim), -r[g.dim]);
  return out;
}

// ---------------------------------------------------------------------------
// Regions and exact union coverage.

/// A polyhedron with some inequality rows required to hold strictly.
struct Region {
  HalfspaceSystem sys;
  std::vector<int> strict;

  explicit Region(const HalfspaceSystem& s) : sys(s) {}
  explicit Region(int dim) : sys(dim) {}

  bool feasible() const { return feasible_point(sys, strict).has_value(); }

  /// Region cut down to the strict complement of one halfspace <n,x> <= r,
  /// i.e. intersected with <n,x> > r.
  Region with_strict_violation(const RatVec& normal, const Rat& rhs) const {
    Region out = *this;
    out.strict.push_back(static_cast<int>(out.sys.inequalities.size()));
    out.sys.add_inequality(-normal, -rhs);
    return out;
  }
};

/// sup of <c,x> over the closure of a region is <= bound? (LP check)
inline bool sup_at_most(const HalfspaceSystem& sys, const RatVec& c, const Rat& bound) {
  lp::GeneralProblem gp;
  gp.nvars = sys.dim;
  for (const LinearRow& e : sys.equalities) gp.eq.push_back(e);
  for (const LinearRow& q : sys.inequalities) gp.le.push_back(q);
  gp.objective = c;
  gp.maximize = true;
  lp::GeneralResult res = lp::solve_general(gp);
  if (res.status == lp::Status::infeasible) return true;
  if (res.status == lp::Status::unbounded) return false;
  return res.value <= bound;
}

/// Closure containment target ⊆ piece, decided by row-wise LPs.
inline bool closure_subset(const HalfspaceSystem& target, const HalfspaceSystem& piece) {
  for (const LinearRow& e : piece.equalities) {
    if (!sup_at_most(target, e.normal, e.rhs)) return false;
    if (!sup_at_most(target, -e.normal, -e.rhs)) return false;
  }
  for (const LinearRow& q : piece.inequalities)
    if (!sup_at_most(target, q.normal, q.rhs)) return false;
  return true;
}

/// Exact test: region ⊆ union of the H-polyhedra in `cover`. Splits the region
/// along the first piece's rows and recurses on the parts missed by it.
inline bool union_covers(const std::vector<HalfspaceSystem>& cover, const Region& region,
                         std::size_t from = 0) {
  if (!region.feasible()) return true;
  if (from >= cover.size()) return false;
  for (std::size_t k = from; k < cover.size(); ++k)
    if (closure_subset(region.sys, cover[k])) return true;
  const HalfspaceSystem& piece = cover[from];
  for (const LinearRow& e : piece.equalities) {
    if (!union_covers(cover, region.with_strict_violation(e.normal, e.rhs), from + 1))
      return false;
    if (!union_covers(cover, region.with_strict_violation(-e.normal, -e.rhs), from + 1))
      return false;
  }
  for (const LinearRow& q : piece.inequalities)
    if (!union_covers(cover, region.with_strict_violation(q.normal, q.rhs), from + 1))
      return false;
  return true;
}

/// Exact set equality of two finite unions of polyhedra given in H-form.
inline bool unions_equal(const std::vector<HalfspaceSystem>& a,
                         const std::vector<HalfspaceSystem>& b) {
  for (const HalfspaceSystem& part : a)
    if (!union_covers(b, Region(part))) return false;
  for (const HalfspaceSystem& part : b)
    if (!union_covers(a, Region(part))) return false;
  return true;
}

}  // namespace cpwl
