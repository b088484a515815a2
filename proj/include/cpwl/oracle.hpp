#pragma once
// Brute-force validators, independent of the formula-based path.
//
// The graph of the subdifferential of a CPWL function is covered by finitely
// many closed convex pieces, one per nonempty stratum (exact active-set
// pattern): closure(stratum) x (conv of active gradients + cone of tight row
// normals). The limiting normal cone at a graph point is computed from first
// principles: translate to tangent cones of the pieces containing the point,
// enumerate the sign cells of the hyperplane arrangement spanned by their
// rows, and on each nonempty cell intersect the normal cones of the pieces
// containing it; the limiting cone is the union of those regular cones over
// all cells. Slicing it gives the second-order subdifferential to compare
// against the formula route.
//
// The quadratic probe minimizes the composite objective exactly over a sup
// norm box on a parameter grid, by enumerating active-set patterns and the
// stationary points of every face of every pattern region. It requires the
// inner components to be affine in x (phi0 is fully quadratic), so the
// regions are polyhedral and each face problem is an equality-constrained QP
// solvable in exact arithmetic.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpwl/second_order.hpp"
#include "cpwl/stability.hpp"

namespace cpwl {

struct GraphPiece {
  std::vector<int> stratum_pieces;  // Q1
  std::vector<int> stratum_rows;    // Q2
  HalfspaceSystem z_closure;        // closure of the stratum in R^m
  GeneratorSet v_set;               // subdifferential over the stratum
  HalfspaceSystem joint;            // H-form of z_closure x v_set in R^{2m}
};

/// One piece per nonempty stratum; their union covers gph(subdifferential).
inline std::vector<GraphPiece> graph_pieces(const CpwlFunction& theta, int max_active = 12) {
  const int m = theta.dim();
  const int l = theta.piece_count();
  const int p = theta.row_count();
  if (l + p > max_active) throw PreconditionError("size cap exceeded for stratum enumeration");

  std::vector<GraphPiece> out;
  for (std::uint32_t q1 = 1; q1 < (1u << l); ++q1) {
    std::vector<int> pieces_set;
    for (int i = 0; i < l; ++i)
      if (q1 & (1u << i)) pieces_set.push_back(i);
    for (std::uint32_t q2 = 0; q2 < (1u << p); ++q2) {
      std::vector<int> rows_set;
      for (int t = 0; t < p; ++t)
        if (q2 & (1u << t)) rows_set.push_back(t);
      auto [sys, strict] = stratum_system(theta, pieces_set, rows_set);
      if (!feasible_point(sys, strict).has_value()) continue;

      GraphPiece piece;
      piece.stratum_pieces = pieces_set;
      piece.stratum_rows = rows_set;
      piece.z_closure = sys;
      piece.v_set = GeneratorSet(m);
      for (int i : pieces_set) piece.v_set.points.push_back(theta.piece(i).gradient);
      for (int t : rows_set) piece.v_set.rays.push_back(theta.row_normal(t));

      piece.joint = HalfspaceSystem(2 * m);
      for (const LinearRow& e : sys.equalities)
        piece.joint.add_equality(concat(e.normal, RatVec::zero(m)), e.rhs);
      for (const LinearRow& q : sys.inequalities)
        piece.joint.add_inequality(concat(q.normal, RatVec::zero(m)), q.rhs);
      HalfspaceSystem v_h = generators_to_halfspaces(piece.v_set);
      for (const LinearRow& e : v_h.equalities)
        piece.joint.add_equality(concat(RatVec::zero(m), e.normal), e.rhs);
      for (const LinearRow& q : v_h.inequalities)
        piece.joint.add_inequality(concat(RatVec::zero(m), q.normal), q.rhs);
      out.push_back(std::move(piece));
    }
  }
  return out;
}

/// One regular normal cone of the graph, in both representations.
struct OracleCone {
  GeneratorSet generators;  // lines + rays in R^{2m}
  HalfspaceSystem halfspaces;
};

namespace detail_oracle {

struct TangentRow {
  int hyperplane = 0;  // index into the deduplicated pool
  int orientation = 1; // row normal = orientation * pool[hyperplane]
  bool equality = false;
};

struct PieceTangent {
  std::vector<TangentRow> rows;
};

inline std::string cone_key(const ConeGenerators& g) {
  std::string key;
  for (const RatVec& l : g.lines) key += "L" + l.str();
  for (const RatVec& r : g.rays) key += "R" + r.str();
  return key;
}

}  // namespace detail_oracle

/// Limiting normal cone to gph(subdifferential) at (zbar, vbar): the union of
/// finitely many polyhedral cones in R^{2m}, minimal under containment.
inline std::vector<OracleCone> limiting_normal_cone(const CpwlFunction& theta, const RatVec& zbar,
                                                    const RatVec& vbar,
                                                    const std::vector<GraphPiece>& pieces) {
  using detail_oracle::PieceTangent;
  using detail_oracle::TangentRow;
  const int dim = 2 * theta.dim();
  if (!theta.is_subgradient(zbar, vbar))
    throw PreconditionError("(zbar, vbar) is not on the graph");
  RatVec base = concat(zbar, vbar);

  // Tangent cones of the pieces containing the base point, over one shared
  // pool of primitive hyperplane normals.
  std::vector<RatVec> pool;
  // primitive() is sign-canonical, so a normal and its negation share one pool
  // entry; the orientation is the sign of the first nonzero coordinate.
  auto pool_index = [&](const RatVec& normal) -> std::pair<int, int> {
    RatVec prim = primitive(normal);
    int orient = 0;
    for (int i = 0; i < normal.dim() && orient == 0; ++i)
      if (normal[i] != 0) orient = normal[i] > 0 ? 1 : -1;
    for (std::size_t k = 0; k < pool.size(); ++k)
      if (pool[k] == prim) return {static_cast<int>(k), orient};
    pool.push_back(prim);
    return {static_cast<int>(pool.size()) - 1, orient};
  };

  std::vector<PieceTangent> tangents;
  for (const GraphPiece& piece : pieces) {
    if (!piece.joint.contains(base)) continue;
    PieceTangent t;
    for (const LinearRow& e : piece.joint.equalities) {
      if (e.normal.is_zero()) continue;
      auto [idx, orient] = pool_index(e.normal);
      t.rows.push_back({idx, orient, true});
    }
    for (const LinearRow& q : piece.joint.inequalities) {
      if (dot(q.normal, base) != q.rhs) continue;  // slack rows vanish locally
      if (q.normal.is_zero()) continue;
      auto [idx, orient] = pool_index(q.normal);
      t.rows.push_back({idx, orient, false});
    }
    tangents.push_back(std::move(t));
  }
  if (tangents.empty()) throw InternalCheckError("graph pieces fail to cover a graph point");

  // Cached polar conversion of piece normal cones, keyed by the tight mask.
  std::vector<std::map<std::uint64_t, HalfspaceSystem>> polar_cache(tangents.size());

  // DFS over sign cells. signs[k] in {-1, 0, +1, unset=2}.
  std::vector<int> signs(pool.size(), 2);
  std::map<std::string, OracleCone> found;

  auto cell_feasible = [&](int depth) {
    HalfspaceSystem sys(dim);
    std::vector<int> strict;
    for (int k = 0; k < depth; ++k) {
      if (signs[static_cast<std::size_t>(k)] == 0) {
        sys.add_equality(pool[static_cast<std::size_t>(k)], 0);
      } else {
        strict.push_back(static_cast<int>(sys.inequalities.size()));
        RatVec n = pool[static_cast<std::size_t>(k)];
        sys.add_inequality(signs[static_cast<std::size_t>(k)] < 0 ? n : -n, 0);
      }
    }
    return feasible_point(sys, strict).has_value();
  };

  auto piece_alive = [&](const PieceTangent& t, int depth) {
    for (const TangentRow& row : t.rows) {
      if (row.hyperplane >= depth) continue;
      int s = signs[static_cast<std::size_t>(row.hyperplane)] * row.orientation;
      if (row.equality ? s != 0 : s > 0) return false;
    }
    return true;
  };

  auto emit_cell = [&]() {
    HalfspaceSystem intersection(dim);
    bool any = false;
    for (std::size_t pi = 0; pi < tangents.size(); ++pi) {
      const PieceTangent& t = tangents[pi];
      if (!piece_alive(t, static_cast<int>(pool.size()))) continue;
      any = true;
      std::uint64_t mask = 0;
      for (std::size_t rk = 0; rk < t.rows.size(); ++rk)
        if (t.rows[rk].equality || signs[static_cast<std::size_t>(t.rows[rk].hyperplane)] == 0)
          mask |= (1ull << rk);
      auto it = polar_cache[pi].find(mask);
      if (it == polar_cache[pi].end()) {
        // Normal cone of this piece on the cell: span of equality normals +
        // cone of tight inequality normals (piece orientation).
        std::vector<RatVec> lines, rays;
        for (std::size_t rk = 0; rk < t.rows.size(); ++rk) {
          if (!(mask & (1ull << rk))) continue;
          RatVec n = Rat(t.rows[rk].orientation) * pool[static_cast<std::size_t>(t.rows[rk].hyperplane)];
          (t.rows[rk].equality ? lines : rays).push_back(std::move(n));
        }
        it = polar_cache[pi].emplace(mask, cone_to_halfspaces(rays, lines, dim)).first;
      }
      intersection = merge(intersection, it->second);
    }
    if (!any) return;
    ConeGenerators gens = dd_cone(intersection);
    std::string key = detail_oracle::cone_key(gens);
    if (found.count(key)) return;
    OracleCone cone;
    cone.generators = GeneratorSet(dim);
    cone.generators.lines = gens.lines;
    cone.generators.rays = gens.rays;
    cone.halfspaces = cone_to_halfspaces(gens.rays, gens.lines, dim);
    found.emplace(std::move(key), std::move(cone));
  };

  auto dfs = [&](auto&& self, std::size_t depth) -> void {
    bool alive = false;
    for (const PieceTangent& t : tangents)
      if (piece_alive(t, static_cast<int>(depth))) {
        alive = true;
        break;
      }
    if (!alive) return;
    if (!cell_feasible(static_cast<int>(depth))) return;
    if (depth == pool.size()) {
      emit_cell();
      return;
    }
    for (int s : {0, -1, 1}) {
      signs[depth] = s;
      self(self, depth + 1);
    }
    signs[depth] = 2;
  };
  dfs(dfs, 0);

  // Containment minimization: the union is unchanged.
  std::vector<OracleCone> cones;
  for (auto& [key, cone] : found) cones.push_back(std::move(cone));
  std::vector<bool> drop(cones.size(), false);
  for (std::size_t i = 0; i < cones.size(); ++i)
    for (std::size_t j = 0; j < cones.size() && !drop[i]; ++j) {
      if (i == j || drop[j]) continue;
      if (generator_set_subset(cones[i].generators, cones[j].generators)) drop[i] = true;
    }
  std::vector<OracleCone> out;
  for (std::size_t i = 0; i < cones.size(); ++i)
    if (!drop[i]) out.push_back(std::move(cones[i]));
  return out;
}

inline std::vector<OracleCone> limiting_normal_cone(const CpwlFunction& theta, const RatVec& zbar,
                                                    const RatVec& vbar, int max_active = 12) {
  return limiting_normal_cone(theta, zbar, vbar, graph_pieces(theta, max_active));
}

/// Oracle value of the second-order subdifferential at u: the slices
/// { w : (w, -u) in N } of the limiting-cone pieces, nonempty ones only.
inline std::vector<HalfspaceSystem> second_subdiff(const CpwlFunction& theta, const RatVec& zbar,
                                                   const RatVec& vbar, const RatVec& u,
                                                   const std::vector<OracleCone>& cones) {
  const int m = theta.dim();
  detail::require(u.dim() == m, "direction dimension mismatch");
  std::vector<HalfspaceSystem> out;
  for (const OracleCone& cone : cones) {
    HalfspaceSystem slice(m);
    for (const LinearRow& e : cone.halfspaces.equalities)
      slice.add_equality(e.normal.slice(0, m), dot(e.normal.slice(m, 2 * m), u));
    for (const LinearRow& q : cone.halfspaces.inequalities)
      slice.add_inequality(q.normal.slice(0, m), dot(q.normal.slice(m, 2 * m), u));
    if (feasible_point(slice).has_value()) out.push_back(std::move(slice));
  }
  return out;
}

inline std::vector<HalfspaceSystem> second_subdiff(const CpwlFunction& theta, const RatVec& zbar,
                                                   const RatVec& vbar, const RatVec& u,
                                                   int max_active = 12) {
  return second_subdiff(theta, zbar, vbar, u, limiting_normal_cone(theta, zbar, vbar, max_active));
}

// ---------------------------------------------------------------------------
// Quadratic full-stability probe.

/// q(x, w) = constant + <gx, x> + <gw, w> + x'Axx x / 2 + x'Bxw w + w'Cww w / 2.
struct QuadraticPoly {
  Rat constant = 0;
  RatVec gx, gw;
  RatMat axx, bxw, cww;

  void symmetrize() {
    for (int i = 0; i < axx.rows(); ++i)
      for (int j = 0; j < i; ++j) {
        Rat s = (axx.at(i, j) + axx.at(j, i)) / 2;
        axx.at(i, j) = s;
        axx.at(j, i) = s;
      }
    for (int i = 0; i < cww.rows(); ++i)
      for (int j = 0; j < i; ++j) {
        Rat s = (cww.at(i, j) + cww.at(j, i)) / 2;
        cww.at(i, j) = s;
        cww.at(j, i) = s;
      }
  }

  Rat value(const RatVec& x, const RatVec& w) const {
    Rat v = constant + dot(gx, x) + dot(gw, w);
    v += dot(x, axx * x) / 2;
    v += dot(x, bxw * w);
    v += dot(w, cww * w) / 2;
    return v;
  }
  RatVec grad_x(const RatVec& x, const RatVec& w) const { return gx + axx * x + bxw * w; }
  RatVec grad_w(const RatVec& x, const RatVec& w) const {
    return gw + bxw.transpose() * x + cww * w;
  }
};

struct QuadraticProblemInstance {
  CpwlFunction theta;
  int n = 0;
  int d = 0;
  QuadraticPoly objective;                // phi0
  std::vector<QuadraticPoly> components;  // phi_1 .. phi_m
  RatVec xbar, wbar, vbar;
  Rat gamma = 0;  // box radius; 0 means: derive from the data

  void validate() const {
    const int m = theta.dim();
    detail::require(static_cast<int>(components.size()) == m, "need one component per dimension");
    detail::require(xbar.dim() == n && wbar.dim() == d && vbar.dim() == n,
                    "probe base point dimension mismatch");
    if (n > 3 || m > 4) throw PreconditionError("probe caps exceeded (n <= 3, m <= 4)");
    for (const QuadraticPoly& c : components) {
      bool zero = true;
      for (int i = 0; i < c.axx.rows() && zero; ++i)
        for (int j = 0; j < c.axx.cols(); ++j)
          if (c.axx.at(i, j) != 0) {
            zero = false;
            break;
          }
      if (!zero)
        throw PreconditionError(
            "probe requires inner components affine in x (quadratic terms only in phi0)");
    }
  }

  RatVec phi(const RatVec& x, const RatVec& w) const {
    RatVec z(theta.dim());
    for (int i = 0; i < theta.dim(); ++i)
      z[i] = components[static_cast<std::size_t>(i)].value(x, w);
    return z;
  }
};

/// Exact point data of the probe instance at its base pair, for running the
/// certifier on the same problem.
inline CompositeProblemData to_composite(const QuadraticProblemInstance& inst) {
  inst.validate();
  const int m = inst.theta.dim();
  CompositeProblemData cp{inst.theta,
                          inst.n,
                          inst.d,
                          inst.objective.grad_x(inst.xbar, inst.wbar),
                          inst.objective.grad_w(inst.xbar, inst.wbar),
                          RatMat(m, inst.n),
                          RatMat(m, inst.d),
                          inst.objective.axx,
                          inst.objective.bxw,
                          {},
                          {},
                          inst.phi(inst.xbar, inst.wbar),
                          inst.vbar};
  for (int i = 0; i < m; ++i) {
    const QuadraticPoly& c = inst.components[static_cast<std::size_t>(i)];
    RatVec gx = c.grad_x(inst.xbar, inst.wbar);
    RatVec gw = c.grad_w(inst.xbar, inst.wbar);
    for (int j = 0; j < inst.n; ++j) cp.jac_x.at(i, j) = gx[j];
    for (int j = 0; j < inst.d; ++j) cp.jac_w.at(i, j) = gw[j];
    cp.hess_xx.push_back(c.axx);  // zero by the probe restriction
    cp.hess_xw.push_back(c.bxw);
  }
  return cp;
}

struct ProbeGridPoint {
  RatVec w, v;
  bool empty = false;   // argmin set empty (objective identically +inf on the box)
  bool single = false;  // argmin is one point
  RatVec argmin;        // set when single
  std::optional<Rat> value;  // the optimal value, when the box meets the domain
};

struct ProbeReport {
  Rat gamma = 0;
  int grid_points = 0;
  int multi_valued = 0;   // grid points with a non-singleton argmin (or empty)
  bool base_argmin_is_base = false;
  std::optional<Rat> max_ratio;  // max discrete Lipschitz ratio over grid pairs
  bool evidence_fully_stable = false;
  std::vector<ProbeGridPoint> points;
};

namespace detail_probe {

/// Exact global minimization of a quadratic over a compact polyhedron in R^n:
/// stationary points of every face, found by joint feasibility of the KKT
/// equalities with the region, plus a flatness scan of the winning faces.
struct BoxMinimizer {
  // region rows <normal, x> <= rhs
  std::vector<LinearRow> rows;
  RatMat hess;  // symmetric n x n
  RatVec lin;
  Rat constant = 0;
  int n = 0;

  struct Candidate {
    Rat value;
    RatVec point;
    std::vector<int> face;
  };

  Rat value_at(const RatVec& x) const {
    return constant + dot(lin, x) + dot(x, hess * x) / 2;
  }

  /// Feasible point of { KKT on face E } ∩ region, if any.
  std::optional<RatVec> face_stationary(const std::vector<int>& face) const {
    lp::GeneralProblem gp;
    const int k = static_cast<int>(face.size());
    gp.nvars = n + k;  // x and the face multipliers
    for (int r = 0; r < n; ++r) {
      RatVec coeff(gp.nvars);
      for (int j = 0; j < n; ++j) coeff[j] = hess.at(r, j);
      for (int e = 0; e < k; ++e) coeff[n + e] = rows[static_cast<std::size_t>(face[e])].normal[r];
      gp.eq.push_back({std::move(coeff), -lin[r]});
    }
    for (int e = 0; e < k; ++e) {
      RatVec coeff(gp.nvars);
      for (int j = 0; j < n; ++j) coeff[j] = rows[static_cast<std::size_t>(face[e])].normal[j];
      gp.eq.push_back({std::move(coeff), rows[static_cast<std::size_t>(face[e])].rhs});
    }
    for (const LinearRow& row : rows) {
      RatVec coeff(gp.nvars);
      for (int j = 0; j < n; ++j) coeff[j] = row.normal[j];
      gp.le.push_back({std::move(coeff), row.rhs});
    }
    lp::GeneralResult res = lp::solve_general(gp);
    if (res.status != lp::Status::optimal) return std::nullopt;
    return res.x.slice(0, n);
  }

  std::vector<Candidate> candidates() const {
    std::vector<Candidate> out;
    const int nrows = static_cast<int>(rows.size());
    std::vector<int> face;
    auto rec = [&](auto&& self, int from) -> void {
      if (static_cast<int>(face.size()) <= n) {
        if (!face.empty()) {
          std::vector<RatVec> normals;
          for (int e : face) normals.push_back(rows[static_cast<std::size_t>(e)].normal);
          if (static_cast<int>(span_basis(normals, n).size()) != static_cast<int>(face.size()))
            return;  // dependent normals: same affine hull as a smaller face
        }
        std::optional<RatVec> x = face_stationary(face);
        if (x) out.push_back({value_at(*x), *x, face});
      }
      if (static_cast<int>(face.size()) == n) return;
      for (int e = from; e < nrows; ++e) {
        face.push_back(e);
        self(self, e + 1);
        face.pop_back();
      }
    };
    rec(rec, 0);
    return out;
  }
};

}  // namespace detail_probe

/// Exhaustive parameter-grid probe of full stability: for every (w, v) on the
/// grid, minimize phi0(x,w) + theta(Phi(x,w)) - <v,x> over the sup-norm box
/// exactly, then report single-valuedness, whether the base argmin is the
/// base point, and the largest discrete Lipschitz ratio over all grid pairs.
inline ProbeReport full_stability_probe(const QuadraticProblemInstance& inst,
                                        const Rat& grid_radius, int grid_count) {
  inst.validate();
  detail::require(grid_count >= 1, "grid_count must be positive");
  const int m = inst.theta.dim();

  ProbeReport rep;
  rep.gamma = inst.gamma;
  if (rep.gamma <= 0) {
    // Half the sup-norm distance from the base point to the nearest inactive
    // breakpoint, pulled back through the x-Jacobian.
    CompositeProblemData cp = to_composite(inst);
    Rat z_radius = inst.theta.active_set_radius(cp.zbar);
    Rat gain = cp.jac_x.max_row_l1();
    rep.gamma = z_radius / (gain > 1 ? gain : Rat(1));
  }

  // Deterministic grid over the (w, v) axes; odd counts include the center.
  std::vector<std::vector<Rat>> axis_values;
  for (int axis = 0; axis < inst.d + inst.n; ++axis) {
    Rat center = axis < inst.d ? inst.wbar[axis] : inst.vbar[axis - inst.d];
    std::vector<Rat> vals;
    if (grid_count == 1) {
      vals.push_back(center);
    } else {
      for (int k = 0; k < grid_count; ++k)
        vals.push_back(center + grid_radius * (Rat(2 * k, grid_count - 1) - 1));
    }
    axis_values.push_back(std::move(vals));
  }
  long long total = 1;
  for (const auto& vals : axis_values) {
    total *= static_cast<long long>(vals.size());
    if (total > 2048) throw PreconditionError("probe grid too large (limit 2048 points)");
  }

  auto solve_at = [&](const RatVec& w, const RatVec& v) -> ProbeGridPoint {
    ProbeGridPoint pt;
    pt.w = w;
    pt.v = v;

    // Affine form of each component at this w: z_i = <grad_i, x> + const_i.
    std::vector<RatVec> comp_grad;
    std::vector<Rat> comp_const;
    for (int i = 0; i < m; ++i) {
      const QuadraticPoly& c = inst.components[static_cast<std::size_t>(i)];
      comp_grad.push_back(c.gx + c.bxw * w);
      comp_const.push_back(c.constant + dot(c.gw, w) + dot(w, c.cww * w) / 2);
    }
    auto piece_form = [&](int k) {
      RatVec g = RatVec::zero(inst.n);
      Rat cst = -inst.theta.piece(k).offset;
      const RatVec& a = inst.theta.piece(k).gradient;
      for (int i = 0; i < m; ++i) {
        if (a[i] == 0) continue;
        g += a[i] * comp_grad[static_cast<std::size_t>(i)];
        cst += a[i] * comp_const[static_cast<std::size_t>(i)];
      }
      return std::make_pair(g, cst);
    };

    std::optional<Rat> best;
    std::vector<std::pair<detail_probe::BoxMinimizer, detail_probe::BoxMinimizer::Candidate>>
        winners;
    std::vector<RatVec> winner_points;

    for (int k = 0; k < inst.theta.piece_count(); ++k) {
      detail_probe::BoxMinimizer qp;
      qp.n = inst.n;
      auto [gk, ck] = piece_form(k);
      for (int j = 0; j < inst.theta.piece_count(); ++j) {
        if (j == k) continue;
        auto [gj, cj] = piece_form(j);
        qp.rows.push_back({gj - gk, ck - cj});
      }
      for (int t = 0; t < inst.theta.row_count(); ++t) {
        RatVec g = RatVec::zero(inst.n);
        Rat cst = 0;
        const RatVec& dn = inst.theta.row_normal(t);
        for (int i = 0; i < m; ++i) {
          if (dn[i] == 0) continue;
          g += dn[i] * comp_grad[static_cast<std::size_t>(i)];
          cst += dn[i] * comp_const[static_cast<std::size_t>(i)];
        }
        qp.rows.push_back({std::move(g), inst.theta.row_rhs(t) - cst});
      }
      for (int j = 0; j < inst.n; ++j) {
        qp.rows.push_back({RatVec::unit(inst.n, j), inst.xbar[j] + rep.gamma});
        qp.rows.push_back({-RatVec::unit(inst.n, j), rep.gamma - inst.xbar[j]});
      }
      qp.hess = inst.objective.axx;
      qp.lin = inst.objective.gx + inst.objective.bxw * w - v + gk;
      qp.constant = inst.objective.constant + dot(inst.objective.gw, w) +
                    dot(w, inst.objective.cww * w) / 2 + ck;

      for (detail_probe::BoxMinimizer::Candidate& cand : qp.candidates()) {
        if (!best || cand.value < *best) {
          best = cand.value;
          winners.clear();
          winner_points.clear();
        }
        if (cand.value == *best) {
          winners.push_back({qp, cand});
          bool dup = false;
          for (const RatVec& x : winner_points)
            if (x == cand.point) dup = true;
          if (!dup) winner_points.push_back(cand.point);
        }
      }
    }

    if (!best) {
      pt.empty = true;
      return pt;
    }
    pt.value = *best;
    if (winner_points.size() > 1) return pt;  // multi-valued

    // Flatness: the winning stationary sets must collapse to the single point.
    for (const auto& [qp, cand] : winners) {
      lp::GeneralProblem gp;
      const int k = static_cast<int>(cand.face.size());
      gp.nvars = inst.n + k;
      for (int r = 0; r < inst.n; ++r) {
        RatVec coeff(gp.nvars);
        for (int j = 0; j < inst.n; ++j) coeff[j] = qp.hess.at(r, j);
        for (int e = 0; e < k; ++e)
          coeff[inst.n + e] = qp.rows[static_cast<std::size_t>(cand.face[e])].normal[r];
        gp.eq.push_back({std::move(coeff), -qp.lin[r]});
      }
      for (int e = 0; e < k; ++e) {
        RatVec coeff(gp.nvars);
        for (int j = 0; j < inst.n; ++j)
          coeff[j] = qp.rows[static_cast<std::size_t>(cand.face[e])].normal[j];
        gp.eq.push_back({std::move(coeff), qp.rows[static_cast<std::size_t>(cand.face[e])].rhs});
      }
      for (const LinearRow& row : qp.rows) {
        RatVec coeff(gp.nvars);
        for (int j = 0; j < inst.n; ++j) coeff[j] = row.normal[j];
        gp.le.push_back({std::move(coeff), row.rhs});
      }
      for (int j = 0; j < inst.n; ++j) {
        RatVec obj(gp.nvars);
        obj[j] = 1;
        for (bool maximize : {false, true}) {
          lp::GeneralProblem probe = gp;
          probe.objective = obj;
          probe.maximize = maximize;
          lp::GeneralResult res = lp::solve_general(probe);
          if (res.status == lp::Status::optimal && res.x[j] != cand.point[j]) return pt;
        }
      }
    }
    pt.single = true;
    pt.argmin = winner_points.front();
    return pt;
  };

  // Walk the grid.
  std::vector<ProbeGridPoint> points;
  std::vector<int> idx(axis_values.size(), 0);
  for (;;) {
    RatVec w(inst.d), v(inst.n);
    for (int axis = 0; axis < inst.d; ++axis)
      w[axis] = axis_values[static_cast<std::size_t>(axis)][static_cast<std::size_t>(idx[axis])];
    for (int axis = 0; axis < inst.n; ++axis)
      v[axis] = axis_values[static_cast<std::size_t>(inst.d + axis)]
                           [static_cast<std::size_t>(idx[inst.d + axis])];
    points.push_back(solve_at(w, v));
    int carry = static_cast<int>(axis_values.size()) - 1;
    while (carry >= 0) {
      if (++idx[static_cast<std::size_t>(carry)] <
          static_cast<int>(axis_values[static_cast<std::size_t>(carry)].size()))
        break;
      idx[static_cast<std::size_t>(carry)] = 0;
      --carry;
    }
    if (carry < 0 || axis_values.empty()) break;
  }

  ProbeGridPoint at_base = solve_at(inst.wbar, inst.vbar);
  rep.base_argmin_is_base = at_base.single && at_base.argmin == inst.xbar;

  rep.grid_points = static_cast<int>(points.size());
  for (const ProbeGridPoint& pt : points)
    if (!pt.single) ++rep.multi_valued;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (!points[i].single || !points[j].single) continue;
      Rat dp = concat(points[i].w - points[j].w, points[i].v - points[j].v).linf_norm();
      if (dp == 0) continue;
      Rat ratio = (points[i].argmin - points[j].argmin).linf_norm() / dp;
      if (!rep.max_ratio || ratio > *rep.max_ratio) rep.max_ratio = ratio;
    }
  rep.evidence_fully_stable = rep.multi_valued == 0 && rep.base_argmin_is_base;
  rep.points = std::move(points);
  return rep;
}

}  // namespace cpwl
