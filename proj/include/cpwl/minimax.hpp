#pragma once
// Constrained minimax problems
//
//   minimize  max{phi_1(x,w), ..., phi_l(x,w)}
//   over      Upsilon(x,w) = (zeta_1, ..., zeta_r) in Z,   Z polyhedral,
//
// encoded as a composite problem with theta(z) = max_i z_i + indicator(Z) on
// R^{l+r} built from unit vectors: pieces (e_i, 0) and rows ((0, c_t), tau_t).
// The minimax-side qualification, KKT system and SSOSC are computed directly
// from the original data and hard-asserted against the composite path.

#include <utility>
#include <vector>

#include "cpwl/stability.hpp"

namespace cpwl {

struct SmoothTermData {
  RatVec grad_x;   // R^n
  RatVec grad_w;   // R^d
  RatMat hess_xx;  // n x n
  RatMat hess_xw;  // n x d
};

struct MinimaxProblemData {
  int n = 0;
  int d = 0;
  std::vector<SmoothTermData> objectives;   // l >= 1
  std::vector<SmoothTermData> constraints;  // r >= 0, the components of Upsilon
  HalfspaceSystem constraint_set;           // Z in R^r, rows (c_t, tau_t)
  RatVec z1;    // objective values at the base pair, R^l
  RatVec z2;    // constraint values at the base pair, R^r
  RatVec vbar;  // tilt, R^n

  int l() const { return static_cast<int>(objectives.size()); }
  int r() const { return static_cast<int>(constraints.size()); }

  void validate() const {
    detail::require(l() >= 1, "at least one objective branch required");
    detail::require(z1.dim() == l() && z2.dim() == r() && vbar.dim() == n,
                    "minimax data dimension mismatch");
    detail::require(constraint_set.dim == r() && constraint_set.equalities.empty(),
                    "Z must be an inequality system over R^r");
    for (const SmoothTermData& t : objectives) check_term(t);
    for (const SmoothTermData& t : constraints) check_term(t);
    if (!constraint_set.contains(z2)) throw PreconditionError("base point infeasible: z2 outside Z");
  }

  /// Active objective branches at the base pair.
  std::vector<int> active_objectives() const {
    Rat best = z1[0];
    for (int i = 1; i < l(); ++i)
      if (z1[i] > best) best = z1[i];
    std::vector<int> act;
    for (int i = 0; i < l(); ++i)
      if (z1[i] == best) act.push_back(i);
    return act;
  }
  /// Tight rows of Z at the base pair.
  std::vector<int> active_rows() const {
    std::vector<int> act;
    for (int t = 0; t < static_cast<int>(constraint_set.inequalities.size()); ++t)
      if (dot(constraint_set.inequalities[static_cast<std::size_t>(t)].normal, z2) ==
          constraint_set.inequalities[static_cast<std::size_t>(t)].rhs)
        act.push_back(t);
    return act;
  }

 private:
  void check_term(const SmoothTermData& t) const {
    detail::require(t.grad_x.dim() == n && t.grad_w.dim() == d &&
                        t.hess_xx.rows() == n && t.hess_xx.cols() == n &&
                        t.hess_xw.rows() == n && t.hess_xw.cols() == d,
                    "smooth term dimension mismatch");
  }
};

/// Composite encoding: theta on R^{l+r} from unit vectors and the Z rows,
/// Phi-data stacked objectives first, phi0 == 0.
inline CompositeProblemData build_composite(const MinimaxProblemData& mp) {
  mp.validate();
  const int l = mp.l();
  const int r = mp.r();
  const int m = l + r;
  std::vector<AffinePiece> pieces;
  for (int i = 0; i < l; ++i) pieces.push_back({RatVec::unit(m, i), Rat(0)});
  HalfspaceSystem dom(m);
  for (const LinearRow& row : mp.constraint_set.inequalities) {
    RatVec lifted(m);
    for (int s = 0; s < r; ++s) lifted[l + s] = row.normal[s];
    dom.add_inequality(std::move(lifted), row.rhs);
  }

  CompositeProblemData cp{CpwlFunction(std::move(pieces), std::move(dom)),
                          mp.n,
                          mp.d,
                          RatVec::zero(mp.n),
                          RatVec::zero(mp.d),
                          RatMat(m, mp.n),
                          RatMat(m, mp.d),
                          RatMat(mp.n, mp.n),
                          RatMat(mp.n, mp.d),
                          {},
                          {},
                          concat(mp.z1, mp.z2),
                          mp.vbar};
  auto stack = [&](const SmoothTermData& t, int row) {
    for (int j = 0; j < mp.n; ++j) cp.jac_x.at(row, j) = t.grad_x[j];
    for (int j = 0; j < mp.d; ++j) cp.jac_w.at(row, j) = t.grad_w[j];
    cp.hess_xx.push_back(t.hess_xx);
    cp.hess_xw.push_back(t.hess_xw);
  };
  for (int i = 0; i < l; ++i) stack(mp.objectives[static_cast<std::size_t>(i)], i);
  for (int s = 0; s < r; ++s) stack(mp.constraints[static_cast<std::size_t>(s)], l + s);
  return cp;
}

/// Qualification in original terms: the product of span{e_i - e_j : active
/// objectives} and span{c_t : tight rows} meets ker(Jx*) only at 0. Asserted
/// equal to the composite SOQC.
inline bool minimax_nd_check(const MinimaxProblemData& mp) {
  mp.validate();
  const int l = mp.l();
  const int r = mp.r();
  const int m = l + r;
  std::vector<int> kk = mp.active_objectives();
  std::vector<int> ii = mp.active_rows();
  std::vector<RatVec> d_gens;
  for (std::size_t x = 0; x < kk.size(); ++x)
    for (std::size_t y = x + 1; y < kk.size(); ++y) {
      RatVec g(m);
      g[kk[x]] = 1;
      g[kk[y]] = -1;
      d_gens.push_back(std::move(g));
    }
  for (int t : ii) {
    RatVec g(m);
    for (int s = 0; s < r; ++s)
      g[l + s] = mp.constraint_set.inequalities[static_cast<std::size_t>(t)].normal[s];
    d_gens.push_back(std::move(g));
  }
  CompositeProblemData cp = build_composite(mp);
  std::vector<RatVec> ker = kernel_basis(cp.jac_x.transpose());
  bool nd = spans_intersect_trivially(d_gens, ker, m);
  if (nd != soqc_check(cp))
    throw InternalCheckError("minimax qualification disagrees with composite SOQC");
  return nd;
}

struct MinimaxKkt {
  RatVec lambda;           // R^l, supported on the active objectives
  RatVec row_multipliers;  // R^p over the rows of Z, supported on tight rows
  RatVec normal_vector;    // mu = sum_t eta_t c_t in N(z2; Z), R^r
  bool unique = false;     // uniqueness of (lambda, mu)
};

/// Solves  vbar = sum lambda_i grad_x phi_i + Upsilon_x^* mu  with lambda a
/// convex combination over the active objectives and mu in the normal cone of
/// Z, all exact. Uniqueness of (lambda, mu) by coordinate-range LPs; under the
/// qualification the solution is asserted unique.
inline MinimaxKkt minimax_kkt(const MinimaxProblemData& mp) {
  mp.validate();
  const int r = mp.r();
  std::vector<int> kk = mp.active_objectives();
  std::vector<int> ii = mp.active_rows();
  const int nk = static_cast<int>(kk.size());
  const int ni = static_cast<int>(ii.size());

  // Columns of the stationarity system: grad phi_i for active i, then the
  // pullbacks Upsilon_x^* c_t for tight t.
  std::vector<RatVec> columns;
  for (int i : kk) columns.push_back(mp.objectives[static_cast<std::size_t>(i)].grad_x);
  for (int t : ii) {
    RatVec pulled = RatVec::zero(mp.n);
    const RatVec& c = mp.constraint_set.inequalities[static_cast<std::size_t>(t)].normal;
    for (int s = 0; s < r; ++s)
      if (c[s] != 0) pulled += c[s] * mp.constraints[static_cast<std::size_t>(s)].grad_x;
    columns.push_back(std::move(pulled));
  }

  lp::GeneralProblem base;
  base.nvars = nk + ni;
  for (int row = 0; row < mp.n; ++row) {
    RatVec coeff(base.nvars);
    for (int j = 0; j < base.nvars; ++j) coeff[j] = columns[static_cast<std::size_t>(j)][row];
    base.eq.push_back({std::move(coeff), mp.vbar[row]});
  }
  {
    RatVec ones(base.nvars);
    for (int j = 0; j < nk; ++j) ones[j] = 1;
    base.eq.push_back({std::move(ones), Rat(1)});
  }
  for (int j = 0; j < base.nvars; ++j) {
    RatVec neg(base.nvars);
    neg[j] = -1;
    base.le.push_back({std::move(neg), Rat(0)});
  }
  lp::GeneralResult feas = lp::solve_general(base);
  if (feas.status != lp::Status::optimal)
    throw PreconditionError("not a stationary tilt: the minimax KKT system is infeasible");

  auto assemble = [&](const RatVec& vars) {
    MinimaxKkt k;
    k.lambda = RatVec::zero(mp.l());
    for (int j = 0; j < nk; ++j) k.lambda[kk[static_cast<std::size_t>(j)]] = vars[j];
    k.row_multipliers = RatVec::zero(static_cast<int>(mp.constraint_set.inequalities.size()));
    k.normal_vector = RatVec::zero(r);
    for (int j = 0; j < ni; ++j) {
      int t = ii[static_cast<std::size_t>(j)];
      k.row_multipliers[t] = vars[nk + j];
      k.normal_vector +=
          vars[nk + j] * mp.constraint_set.inequalities[static_cast<std::size_t>(t)].normal;
    }
    return k;
  };
  MinimaxKkt kkt = assemble(feas.x);
  kkt.unique = true;

  // Range of each coordinate of (lambda, mu) over the solution set.
  auto functional = [&](int coord) {
    RatVec obj(base.nvars);
    if (coord < mp.l()) {
      for (int j = 0; j < nk; ++j)
        if (kk[static_cast<std::size_t>(j)] == coord) obj[j] = 1;
    } else {
      int s = coord - mp.l();
      for (int j = 0; j < ni; ++j)
        obj[nk + j] =
            mp.constraint_set.inequalities[static_cast<std::size_t>(ii[static_cast<std::size_t>(j)])]
                .normal[s];
    }
    return obj;
  };
  for (int coord = 0; coord < mp.l() + r && kkt.unique; ++coord) {
    RatVec obj = functional(coord);
    for (bool maximize : {false, true}) {
      lp::GeneralProblem probe = base;
      probe.objective = obj;
      probe.maximize = maximize;
      lp::GeneralResult res = lp::solve_general(probe);
      if (res.status == lp::Status::unbounded) {
        Rat at_witness = maximize ? dot(obj, feas.x) : -dot(obj, feas.x);
        probe.le.push_back({maximize ? obj : -obj, at_witness + 1});
        res = lp::solve_general(probe);
      }
      if (res.status == lp::Status::optimal) {
        MinimaxKkt other = assemble(res.x);
        if (other.lambda != kkt.lambda || other.normal_vector != kkt.normal_vector) {
          kkt.unique = false;
          break;
        }
      }
    }
  }
  if (minimax_nd_check(mp) && !kkt.unique)
    throw InternalCheckError("qualification holds but the minimax multiplier is not unique");
  return kkt;
}

/// Full-stability verdict via the minimax SSOSC, hard-asserted against the
/// composite path: same qualification, same multipliers, same Lagrangian
/// Hessian, same subspace, same verdict.
inline StabilityReport minimax_verdict(const MinimaxProblemData& mp, int max_active = 12) {
  CompositeProblemData cp = build_composite(mp);
  StabilityReport composite = full_stability_verdict(cp, max_active);

  // Active-set identities between the two formulations.
  ActiveSets act = cp.theta.active_sets(cp.zbar);
  if (act.pieces != mp.active_objectives() || act.rows != mp.active_rows())
    throw InternalCheckError("active sets of the assembled theta disagree with the minimax data");

  bool nd = minimax_nd_check(mp);
  if (nd != composite.nd) throw InternalCheckError("minimax ND disagrees with the composite path");
  MinimaxKkt kkt = minimax_kkt(mp);
  if (kkt.unique != composite.multipliers.unique)
    throw InternalCheckError("multiplier uniqueness disagrees between the two paths");

  if (composite.multiplier) {
    if (concat(kkt.lambda, kkt.normal_vector) != *composite.multiplier)
      throw InternalCheckError("minimax multipliers disagree with the composite multiplier");

    // Lagrangian Hessian identity.
    RatMat h_mm(mp.n, mp.n);
    for (int i = 0; i < mp.l(); ++i)
      if (kkt.lambda[i] != 0) h_mm += kkt.lambda[i] * mp.objectives[static_cast<std::size_t>(i)].hess_xx;
    for (int s = 0; s < mp.r(); ++s)
      if (kkt.normal_vector[s] != 0)
        h_mm += kkt.normal_vector[s] * mp.constraints[static_cast<std::size_t>(s)].hess_xx;
    RatMat h_comp(mp.n, mp.n);
    for (int i = 0; i < cp.theta.dim(); ++i)
      if ((*composite.multiplier)[i] != 0)
        h_comp += (*composite.multiplier)[i] * cp.hess_xx[static_cast<std::size_t>(i)];
    if (h_mm != h_comp) throw InternalCheckError("Lagrangian Hessians disagree between the paths");

    // Minimax subspace: pairwise-equal objective growth on Γ(J1), Upsilon
    // pushed against Γ(J2) rows. The "some constant" clause is the pairwise
    // equality of <grad phi_i, u> across Γ(J1).
    const SsoscSubspace& sub = *composite.subspace;
    std::vector<RatVec> rows;
    for (std::size_t x = 0; x < sub.gamma_pieces.size(); ++x)
      for (std::size_t y = x + 1; y < sub.gamma_pieces.size(); ++y)
        rows.push_back(mp.objectives[static_cast<std::size_t>(sub.gamma_pieces[x])].grad_x -
                       mp.objectives[static_cast<std::size_t>(sub.gamma_pieces[y])].grad_x);
    for (int t : sub.gamma_rows) {
      RatVec pulled = RatVec::zero(mp.n);
      const RatVec& c = mp.constraint_set.inequalities[static_cast<std::size_t>(t)].normal;
      for (int s = 0; s < mp.r(); ++s)
        if (c[s] != 0) pulled += c[s] * mp.constraints[static_cast<std::size_t>(s)].grad_x;
      rows.push_back(std::move(pulled));
    }
    std::vector<RatVec> basis_mm = rows.empty()
                                       ? orthogonal_complement({}, mp.n)
                                       : kernel_basis(RatMat::from_rows(rows, mp.n));
    if (!spans_equal(basis_mm, sub.basis, mp.n))
      throw InternalCheckError("minimax SSOSC subspace disagrees with the composite subspace");

    // Positive definiteness of the minimax Hessian on the minimax subspace.
    CompositeProblemData shell = cp;
    shell.hess_xx_phi0 = h_mm;
    RatVec zero_lambda = RatVec::zero(cp.theta.dim());
    // reuse the Sylvester routine with the Hessian already assembled
    for (RatMat& hm : shell.hess_xx) hm = RatMat(mp.n, mp.n);
    SsoscCertificate cert = ssosc_check(shell, zero_lambda, basis_mm);
    if (composite.ssosc && cert.holds != composite.ssosc->holds)
      throw InternalCheckError("minimax SSOSC disagrees with the composite SSOSC");
  }
  return composite;
}

}  // namespace cpwl
