#pragma once
// Full-stability certification for composite problems
//
//   minimize  phi0(x, w) + theta(Phi(x, w)) - <v, x>
//
// represented by exact point data at the reference pair: gradients, partial
// Jacobians and Hessians of phi0 and the components of Phi, the base value
// zbar = Phi(xbar, wbar), and the tilt vbar. Checks implemented:
//
//   soqc_check   S(zbar) ∩ ker(Jx*) = {0}
//   nd_check     range(Jx) + ker B = R^m, asserted equivalent to SOQC
//   kkt          L-multiplier set { lambda in subdiff : Jx* lambda = q },
//                emptiness and uniqueness by exact LPs
//   ssosc        positive definiteness of the reduced Lagrangian Hessian on
//                the Gamma-subspace, by Sylvester minors
//   verdict      fully stable iff SSOSC, under nondegeneracy and a unique
//                multiplier; no verdict is emitted when ND fails
//
// plus the second-order chain rule evaluation under SOQC.

#include <optional>
#include <utility>
#include <vector>

#include "cpwl/reduction.hpp"
#include "cpwl/second_order.hpp"

namespace cpwl {

struct CompositeProblemData {
  CpwlFunction theta;
  int n = 0;
  int d = 0;
  RatVec grad_x_phi0;              // R^n
  RatVec grad_w_phi0;              // R^d
  RatMat jac_x;                    // m x n
  RatMat jac_w;                    // m x d
  RatMat hess_xx_phi0;             // n x n
  RatMat hess_xw_phi0;             // n x d
  std::vector<RatMat> hess_xx;     // m entries, n x n
  std::vector<RatMat> hess_xw;     // m entries, n x d
  RatVec zbar;                     // R^m, must lie in dom theta
  RatVec vbar;                     // tilt, R^n

  void validate() const {
    const int m = theta.dim();
    detail::require(zbar.dim() == m && vbar.dim() == n, "composite data dimension mismatch");
    detail::require(grad_x_phi0.dim() == n && grad_w_phi0.dim() == d,
                    "composite gradient dimension mismatch");
    detail::require(jac_x.rows() == m && jac_x.cols() == n, "Jx must be m x n");
    detail::require(jac_w.rows() == m && jac_w.cols() == d, "Jw must be m x d");
    detail::require(hess_xx_phi0.rows() == n && hess_xx_phi0.cols() == n, "Hxx(phi0) must be n x n");
    detail::require(hess_xw_phi0.rows() == n && hess_xw_phi0.cols() == d, "Hxw(phi0) must be n x d");
    detail::require(static_cast<int>(hess_xx.size()) == m && static_cast<int>(hess_xw.size()) == m,
                    "one Hessian pair per component required");
    for (const RatMat& h : hess_xx)
      detail::require(h.rows() == n && h.cols() == n, "component Hxx must be n x n");
    for (const RatMat& h : hess_xw)
      detail::require(h.rows() == n && h.cols() == d, "component Hxw must be n x d");
    if (!theta.in_domain(zbar)) throw PreconditionError("zbar outside dom theta");
  }
};

/// SOQC: the subspace parallel to aff(subdiff at zbar) meets ker(Jx*) only at 0.
inline bool soqc_check(const CompositeProblemData& p) {
  p.validate();
  std::vector<RatVec> s_basis = affine_hull(p.theta, p.zbar).first;
  std::vector<RatVec> ker = kernel_basis(p.jac_x.transpose());
  return spans_intersect_trivially(s_basis, ker, p.theta.dim());
}

/// Partial nondegeneracy: range(Jx) + ker B = R^m for the reduction matrix B.
/// Disagreement with SOQC is an internal error (the two are equivalent).
inline bool nd_check(const CompositeProblemData& p, const ReductionResult& red) {
  const int m = p.theta.dim();
  std::vector<RatVec> gens;
  for (int j = 0; j < p.jac_x.cols(); ++j) gens.push_back(p.jac_x.col(j));
  std::vector<RatVec> kerb = kernel_basis(red.projection);
  gens.insert(gens.end(), kerb.begin(), kerb.end());
  bool nd = static_cast<int>(span_basis(gens, m).size()) == m;
  if (nd != soqc_check(p))
    throw InternalCheckError("nondegeneracy and SOQC disagree");
  return nd;
}

struct MultiplierSet {
  bool nonempty = false;
  bool unique = false;
  RatVec target;                 // the partial subgradient vbar - grad_x phi0
  RatVec witness;                // an element of the set, when nonempty
  std::optional<RatVec> second;  // a different element, when not unique
};

/// The multiplier polyhedron { lambda in subdiff theta(zbar) :
/// Jx* lambda = vbar - grad_x phi0 }. Uniqueness is decided by exact
/// coordinate-range LPs over the set.
inline MultiplierSet kkt_multipliers(const CompositeProblemData& p) {
  p.validate();
  const int m = p.theta.dim();
  ActiveSets act = p.theta.active_sets(p.zbar);
  const int nk = static_cast<int>(act.pieces.size());
  const int ni = static_cast<int>(act.rows.size());
  RatVec target = p.vbar - p.grad_x_phi0;
  RatMat jxt = p.jac_x.transpose();

  lp::GeneralProblem base;
  base.nvars = nk + ni;
  auto lambda_coeff_row = [&](int out_coord) {
    // coefficient of each variable in lambda[out_coord]
    RatVec row(base.nvars);
    for (int j = 0; j < nk; ++j) row[j] = p.theta.piece(act.pieces[j]).gradient[out_coord];
    for (int j = 0; j < ni; ++j) row[nk + j] = p.theta.row_normal(act.rows[j])[out_coord];
    return row;
  };
  for (int r = 0; r < p.n; ++r) {
    RatVec coeff(base.nvars);
    for (int c = 0; c < m; ++c) {
      if (jxt.at(r, c) == 0) continue;
      RatVec lc = lambda_coeff_row(c);
      for (int j = 0; j < base.nvars; ++j) coeff[j] += jxt.at(r, c) * lc[j];
    }
    base.eq.push_back({std::move(coeff), target[r]});
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

  auto to_lambda = [&](const RatVec& vars) {
    RatVec lambda = RatVec::zero(m);
    for (int j = 0; j < nk; ++j) lambda += vars[j] * p.theta.piece(act.pieces[j]).gradient;
    for (int j = 0; j < ni; ++j) lambda += vars[nk + j] * p.theta.row_normal(act.rows[j]);
    return lambda;
  };

  MultiplierSet out;
  out.target = target;
  lp::GeneralResult feas = lp::solve_general(base);
  if (feas.status != lp::Status::optimal) return out;
  out.nonempty = true;
  out.witness = to_lambda(feas.x);
  out.unique = true;
  for (int c = 0; c < m && out.unique; ++c) {
    RatVec obj = lambda_coeff_row(c);
    for (bool maximize : {false, true}) {
      lp::GeneralProblem probe = base;
      probe.objective = obj;
      probe.maximize = maximize;
      lp::GeneralResult r = lp::solve_general(probe);
      if (r.status == lp::Status::unbounded) {
        // Cap the objective one unit past the witness to extract a distinct
        // element of the unbounded set.
        Rat at_witness = maximize ? dot(obj, feas.x) : -dot(obj, feas.x);
        probe.le.push_back({maximize ? obj : -obj, at_witness + 1});
        r = lp::solve_general(probe);
      }
      if (r.status == lp::Status::optimal) {
        RatVec candidate = to_lambda(r.x);
        if (candidate != out.witness) {
          out.unique = false;
          out.second = candidate;
          break;
        }
      }
    }
  }
  return out;
}

struct SsoscSubspace {
  std::vector<RatVec> basis;      // basis of the SSOSC subspace in R^n
  std::vector<int> gamma_pieces;  // Γ(J1)
  std::vector<int> gamma_rows;    // Γ(J2)
};

/// The subspace { u : <a_i - a_j, Jx u> = 0 on Γ(J1) pairs,
/// <d_t, Jx u> = 0 on Γ(J2) }, cross-checked against the pullback of the
/// second-order domain under Jx.
inline SsoscSubspace ssosc_subspace(const CompositeProblemData& p, const RatVec& lambda,
                                    const SubgradientDecomposition& dec) {
  DomainSubspace dom = domain_subspace(p.theta, p.zbar, lambda, dec);
  SsoscSubspace out;
  out.gamma_pieces = dom.gamma_pieces;
  out.gamma_rows = dom.gamma_rows;

  std::vector<RatVec> rows;
  for (std::size_t x = 0; x < dom.gamma_pieces.size(); ++x)
    for (std::size_t y = x + 1; y < dom.gamma_pieces.size(); ++y)
      rows.push_back((p.theta.piece(dom.gamma_pieces[x]).gradient -
                      p.theta.piece(dom.gamma_pieces[y]).gradient));
  for (int t : dom.gamma_rows) rows.push_back(p.theta.row_normal(t));
  std::vector<RatVec> pulled;
  for (const RatVec& r : rows) {
    RatVec row(p.n);
    for (int j = 0; j < p.n; ++j) row[j] = dot(r, p.jac_x.col(j));
    pulled.push_back(std::move(row));
  }
  out.basis = pulled.empty() ? orthogonal_complement({}, p.n)
                             : kernel_basis(RatMat::from_rows(pulled, p.n));

  // Independent route: { u : Jx u in span(domain basis) }.
  std::vector<RatVec> dom_normals = orthogonal_complement(dom.basis, p.theta.dim());
  std::vector<RatVec> pulled2;
  for (const RatVec& nrm : dom_normals) {
    RatVec row(p.n);
    for (int j = 0; j < p.n; ++j) row[j] = dot(nrm, p.jac_x.col(j));
    pulled2.push_back(std::move(row));
  }
  std::vector<RatVec> alt = pulled2.empty() ? orthogonal_complement({}, p.n)
                                            : kernel_basis(RatMat::from_rows(pulled2, p.n));
  if (!spans_equal(out.basis, alt, p.n))
    throw InternalCheckError("SSOSC subspace disagrees with the domain pullback");
  return out;
}

struct SsoscCertificate {
  bool holds = false;
  std::vector<Rat> minors;        // leading principal minors of the restriction
  std::optional<RatVec> violator; // u with <u, H u> <= 0 when the check fails
};

/// Positive definiteness of the symmetrized Lagrangian Hessian restricted to
/// span(basis), decided exactly by Sylvester's criterion. Vacuously true on
/// the zero subspace.
inline SsoscCertificate ssosc_check(const CompositeProblemData& p, const RatVec& lambda,
                                    const std::vector<RatVec>& basis) {
  const int n = p.n;
  RatMat h = p.hess_xx_phi0;
  for (int i = 0; i < p.theta.dim(); ++i)
    if (lambda[i] != 0) h += lambda[i] * p.hess_xx[static_cast<std::size_t>(i)];
  RatMat hs(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) hs.at(i, j) = (h.at(i, j) + h.at(j, i)) / 2;

  const int k = static_cast<int>(basis.size());
  RatMat m(k, k);
  for (int j = 0; j < k; ++j) {
    RatVec hb = hs * basis[static_cast<std::size_t>(j)];
    for (int i = 0; i < k; ++i) m.at(i, j) = dot(basis[static_cast<std::size_t>(i)], hb);
  }

  SsoscCertificate cert;
  // LDL^T elimination; minors are running pivot products. Stops at the first
  // nonpositive pivot with a violating combination.
  RatMat work = m;
  RatMat lower = RatMat::identity(k);
  Rat minor_product = 1;
  for (int step = 0; step < k; ++step) {
    Rat pivot = work.at(step, step);
    minor_product *= pivot;
    cert.minors.push_back(minor_product);
    if (minor_product <= 0) {
      RatVec y(k);
      y[step] = 1;
      for (int i = step - 1; i >= 0; --i) {
        Rat s = 0;
        for (int j = i + 1; j <= step; ++j) s += lower.at(j, i) * y[j];
        y[i] = -s;
      }
      RatVec u = RatVec::zero(n);
      for (int i = 0; i <= step; ++i) u += y[i] * basis[static_cast<std::size_t>(i)];
      cert.holds = false;
      cert.violator = u;
      return cert;
    }
    for (int i = step + 1; i < k; ++i) {
      Rat f = work.at(i, step) / pivot;
      lower.at(i, step) = f;
      for (int j = step; j < k; ++j) work.at(i, j) -= f * work.at(step, j);
    }
  }
  cert.holds = true;
  return cert;
}

struct StabilityReport {
  bool soqc = false;
  bool nd = false;
  MultiplierSet multipliers;
  std::optional<RatVec> multiplier;  // the unique lambda, when unique
  std::optional<SsoscSubspace> subspace;
  std::optional<SsoscCertificate> ssosc;
  std::optional<bool> fully_stable;  // unset when ND fails
};

/// Runs the whole pipeline. Errors: non-stationary tilt. Internal assertions:
/// SOQC == ND and multiplier uniqueness under ND.
inline StabilityReport full_stability_verdict(const CompositeProblemData& p, int max_active = 12) {
  p.validate();
  StabilityReport rep;
  rep.multipliers = kkt_multipliers(p);
  if (!rep.multipliers.nonempty)
    throw PreconditionError("not a stationary point: the multiplier set is empty");
  rep.soqc = soqc_check(p);
  ReductionResult red = build_reduction(p.theta, p.zbar);
  rep.nd = nd_check(p, red);
  if (rep.nd && !rep.multipliers.unique)
    throw InternalCheckError("nondegeneracy holds but the multiplier is not unique");
  if (rep.multipliers.unique) {
    rep.multiplier = rep.multipliers.witness;
    SubgradientDecomposition dec = p.theta.decompose_subgradient(p.zbar, *rep.multiplier);
    rep.subspace = ssosc_subspace(p, *rep.multiplier, dec);
    rep.ssosc = ssosc_check(p, *rep.multiplier, rep.subspace->basis);
    if (rep.nd) rep.fully_stable = rep.ssosc->holds;
  }
  (void)max_active;
  return rep;
}

/// Second-order chain rule for psi = theta ∘ Phi at the base pair under SOQC:
/// the value at u is the union over active second-order pieces F of
///   (Hxx<lambda,Phi> u, Hxw<lambda,Phi>^T u) + (Jx, Jw)^* F,
/// one affinely shifted generator set per piece in R^{n+d}.
inline std::vector<GeneratorSet> chain_rule_eval(const CompositeProblemData& p, const RatVec& u,
                                                 int max_active = 12) {
  p.validate();
  detail::require(u.dim() == p.n, "direction dimension mismatch");
  if (!soqc_check(p))
    throw PreconditionError("SOQC fails: the second-order chain rule is not justified");
  MultiplierSet mult = kkt_multipliers(p);
  if (!mult.nonempty) throw PreconditionError("not a stationary point");
  if (!mult.unique)
    throw InternalCheckError("SOQC holds but the multiplier set is not a singleton");
  const RatVec& lambda = mult.witness;
  const int m = p.theta.dim();

  RatVec shift_x = RatVec::zero(p.n);
  RatVec shift_w = RatVec::zero(p.d);
  for (int i = 0; i < m; ++i) {
    if (lambda[i] == 0) continue;
    shift_x += lambda[i] * (p.hess_xx[static_cast<std::size_t>(i)] * u);
    shift_w += lambda[i] * (p.hess_xw[static_cast<std::size_t>(i)].transpose() * u);
  }
  RatVec shift = concat(shift_x, shift_w);

  RatMat jxt = p.jac_x.transpose();
  RatMat jwt = p.jac_w.transpose();
  auto push = [&](const RatVec& q) { return concat(jxt * q, jwt * q); };

  SecondOrderMap map = second_order_map(p.theta, p.zbar, lambda, max_active);
  std::vector<GeneratorSet> out;
  for (const GeneratorSet& f : eval_second_order(map, p.jac_x * u)) {
    GeneratorSet g(p.n + p.d);
    g.points.push_back(shift);
    for (const RatVec& r : f.rays) g.rays.push_back(push(r));
    for (const RatVec& l : f.lines) g.lines.push_back(push(l));
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace cpwl
