#pragma once
// Exact rational two-phase primal simplex with Bland's anticycling rule.
//
// The standard-form solver handles  min c'x  s.t.  Ax = b, x >= 0  and is the
// only pivoting code. General problems (free variables, equalities and <=
// rows, max or min) are reduced to it by variable splitting and slacks.
// Everything is exact; termination follows from Bland's rule.

#include <optional>
#include <utility>
#include <vector>

#include "cpwl/halfspace.hpp"
#include "cpwl/linalg.hpp"

namespace cpwl::lp {

enum class Status { optimal, infeasible, unbounded };

struct StandardResult {
  Status status = Status::infeasible;
  std::vector<Rat> x;
  Rat objective = 0;
};

namespace detail_lp {

class Tableau {
 public:
  Tableau(int rows, int cols) : cols_(cols), cells_(static_cast<std::size_t>(rows) * (cols + 1)) {}

  Rat& at(int i, int j) { return cells_[static_cast<std::size_t>(i) * (cols_ + 1) + j]; }
  const Rat& at(int i, int j) const {
    return cells_[static_cast<std::size_t>(i) * (cols_ + 1) + j];
  }
  Rat& rhs(int i) { return at(i, cols_); }
  const Rat& rhs(int i) const { return at(i, cols_); }
  int cols() const { return cols_; }

 private:
  int cols_;
  std::vector<Rat> cells_;
};

struct Program {
  Tableau body;      // constraint rows
  std::vector<Rat> cost;  // reduced costs, last entry = -(objective value)
  std::vector<int> basis;

  Program(int rows, int cols) : body(rows, cols), cost(static_cast<std::size_t>(cols) + 1) {}

  int rows() const { return static_cast<int>(basis.size()); }

  void pivot(int r, int c) {
    Rat inv = Rat(1) / body.at(r, c);
    for (int j = 0; j <= body.cols(); ++j) body.at(r, j) *= inv;
    for (int i = 0; i < rows(); ++i) {
      if (i == r || body.at(i, c) == 0) continue;
      Rat f = body.at(i, c);
      for (int j = 0; j <= body.cols(); ++j) body.at(i, j) -= f * body.at(r, j);
    }
    if (cost[static_cast<std::size_t>(c)] != 0) {
      Rat f = cost[static_cast<std::size_t>(c)];
      for (int j = 0; j <= body.cols(); ++j)
        cost[static_cast<std::size_t>(j)] -= f * body.at(r, j);
    }
    basis[static_cast<std::size_t>(r)] = c;
  }

  // Bland: entering = lowest-index negative reduced cost; leaving = lowest
  // basic index among the ratio-test ties. Returns optimal/unbounded.
  Status iterate() {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < body.cols(); ++j)
        if (cost[static_cast<std::size_t>(j)] < 0) {
          enter = j;
          break;
        }
      if (enter < 0) return Status::optimal;
      int leave = -1;
      Rat best = 0;
      for (int i = 0; i < rows(); ++i) {
        if (body.at(i, enter) <= 0) continue;
        Rat ratio = body.rhs(i) / body.at(i, enter);
        if (leave < 0 || ratio < best ||
            (ratio == best && basis[static_cast<std::size_t>(i)] <
                                  basis[static_cast<std::size_t>(leave)])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return Status::unbounded;
      pivot(leave, enter);
    }
  }
};

}  // namespace detail_lp

/// min c'x s.t. Ax = b, x >= 0.
inline StandardResult solve_standard(const RatMat& a, const std::vector<Rat>& b,
                                     const std::vector<Rat>& c) {
  using detail_lp::Program;
  const int m = a.rows();
  const int n = a.cols();
  detail::require(static_cast<int>(b.size()) == m && static_cast<int>(c.size()) == n,
                  "standard LP dimension mismatch");

  // Phase 1 over [A | I] with rows flipped so the rhs is nonnegative.
  Program p(m, n + m);
  for (int i = 0; i < m; ++i) {
    bool flip = b[static_cast<std::size_t>(i)] < 0;
    for (int j = 0; j < n; ++j) p.body.at(i, j) = flip ? -a.at(i, j) : a.at(i, j);
    p.body.rhs(i) = flip ? -b[static_cast<std::size_t>(i)] : b[static_cast<std::size_t>(i)];
    p.body.at(i, n + i) = 1;
    p.basis.push_back(n + i);
  }
  for (int j = 0; j < n; ++j) {
    Rat s = 0;
    for (int i = 0; i < m; ++i) s += p.body.at(i, j);
    p.cost[static_cast<std::size_t>(j)] = -s;
  }
  {
    Rat s = 0;
    for (int i = 0; i < m; ++i) s += p.body.rhs(i);
    p.cost[static_cast<std::size_t>(n + m)] = -s;  // phase-1 value, negated
  }
  p.iterate();  // bounded below by 0, never returns unbounded
  if (p.cost[static_cast<std::size_t>(n + m)] != 0) return {Status::infeasible, {}, 0};

  // Drive artificials out of the basis; drop rows that turn out redundant.
  for (int i = p.rows() - 1; i >= 0; --i) {
    if (p.basis[static_cast<std::size_t>(i)] < n) continue;
    int col = -1;
    for (int j = 0; j < n; ++j)
      if (p.body.at(i, j) != 0) {
        col = j;
        break;
      }
    if (col >= 0) {
      p.pivot(i, col);
      continue;
    }
    for (int r = i; r + 1 < p.rows(); ++r)
      for (int j = 0; j <= p.body.cols(); ++j) p.body.at(r, j) = p.body.at(r + 1, j);
    p.basis.erase(p.basis.begin() + i);
  }

  // Phase 2 on the original columns.
  Program q(p.rows(), n);
  q.basis = p.basis;
  for (int i = 0; i < p.rows(); ++i)
    for (int j = 0; j <= n; ++j)
      q.body.at(i, j) = (j < n) ? p.body.at(i, j) : p.body.rhs(i);
  for (int j = 0; j <= n; ++j) q.cost[static_cast<std::size_t>(j)] = 0;
  for (int j = 0; j < n; ++j) q.cost[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)];
  for (int i = 0; i < q.rows(); ++i) {
    int bj = q.basis[static_cast<std::size_t>(i)];
    Rat cb = c[static_cast<std::size_t>(bj)];
    if (cb == 0) continue;
    for (int j = 0; j <= n; ++j) q.cost[static_cast<std::size_t>(j)] -= cb * q.body.at(i, j);
  }
  Status st = q.iterate();
  if (st == Status::unbounded) return {Status::unbounded, {}, 0};

  StandardResult out;
  out.status = Status::optimal;
  out.x.assign(static_cast<std::size_t>(n), Rat(0));
  for (int i = 0; i < q.rows(); ++i) out.x[static_cast<std::size_t>(q.basis[i])] = q.body.rhs(i);
  out.objective = -q.cost[static_cast<std::size_t>(n)];
  return out;
}

/// A linear program over free variables:
///   optimize <objective, x>  s.t.  <a,x> = r (eq rows), <a,x> <= r (le rows).
struct GeneralProblem {
  int nvars = 0;
  std::vector<LinearRow> eq;
  std::vector<LinearRow> le;
  RatVec objective;  // empty means feasibility only
  bool maximize = false;
};

struct GeneralResult {
  Status status = Status::infeasible;
  RatVec x;
  Rat value = 0;
};

inline GeneralResult solve_general(const GeneralProblem& gp) {
  const int n = gp.nvars;
  const int rows = static_cast<int>(gp.eq.size() + gp.le.size());
  const int cols = 2 * n + static_cast<int>(gp.le.size());
  RatMat a(rows, cols);
  std::vector<Rat> b(static_cast<std::size_t>(rows));
  int r = 0;
  for (const LinearRow& row : gp.eq) {
    detail::require(row.normal.dim() == n, "general LP row dimension mismatch");
    for (int j = 0; j < n; ++j) {
      a.at(r, j) = row.normal[j];
      a.at(r, n + j) = -row.normal[j];
    }
    b[static_cast<std::size_t>(r)] = row.rhs;
    ++r;
  }
  int slack = 0;
  for (const LinearRow& row : gp.le) {
    detail::require(row.normal.dim() == n, "general LP row dimension mismatch");
    for (int j = 0; j < n; ++j) {
      a.at(r, j) = row.normal[j];
      a.at(r, n + j) = -row.normal[j];
    }
    a.at(r, 2 * n + slack) = 1;
    b[static_cast<std::size_t>(r)] = row.rhs;
    ++r;
    ++slack;
  }
  std::vector<Rat> c(static_cast<std::size_t>(cols), Rat(0));
  if (gp.objective.dim() > 0) {
    detail::require(gp.objective.dim() == n, "general LP objective dimension mismatch");
    for (int j = 0; j < n; ++j) {
      Rat cj = gp.maximize ? -gp.objective[j] : gp.objective[j];
      c[static_cast<std::size_t>(j)] = cj;
      c[static_cast<std::size_t>(n + j)] = -cj;
    }
  }
  StandardResult sr = solve_standard(a, b, c);
  GeneralResult out;
  out.status = sr.status;
  if (sr.status != Status::optimal) return out;
  out.x = RatVec(n);
  for (int j = 0; j < n; ++j)
    out.x[j] = sr.x[static_cast<std::size_t>(j)] - sr.x[static_cast<std::size_t>(n + j)];
  out.value = gp.objective.dim() > 0 ? dot(gp.objective, out.x) : Rat(0);
  return out;
}

}  // namespace cpwl::lp
