#pragma once
// Convex piecewise linear functions in max-of-affine form with a polyhedral
// domain:
//
//   theta(z) = max_i ( <a_i, z> - alpha_i )  on  { z : <d_i, z> <= beta_i },
//              +infinity outside.
//
// Provides values, active index sets, the subdifferential
// conv{a_i : i active} + cone{d_i : i tight}, the singular subdifferential,
// and exact maximal-support subgradient decompositions.

#include <optional>
#include <utility>
#include <vector>

#include "cpwl/polyhedra.hpp"

namespace cpwl {

struct AffinePiece {
  RatVec gradient;  // a_i
  Rat offset;       // alpha_i
};

/// Active data at a point: maximizing pieces and tight domain rows.
struct ActiveSets {
  std::vector<int> pieces;  // K(z)
  std::vector<int> rows;    // I(z)
  RatVec point;
};

/// v = conv_part + cone_part with conv_part = sum lambda_i a_i (lambda >= 0,
/// sum 1, supported on the active pieces) and cone_part = sum mu_i d_i
/// (mu >= 0, supported on the tight rows). Supports are maximal over all
/// valid decompositions.
struct SubgradientDecomposition {
  std::vector<Rat> piece_coeffs;  // lambda, length l
  std::vector<Rat> row_coeffs;    // mu, length p
  std::vector<int> piece_support; // J1 = { i : lambda_i > 0 }
  std::vector<int> row_support;   // J2 = { i : mu_i > 0 }
  RatVec conv_part;               // v1
  RatVec cone_part;               // v2
};

class CpwlFunction {
 public:
  /// Validates shapes and rejects an empty domain (improper function).
  CpwlFunction(std::vector<AffinePiece> pieces, HalfspaceSystem domain)
      : pieces_(std::move(pieces)), domain_(std::move(domain)) {
    detail::require(!pieces_.empty(), "a CPWL function needs at least one piece");
    dim_ = pieces_.front().gradient.dim();
    for (const AffinePiece& p : pieces_)
      detail::require(p.gradient.dim() == dim_, "piece dimension mismatch");
    detail::require(domain_.dim == dim_, "domain dimension mismatch");
    detail::require(domain_.equalities.empty(),
                    "domain must be inequality-only (split equalities into two rows)");
    if (!feasible_point(domain_).has_value())
      throw std::invalid_argument("empty domain: the function would be +infinity everywhere");
  }

  /// theta(z) = sup over the vertex list: pieces (p_i, 0), full domain.
  static CpwlFunction from_support_vertices(const std::vector<RatVec>& vertices) {
    detail::require(!vertices.empty(), "empty vertex list");
    std::vector<AffinePiece> pieces;
    for (const RatVec& v : vertices) pieces.push_back({v, Rat(0)});
    return CpwlFunction(std::move(pieces), HalfspaceSystem(vertices.front().dim()));
  }

  int dim() const { return dim_; }
  int piece_count() const { return static_cast<int>(pieces_.size()); }
  int row_count() const { return static_cast<int>(domain_.inequalities.size()); }
  const std::vector<AffinePiece>& pieces() const { return pieces_; }
  const AffinePiece& piece(int i) const { return pieces_[static_cast<std::size_t>(i)]; }
  const HalfspaceSystem& domain() const { return domain_; }
  const RatVec& row_normal(int i) const {
    return domain_.inequalities[static_cast<std::size_t>(i)].normal;
  }
  const Rat& row_rhs(int i) const {
    return domain_.inequalities[static_cast<std::size_t>(i)].rhs;
  }

  bool in_domain(const RatVec& z) const { return domain_.contains(z); }

  /// Value at z; nullopt encodes +infinity.
  std::optional<Rat> evaluate(const RatVec& z) const {
    detail::require(z.dim() == dim_, "evaluation point dimension mismatch");
    if (!in_domain(z)) return std::nullopt;
    Rat best = piece_value(0, z);
    for (int i = 1; i < piece_count(); ++i) {
      Rat v = piece_value(i, z);
      if (v > best) best = v;
    }
    return best;
  }

  Rat piece_value(int i, const RatVec& z) const {
    return dot(pieces_[static_cast<std::size_t>(i)].gradient, z) -
           pieces_[static_cast<std::size_t>(i)].offset;
  }

  ActiveSets active_sets(const RatVec& z) const {
    std::optional<Rat> value = evaluate(z);
    if (!value) throw PreconditionError("point outside the domain");
    ActiveSets a;
    a.point = z;
    for (int i = 0; i < piece_count(); ++i)
      if (piece_value(i, z) == *value) a.pieces.push_back(i);
    for (int i = 0; i < row_count(); ++i)
      if (dot(row_normal(i), z) == row_rhs(i)) a.rows.push_back(i);
    return a;
  }

  /// conv{a_i : i in K(z)} + cone{d_i : i in I(z)}.
  GeneratorSet subdifferential(const RatVec& z) const {
    ActiveSets a = active_sets(z);
    GeneratorSet g(dim_);
    for (int i : a.pieces) g.points.push_back(piece(i).gradient);
    for (int i : a.rows) g.rays.push_back(row_normal(i));
    return g;
  }

  /// cone{d_i : i in I(z)} — the normal cone to the domain.
  GeneratorSet singular_subdifferential(const RatVec& z) const {
    ActiveSets a = active_sets(z);
    GeneratorSet g(dim_);
    for (int i : a.rows) g.rays.push_back(row_normal(i));
    return g;
  }

  bool is_subgradient(const RatVec& z, const RatVec& v) const {
    return generator_membership(v, subdifferential(z)).has_value();
  }

  /// Maximal-support (relative-interior) decomposition of v in the
  /// subdifferential at z. One LP per active index decides whether that
  /// multiplier can be strictly positive; averaging the positive witnesses
  /// realizes all of them at once.
  SubgradientDecomposition decompose_subgradient(const RatVec& z, const RatVec& v) const {
    ActiveSets act = active_sets(z);
    const int nk = static_cast<int>(act.pieces.size());
    const int ni = static_cast<int>(act.rows.size());

    // Feasibility system over (lambda on K, mu on I, t): the witness for index
    // j maximizes min(coeff_j, 1) through the extra slack t.
    auto witness_for = [&](int target) -> std::optional<std::vector<Rat>> {
      lp::GeneralProblem gp;
      gp.nvars = nk + ni + 1;
      const int tvar = nk + ni;
      for (int row = 0; row < dim_; ++row) {
        RatVec coeff(gp.nvars);
        for (int j = 0; j < nk; ++j) coeff[j] = piece(act.pieces[j]).gradient[row];
        for (int j = 0; j < ni; ++j) coeff[nk + j] = row_normal(act.rows[j])[row];
        gp.eq.push_back({std::move(coeff), v[row]});
      }
      {
        RatVec ones(gp.nvars);
        for (int j = 0; j < nk; ++j) ones[j] = 1;
        gp.eq.push_back({std::move(ones), Rat(1)});
      }
      for (int j = 0; j < nk + ni; ++j) {
        RatVec neg(gp.nvars);
        neg[j] = -1;
        gp.le.push_back({std::move(neg), Rat(0)});
      }
      if (target >= 0) {
        RatVec cap(gp.nvars);
        cap[tvar] = 1;
        cap[target] = -1;
        gp.le.push_back({std::move(cap), Rat(0)});  // t <= coeff_target
        RatVec one(gp.nvars);
        one[tvar] = 1;
        gp.le.push_back({std::move(one), Rat(1)});  // t <= 1
        gp.objective = RatVec(gp.nvars);
        gp.objective[tvar] = 1;
        gp.maximize = true;
      }
      lp::GeneralResult res = lp::solve_general(gp);
      if (res.status != lp::Status::optimal) return std::nullopt;
      if (target >= 0 && res.value <= 0) return std::nullopt;
      std::vector<Rat> out;
      for (int j = 0; j < nk + ni; ++j) out.push_back(res.x[j]);
      return out;
    };

    if (!witness_for(-1).has_value())
      throw PreconditionError("vector is not a subgradient at the given point");

    std::vector<std::vector<Rat>> witnesses;
    for (int j = 0; j < nk + ni; ++j) {
      std::optional<std::vector<Rat>> w = witness_for(j);
      if (w) witnesses.push_back(std::move(*w));
    }
    SubgradientDecomposition dec;
    dec.piece_coeffs.assign(static_cast<std::size_t>(piece_count()), Rat(0));
    dec.row_coeffs.assign(static_cast<std::size_t>(row_count()), Rat(0));
    Rat inv(1, static_cast<long long>(witnesses.size()));
    for (const std::vector<Rat>& w : witnesses) {
      for (int j = 0; j < nk; ++j) dec.piece_coeffs[static_cast<std::size_t>(act.pieces[j])] += inv * w[j];
      for (int j = 0; j < ni; ++j) dec.row_coeffs[static_cast<std::size_t>(act.rows[j])] += inv * w[nk + j];
    }
    dec.conv_part = RatVec::zero(dim_);
    dec.cone_part = RatVec::zero(dim_);
    for (int i = 0; i < piece_count(); ++i)
      if (dec.piece_coeffs[static_cast<std::size_t>(i)] > 0) {
        dec.piece_support.push_back(i);
        dec.conv_part += dec.piece_coeffs[static_cast<std::size_t>(i)] * piece(i).gradient;
      }
    for (int i = 0; i < row_count(); ++i)
      if (dec.row_coeffs[static_cast<std::size_t>(i)] > 0) {
        dec.row_support.push_back(i);
        dec.cone_part += dec.row_coeffs[static_cast<std::size_t>(i)] * row_normal(i);
      }
    if (dec.conv_part + dec.cone_part != v)
      throw InternalCheckError("subgradient decomposition failed to reconstruct the input");
    return dec;
  }

  /// Radius (sup norm) inside which active sets can only shrink: inactive
  /// pieces keep losing the max and slack rows stay slack. Computed from the
  /// smallest positive gap; 1 when nothing is inactive.
  Rat active_set_radius(const RatVec& z) const {
    ActiveSets act = active_sets(z);
    Rat value = *evaluate(z);
    std::optional<Rat> best;
    auto consider = [&](const Rat& gap, const Rat& speed) {
      if (speed == 0) return;
      Rat r = gap / speed;
      if (!best || r < *best) best = r;
    };
    for (int j = 0; j < piece_count(); ++j) {
      Rat gap = value - piece_value(j, z);
      if (gap == 0) continue;
      for (int k : act.pieces) consider(gap, (piece(j).gradient - piece(k).gradient).l1_norm());
    }
    for (int i = 0; i < row_count(); ++i) {
      Rat slackness = row_rhs(i) - dot(row_normal(i), z);
      if (slackness == 0) continue;
      consider(slackness, row_normal(i).l1_norm());
    }
    return best ? *best / 2 : Rat(1);
  }

 private:
  std::vector<AffinePiece> pieces_;
  HalfspaceSystem domain_;
  int dim_ = 0;
};

}  // namespace cpwl
