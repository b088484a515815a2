#pragma once
// Second-order subdifferential of a CPWL function at (zbar, vbar) as a finite
// union of polyhedral pieces. Each admissible index quadruple
// (P1 ⊆ Q1 ⊆ K, P2 ⊆ Q2 ⊆ I) contributes a value cone F and a direction cone
// G built from the data:
//
//   F = span{a_i - a_j : i,j in P1} + cone{a_i - a_j : (i,j) in (Q1\P1) x P1}
//     + span{d_i : i in P2}         + cone{d_i : i in Q2\P2}
//   G = { u : <a_i - a_j, u> = 0 on P1 pairs, <= 0 on (Q1\P1) x P1,
//             <d_i, u> = 0 on P2,  <= 0 on Q2\P2 }
//
// and the map's value at u is the union of F over pieces whose G contains -u.
// A quadruple is admissible when vbar lies in conv{a_i : P1} + cone{d_i : P2}
// and some point of the domain has active sets exactly (Q1, Q2).

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "cpwl/cpwl_function.hpp"

namespace cpwl {

struct IndexQuadruple {
  std::vector<int> core_pieces;     // P1
  std::vector<int> stratum_pieces;  // Q1
  std::vector<int> core_rows;       // P2
  std::vector<int> stratum_rows;    // Q2
  Multipliers membership;           // certificate for vbar over (P1, P2)
  RatVec stratum_witness;           // point with active sets exactly (Q1, Q2)
};

struct SecondOrderPiece {
  GeneratorSet value_set;         // F
  HalfspaceSystem direction_cone; // G, homogeneous
  IndexQuadruple quadruple;
};

struct SecondOrderMap {
  RatVec zbar;
  RatVec vbar;
  SubgradientDecomposition decomposition;
  std::vector<SecondOrderPiece> pieces;
};

/// System whose solutions are the points with active sets exactly
/// (stratum_pieces, stratum_rows); the inequality rows listed in `strict`
/// must hold strictly for exactness, non-strictly for the stratum closure.
inline std::pair<HalfspaceSystem, std::vector<int>> stratum_system(
    const CpwlFunction& theta, const std::vector<int>& stratum_pieces,
    const std::vector<int>& stratum_rows) {
  HalfspaceSystem sys(theta.dim());
  std::vector<int> strict;
  const int lead = stratum_pieces.front();
  for (std::size_t k = 1; k < stratum_pieces.size(); ++k) {
    int i = stratum_pieces[k];
    sys.add_equality(theta.piece(i).gradient - theta.piece(lead).gradient,
                     theta.piece(i).offset - theta.piece(lead).offset);
  }
  std::vector<bool> in_q1(static_cast<std::size_t>(theta.piece_count()), false);
  for (int i : stratum_pieces) in_q1[static_cast<std::size_t>(i)] = true;
  for (int j = 0; j < theta.piece_count(); ++j) {
    if (in_q1[static_cast<std::size_t>(j)]) continue;
    strict.push_back(static_cast<int>(sys.inequalities.size()));
    sys.add_inequality(theta.piece(j).gradient - theta.piece(lead).gradient,
                       theta.piece(j).offset - theta.piece(lead).offset);
  }
  std::vector<bool> in_q2(static_cast<std::size_t>(theta.row_count()), false);
  for (int i : stratum_rows) in_q2[static_cast<std::size_t>(i)] = true;
  for (int t = 0; t < theta.row_count(); ++t) {
    if (in_q2[static_cast<std::size_t>(t)]) {
      sys.add_equality(theta.row_normal(t), theta.row_rhs(t));
    } else {
      strict.push_back(static_cast<int>(sys.inequalities.size()));
      sys.add_inequality(theta.row_normal(t), theta.row_rhs(t));
    }
  }
  return {std::move(sys), std::move(strict)};
}

namespace detail_so {

inline std::vector<int> mask_to_set(std::uint32_t mask, const std::vector<int>& universe) {
  std::vector<int> out;
  for (std::size_t k = 0; k < universe.size(); ++k)
    if (mask & (1u << k)) out.push_back(universe[k]);
  return out;
}

}  // namespace detail_so

/// All admissible quadruples at (zbar, vbar), in lexicographic order of
/// (P1, Q1, P2, Q2). Enumeration is exponential in |K|+|I| and refuses
/// instances above `max_active`.
inline std::vector<IndexQuadruple> quadruple_family(const CpwlFunction& theta, const RatVec& zbar,
                                                    const RatVec& vbar, int max_active = 12) {
  if (!theta.is_subgradient(zbar, vbar))
    throw PreconditionError("vbar is not a subgradient at zbar");
  ActiveSets act = theta.active_sets(zbar);
  const std::vector<int>& k_set = act.pieces;
  const std::vector<int>& i_set = act.rows;
  if (static_cast<int>(k_set.size() + i_set.size()) > max_active)
    throw PreconditionError("size cap exceeded: |K| + |I| too large for quadruple enumeration");

  const std::uint32_t k_full = (1u << k_set.size()) - 1u;
  const std::uint32_t i_full = i_set.empty() ? 0u : (1u << i_set.size()) - 1u;

  // vbar in conv{a : P1} + cone{d : P2}, once per (P1, P2).
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::optional<Multipliers>> core_cache;
  auto core_cert = [&](std::uint32_t p1, std::uint32_t p2) -> const std::optional<Multipliers>& {
    auto it = core_cache.find({p1, p2});
    if (it != core_cache.end()) return it->second;
    std::optional<Multipliers> cert;
    if (p1 != 0) {  // conv of nothing is empty
      std::vector<RatVec> points, rays;
      for (int i : detail_so::mask_to_set(p1, k_set)) points.push_back(theta.piece(i).gradient);
      for (int t : detail_so::mask_to_set(p2, i_set)) rays.push_back(theta.row_normal(t));
      cert = generator_membership(vbar, points, rays, {});
    }
    return core_cache.emplace(std::make_pair(p1, p2), std::move(cert)).first->second;
  };

  // Stratum nonemptiness, once per (Q1, Q2).
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::optional<RatVec>> stratum_cache;
  auto stratum_witness = [&](std::uint32_t q1, std::uint32_t q2) -> const std::optional<RatVec>& {
    auto it = stratum_cache.find({q1, q2});
    if (it != stratum_cache.end()) return it->second;
    auto [sys, strict] =
        stratum_system(theta, detail_so::mask_to_set(q1, k_set), detail_so::mask_to_set(q2, i_set));
    return stratum_cache.emplace(std::make_pair(q1, q2), feasible_point(sys, strict))
        .first->second;
  };

  std::vector<IndexQuadruple> family;
  for (std::uint32_t p1 = 1; p1 <= k_full; ++p1) {
    for (std::uint32_t p2 = 0;; ++p2) {
      std::uint32_t p2m = p2 & i_full;
      if (p2m == p2) {
        const std::optional<Multipliers>& cert = core_cert(p1, p2);
        if (cert) {
          // Supersets Q1 ⊇ P1, Q2 ⊇ P2 with a nonempty stratum.
          for (std::uint32_t q1 = p1;; q1 = (q1 + 1) | p1) {
            if ((q1 & k_full) == q1) {
              for (std::uint32_t q2 = p2;; q2 = (q2 + 1) | p2) {
                if ((q2 & i_full) == q2) {
                  const std::optional<RatVec>& witness = stratum_witness(q1, q2);
                  if (witness) {
                    IndexQuadruple q;
                    q.core_pieces = detail_so::mask_to_set(p1, k_set);
                    q.stratum_pieces = detail_so::mask_to_set(q1, k_set);
                    q.core_rows = detail_so::mask_to_set(p2, i_set);
                    q.stratum_rows = detail_so::mask_to_set(q2, i_set);
                    q.membership = *cert;
                    q.stratum_witness = *witness;
                    family.push_back(std::move(q));
                  }
                }
                if (q2 >= i_full) break;
              }
            }
            if (q1 >= k_full) break;
          }
        }
      }
      if (p2 >= i_full) break;
    }
  }
  std::sort(family.begin(), family.end(), [](const IndexQuadruple& a, const IndexQuadruple& b) {
    if (a.core_pieces != b.core_pieces) return a.core_pieces < b.core_pieces;
    if (a.stratum_pieces != b.stratum_pieces) return a.stratum_pieces < b.stratum_pieces;
    if (a.core_rows != b.core_rows) return a.core_rows < b.core_rows;
    return a.stratum_rows < b.stratum_rows;
  });
  return family;
}

/// The (F, G) pair of one quadruple.
inline SecondOrderPiece build_piece(const CpwlFunction& theta, const IndexQuadruple& q) {
  SecondOrderPiece piece;
  piece.quadruple = q;
  piece.value_set = GeneratorSet(theta.dim());
  piece.direction_cone = HalfspaceSystem(theta.dim());

  std::vector<bool> in_p1(static_cast<std::size_t>(theta.piece_count()), false);
  for (int i : q.core_pieces) in_p1[static_cast<std::size_t>(i)] = true;
  std::vector<bool> in_p2(static_cast<std::size_t>(theta.row_count()), false);
  for (int i : q.core_rows) in_p2[static_cast<std::size_t>(i)] = true;

  for (std::size_t x = 0; x < q.core_pieces.size(); ++x)
    for (std::size_t y = x + 1; y < q.core_pieces.size(); ++y) {
      RatVec diff =
          theta.piece(q.core_pieces[x]).gradient - theta.piece(q.core_pieces[y]).gradient;
      piece.value_set.lines.push_back(diff);
      piece.direction_cone.add_equality(diff, 0);
    }
  for (int i : q.stratum_pieces) {
    if (in_p1[static_cast<std::size_t>(i)]) continue;
    for (int j : q.core_pieces) {
      RatVec diff = theta.piece(i).gradient - theta.piece(j).gradient;
      piece.value_set.rays.push_back(diff);
      piece.direction_cone.add_inequality(diff, 0);
    }
  }
  for (int i : q.core_rows) {
    piece.value_set.lines.push_back(theta.row_normal(i));
    piece.direction_cone.add_equality(theta.row_normal(i), 0);
  }
  for (int i : q.stratum_rows) {
    if (in_p2[static_cast<std::size_t>(i)]) continue;
    piece.value_set.rays.push_back(theta.row_normal(i));
    piece.direction_cone.add_inequality(theta.row_normal(i), 0);
  }
  return piece;
}

inline SecondOrderMap second_order_map(const CpwlFunction& theta, const RatVec& zbar,
                                       const RatVec& vbar, int max_active = 12) {
  SecondOrderMap map;
  map.zbar = zbar;
  map.vbar = vbar;
  map.decomposition = theta.decompose_subgradient(zbar, vbar);
  for (const IndexQuadruple& q : quadruple_family(theta, zbar, vbar, max_active))
    map.pieces.push_back(build_piece(theta, q));
  return map;
}

/// Value of the map at u: the F-sets of all pieces whose direction cone
/// contains -u. Empty result means the value is the empty set.
inline std::vector<GeneratorSet> eval_second_order(const SecondOrderMap& map, const RatVec& u) {
  std::vector<GeneratorSet> out;
  for (const SecondOrderPiece& piece : map.pieces)
    if (piece.direction_cone.contains(-u)) out.push_back(piece.value_set);
  return out;
}

/// span{a_i - a_j : i,j in K} + span{d_i : i in I} as a canonical basis; equals
/// the value of the second-order map at 0 and the subspace parallel to
/// aff(subdifferential), for every admissible vbar.
inline std::vector<RatVec> value_at_zero(const CpwlFunction& theta, const RatVec& zbar,
                                         const RatVec& vbar) {
  if (!theta.is_subgradient(zbar, vbar))
    throw PreconditionError("vbar is not a subgradient at zbar");
  ActiveSets act = theta.active_sets(zbar);
  std::vector<RatVec> gens;
  for (std::size_t x = 0; x < act.pieces.size(); ++x)
    for (std::size_t y = x + 1; y < act.pieces.size(); ++y)
      gens.push_back(theta.piece(act.pieces[x]).gradient - theta.piece(act.pieces[y]).gradient);
  for (int i : act.rows) gens.push_back(theta.row_normal(i));
  return span_basis(gens, theta.dim());
}

struct DomainSubspace {
  std::vector<RatVec> basis;      // dom of the second-order map (a subspace)
  std::vector<int> gamma_pieces;  // Γ(J1) ⊆ K
  std::vector<int> gamma_rows;    // Γ(J2) ⊆ I
};

/// Validates that `dec` is a decomposition of vbar at zbar: nonnegative
/// multipliers supported on the active sets, piece part summing to one, exact
/// reconstruction.
inline void decomposition_check(const CpwlFunction& theta, const ActiveSets& act,
                                const SubgradientDecomposition& dec, const RatVec& vbar) {
  detail::require(static_cast<int>(dec.piece_coeffs.size()) == theta.piece_count() &&
                      static_cast<int>(dec.row_coeffs.size()) == theta.row_count(),
                  "decomposition shape mismatch");
  Rat total = 0;
  RatVec sum = RatVec::zero(theta.dim());
  for (int i = 0; i < theta.piece_count(); ++i) {
    const Rat& c = dec.piece_coeffs[static_cast<std::size_t>(i)];
    if (c < 0) throw PreconditionError("negative piece multiplier in decomposition");
    if (c > 0 && std::find(act.pieces.begin(), act.pieces.end(), i) == act.pieces.end())
      throw PreconditionError("decomposition supported outside the active pieces");
    total += c;
    sum += c * theta.piece(i).gradient;
  }
  if (total != 1) throw PreconditionError("piece multipliers must sum to one");
  for (int t = 0; t < theta.row_count(); ++t) {
    const Rat& c = dec.row_coeffs[static_cast<std::size_t>(t)];
    if (c < 0) throw PreconditionError("negative row multiplier in decomposition");
    if (c > 0 && std::find(act.rows.begin(), act.rows.end(), t) == act.rows.end())
      throw PreconditionError("decomposition supported outside the tight rows");
    sum += c * theta.row_normal(t);
  }
  if (sum != vbar) throw PreconditionError("decomposition does not reconstruct the subgradient");
}

/// Γ-sets and the domain subspace { u : <a_i - a_j, u> = 0 on Γ(J1) pairs,
/// <d_t, u> = 0 on Γ(J2) }. "For all u in G" is decided on the lineality basis
/// and extreme rays of the polyhedral cone G(J1,K; J2,I).
inline DomainSubspace domain_subspace(const CpwlFunction& theta, const RatVec& zbar,
                                      const RatVec& vbar, const SubgradientDecomposition& dec) {
  ActiveSets act = theta.active_sets(zbar);
  decomposition_check(theta, act, dec, vbar);
  IndexQuadruple gq;
  gq.core_pieces = dec.piece_support;
  gq.stratum_pieces = act.pieces;
  gq.core_rows = dec.row_support;
  gq.stratum_rows = act.rows;
  SecondOrderPiece gamma_piece = build_piece(theta, gq);
  ConeGenerators g = dd_cone(gamma_piece.direction_cone);

  auto vanishes_on_g = [&](const RatVec& functional) {
    for (const RatVec& l : g.lines)
      if (dot(functional, l) != 0) return false;
    for (const RatVec& r : g.rays)
      if (dot(functional, r) != 0) return false;
    return true;
  };

  DomainSubspace out;
  for (int i : act.pieces) {
    bool in_gamma = true;
    for (int j : dec.piece_support)
      if (!vanishes_on_g(theta.piece(i).gradient - theta.piece(j).gradient)) {
        in_gamma = false;
        break;
      }
    if (in_gamma) out.gamma_pieces.push_back(i);
  }
  for (int t : act.rows)
    if (vanishes_on_g(theta.row_normal(t))) out.gamma_rows.push_back(t);

  std::vector<RatVec> rows;
  for (std::size_t x = 0; x < out.gamma_pieces.size(); ++x)
    for (std::size_t y = x + 1; y < out.gamma_pieces.size(); ++y)
      rows.push_back(theta.piece(out.gamma_pieces[x]).gradient -
                     theta.piece(out.gamma_pieces[y]).gradient);
  for (int t : out.gamma_rows) rows.push_back(theta.row_normal(t));
  out.basis = rows.empty() ? orthogonal_complement({}, theta.dim())
                           : kernel_basis(RatMat::from_rows(rows, theta.dim()));
  return out;
}

}  // namespace cpwl
