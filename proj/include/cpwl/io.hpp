#pragma once
// JSON input documents and report serialization. Rationals travel as
// decimal-free strings "p/q" or "p"; schema violations carry the field path.
// Serialization is deterministic: insertion-ordered objects, canonical
// rational strings, sorted index sets.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpwl/minimax.hpp"
#include "cpwl/oracle.hpp"

namespace cpwl::io {

using Json = nlohmann::ordered_json;

inline Rat rat_field(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError(path + ": expected a rational string \"p\" or \"p/q\"");
  try {
    return parse_rat(j.get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline RatVec vec_field(const Json& j, const std::string& path, int expected_dim = -1) {
  if (!j.is_array()) throw ParseError(path + ": expected an array of rational strings");
  RatVec v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<int>(i)] = rat_field(j[i], path + "[" + std::to_string(i) + "]");
  if (expected_dim >= 0 && v.dim() != expected_dim)
    throw ParseError(path + ": expected dimension " + std::to_string(expected_dim) + ", got " +
                     std::to_string(v.dim()));
  return v;
}

inline RatMat mat_field(const Json& j, const std::string& path, int rows, int cols) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw ParseError(path + ": expected " + std::to_string(rows) + " rows");
  RatMat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    RatVec r = vec_field(j[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]", cols);
    for (int c = 0; c < cols; ++c) m.at(i, c) = r[c];
  }
  return m;
}

inline int int_field(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path + ": expected an integer");
  return j.get<int>();
}

inline const Json& require_field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw ParseError(path + ": missing field '" + key + "'");
  return j.at(key);
}

inline void check_keys(const Json& j, std::initializer_list<const char*> allowed,
                       const std::string& path) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known) throw ParseError(path + ": unknown field '" + item.key() + "'");
  }
}

// ---------------------------------------------------------------------------
// Parsers.

/// Accepts either explicit pieces/domain or a "support_vertices" list, which
/// builds theta(z) = max over the vertices of <p, z> with full domain.
inline CpwlFunction parse_theta(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  check_keys(j, {"m", "pieces", "domain", "support_vertices"}, path);
  const int m = int_field(require_field(j, "m", path), path + ".m");
  if (j.contains("support_vertices")) {
    if (j.contains("pieces") || j.contains("domain"))
      throw ParseError(path + ": give either support_vertices or pieces/domain, not both");
    const Json& jv = j.at("support_vertices");
    if (!jv.is_array() || jv.empty())
      throw ParseError(path + ".support_vertices: expected a nonempty array");
    std::vector<RatVec> vertices;
    for (std::size_t i = 0; i < jv.size(); ++i)
      vertices.push_back(
          vec_field(jv[i], path + ".support_vertices[" + std::to_string(i) + "]", m));
    return CpwlFunction::from_support_vertices(vertices);
  }
  std::vector<AffinePiece> pieces;
  const Json& jp = require_field(j, "pieces", path);
  if (!jp.is_array() || jp.empty()) throw ParseError(path + ".pieces: expected a nonempty array");
  for (std::size_t i = 0; i < jp.size(); ++i) {
    std::string pp = path + ".pieces[" + std::to_string(i) + "]";
    check_keys(jp[i], {"a", "alpha"}, pp);
    pieces.push_back({vec_field(require_field(jp[i], "a", pp), pp + ".a", m),
                      rat_field(require_field(jp[i], "alpha", pp), pp + ".alpha")});
  }
  HalfspaceSystem dom(m);
  if (j.contains("domain")) {
    const Json& jd = j.at("domain");
    if (!jd.is_array()) throw ParseError(path + ".domain: expected an array");
    for (std::size_t i = 0; i < jd.size(); ++i) {
      std::string dp = path + ".domain[" + std::to_string(i) + "]";
      check_keys(jd[i], {"d", "beta"}, dp);
      dom.add_inequality(vec_field(require_field(jd[i], "d", dp), dp + ".d", m),
                         rat_field(require_field(jd[i], "beta", dp), dp + ".beta"));
    }
  }
  return CpwlFunction(std::move(pieces), std::move(dom));
}

inline CompositeProblemData parse_composite(const Json& j, const std::string& path) {
  check_keys(j,
             {"kind", "theta", "n", "d", "grad_x_phi0", "grad_w_phi0", "Jx", "Jw", "Hxx_phi0",
              "Hxw_phi0", "Hxx_phi", "Hxw_phi", "zbar", "vbar", "direction"},
             path);
  CpwlFunction theta = parse_theta(require_field(j, "theta", path), path + ".theta");
  const int m = theta.dim();
  const int n = int_field(require_field(j, "n", path), path + ".n");
  const int d = j.contains("d") ? int_field(j.at("d"), path + ".d") : 0;
  auto opt_vec = [&](const char* key, int dim) {
    return j.contains(key) ? vec_field(j.at(key), path + "." + key, dim) : RatVec::zero(dim);
  };
  auto opt_mat = [&](const char* key, int rows, int cols) {
    return j.contains(key) ? mat_field(j.at(key), path + "." + key, rows, cols)
                           : RatMat(rows, cols);
  };
  CompositeProblemData p{std::move(theta),
                         n,
                         d,
                         opt_vec("grad_x_phi0", n),
                         opt_vec("grad_w_phi0", d),
                         mat_field(require_field(j, "Jx", path), path + ".Jx", m, n),
                         opt_mat("Jw", m, d),
                         opt_mat("Hxx_phi0", n, n),
                         opt_mat("Hxw_phi0", n, d),
                         {},
                         {},
                         vec_field(require_field(j, "zbar", path), path + ".zbar", m),
                         vec_field(require_field(j, "vbar", path), path + ".vbar", n)};
  if (j.contains("Hxx_phi")) {
    const Json& hx = j.at("Hxx_phi");
    if (!hx.is_array() || static_cast<int>(hx.size()) != m)
      throw ParseError(path + ".Hxx_phi: expected " + std::to_string(m) + " matrices");
    for (int i = 0; i < m; ++i)
      p.hess_xx.push_back(mat_field(hx[static_cast<std::size_t>(i)],
                                    path + ".Hxx_phi[" + std::to_string(i) + "]", n, n));
  } else {
    p.hess_xx.assign(static_cast<std::size_t>(m), RatMat(n, n));
  }
  if (j.contains("Hxw_phi")) {
    const Json& hw = j.at("Hxw_phi");
    if (!hw.is_array() || static_cast<int>(hw.size()) != m)
      throw ParseError(path + ".Hxw_phi: expected " + std::to_string(m) + " matrices");
    for (int i = 0; i < m; ++i)
      p.hess_xw.push_back(mat_field(hw[static_cast<std::size_t>(i)],
                                    path + ".Hxw_phi[" + std::to_string(i) + "]", n, d));
  } else {
    p.hess_xw.assign(static_cast<std::size_t>(m), RatMat(n, d));
  }
  p.validate();
  return p;
}

inline SmoothTermData parse_term(const Json& j, const std::string& path, int n, int d) {
  check_keys(j, {"grad_x", "grad_w", "Hxx", "Hxw"}, path);
  SmoothTermData t;
  t.grad_x = vec_field(require_field(j, "grad_x", path), path + ".grad_x", n);
  t.grad_w = j.contains("grad_w") ? vec_field(j.at("grad_w"), path + ".grad_w", d)
                                  : RatVec::zero(d);
  t.hess_xx = j.contains("Hxx") ? mat_field(j.at("Hxx"), path + ".Hxx", n, n) : RatMat(n, n);
  t.hess_xw = j.contains("Hxw") ? mat_field(j.at("Hxw"), path + ".Hxw", n, d) : RatMat(n, d);
  return t;
}

inline MinimaxProblemData parse_minimax(const Json& j, const std::string& path) {
  check_keys(j, {"kind", "n", "d", "objectives", "constraints", "Z", "z1", "z2", "vbar"}, path);
  MinimaxProblemData mp;
  mp.n = int_field(require_field(j, "n", path), path + ".n");
  mp.d = j.contains("d") ? int_field(j.at("d"), path + ".d") : 0;
  const Json& jo = require_field(j, "objectives", path);
  if (!jo.is_array() || jo.empty())
    throw ParseError(path + ".objectives: expected a nonempty array");
  for (std::size_t i = 0; i < jo.size(); ++i)
    mp.objectives.push_back(
        parse_term(jo[i], path + ".objectives[" + std::to_string(i) + "]", mp.n, mp.d));
  if (j.contains("constraints")) {
    const Json& jc = j.at("constraints");
    for (std::size_t i = 0; i < jc.size(); ++i)
      mp.constraints.push_back(
          parse_term(jc[i], path + ".constraints[" + std::to_string(i) + "]", mp.n, mp.d));
  }
  mp.constraint_set = HalfspaceSystem(mp.r());
  if (j.contains("Z")) {
    const Json& jz = j.at("Z");
    for (std::size_t i = 0; i < jz.size(); ++i) {
      std::string zp = path + ".Z[" + std::to_string(i) + "]";
      check_keys(jz[i], {"c", "tau"}, zp);
      mp.constraint_set.add_inequality(vec_field(require_field(jz[i], "c", zp), zp + ".c", mp.r()),
                                       rat_field(require_field(jz[i], "tau", zp), zp + ".tau"));
    }
  }
  mp.z1 = vec_field(require_field(j, "z1", path), path + ".z1", mp.l());
  mp.z2 = vec_field(require_field(j, "z2", path), path + ".z2", mp.r());
  mp.vbar = vec_field(require_field(j, "vbar", path), path + ".vbar", mp.n);
  mp.validate();
  return mp;
}

inline QuadraticPoly parse_poly(const Json& j, const std::string& path, int n, int d) {
  check_keys(j, {"const", "gx", "gw", "Axx", "Bxw", "Cww"}, path);
  QuadraticPoly q;
  q.constant = j.contains("const") ? rat_field(j.at("const"), path + ".const") : Rat(0);
  q.gx = j.contains("gx") ? vec_field(j.at("gx"), path + ".gx", n) : RatVec::zero(n);
  q.gw = j.contains("gw") ? vec_field(j.at("gw"), path + ".gw", d) : RatVec::zero(d);
  q.axx = j.contains("Axx") ? mat_field(j.at("Axx"), path + ".Axx", n, n) : RatMat(n, n);
  q.bxw = j.contains("Bxw") ? mat_field(j.at("Bxw"), path + ".Bxw", n, d) : RatMat(n, d);
  q.cww = j.contains("Cww") ? mat_field(j.at("Cww"), path + ".Cww", d, d) : RatMat(d, d);
  q.symmetrize();
  return q;
}

inline QuadraticProblemInstance parse_probe(const Json& j, const std::string& path) {
  check_keys(j,
             {"kind", "theta", "n", "d", "phi0", "phi", "xbar", "wbar", "vbar", "gamma",
              "grid_radius", "grid_count"},
             path);
  CpwlFunction theta = parse_theta(require_field(j, "theta", path), path + ".theta");
  const int m = theta.dim();
  const int n = int_field(require_field(j, "n", path), path + ".n");
  const int d = j.contains("d") ? int_field(j.at("d"), path + ".d") : 0;
  QuadraticProblemInstance inst{std::move(theta),
                                n,
                                d,
                                parse_poly(require_field(j, "phi0", path), path + ".phi0", n, d),
                                {},
                                vec_field(require_field(j, "xbar", path), path + ".xbar", n),
                                j.contains("wbar") ? vec_field(j.at("wbar"), path + ".wbar", d)
                                                   : RatVec::zero(d),
                                vec_field(require_field(j, "vbar", path), path + ".vbar", n),
                                j.contains("gamma") ? rat_field(j.at("gamma"), path + ".gamma")
                                                    : Rat(0)};
  const Json& jp = require_field(j, "phi", path);
  if (!jp.is_array() || static_cast<int>(jp.size()) != m)
    throw ParseError(path + ".phi: expected " + std::to_string(m) + " components");
  for (int i = 0; i < m; ++i)
    inst.components.push_back(
        parse_poly(jp[static_cast<std::size_t>(i)], path + ".phi[" + std::to_string(i) + "]", n, d));
  inst.validate();
  return inst;
}

// ---------------------------------------------------------------------------
// Serializers.

inline Json to_json(const Rat& q) { return rat_str(q); }

inline Json to_json(const RatVec& v) {
  Json a = Json::array();
  for (int i = 0; i < v.dim(); ++i) a.push_back(rat_str(v[i]));
  return a;
}

inline Json to_json(const RatMat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) rows.push_back(to_json(m.row(i)));
  return rows;
}

inline Json to_json(const std::vector<int>& idx) {
  Json a = Json::array();
  for (int i : idx) a.push_back(i);
  return a;
}

inline Json to_json(const std::vector<RatVec>& vs) {
  Json a = Json::array();
  for (const RatVec& v : vs) a.push_back(to_json(v));
  return a;
}

inline Json to_json(const GeneratorSet& g) {
  Json j;
  j["dim"] = g.dim;
  j["points"] = to_json(g.points);
  j["rays"] = to_json(g.rays);
  j["lines"] = to_json(g.lines);
  return j;
}

inline Json to_json(const HalfspaceSystem& h) {
  Json j;
  j["dim"] = h.dim;
  Json eqs = Json::array();
  for (const LinearRow& e : h.equalities)
    eqs.push_back(Json{{"normal", to_json(e.normal)}, {"rhs", rat_str(e.rhs)}});
  Json ineqs = Json::array();
  for (const LinearRow& q : h.inequalities)
    ineqs.push_back(Json{{"normal", to_json(q.normal)}, {"rhs", rat_str(q.rhs)}});
  j["equalities"] = eqs;
  j["inequalities"] = ineqs;
  return j;
}

inline Json to_json(const CpwlFunction& theta) {
  Json j;
  j["m"] = theta.dim();
  Json pieces = Json::array();
  for (const AffinePiece& p : theta.pieces())
    pieces.push_back(Json{{"a", to_json(p.gradient)}, {"alpha", rat_str(p.offset)}});
  j["pieces"] = pieces;
  Json dom = Json::array();
  for (int t = 0; t < theta.row_count(); ++t)
    dom.push_back(Json{{"d", to_json(theta.row_normal(t))}, {"beta", rat_str(theta.row_rhs(t))}});
  j["domain"] = dom;
  return j;
}

inline Json to_json(const SubgradientDecomposition& dec) {
  Json j;
  j["lambda"] = Json::array();
  for (const Rat& c : dec.piece_coeffs) j["lambda"].push_back(rat_str(c));
  j["mu"] = Json::array();
  for (const Rat& c : dec.row_coeffs) j["mu"].push_back(rat_str(c));
  j["J1"] = to_json(dec.piece_support);
  j["J2"] = to_json(dec.row_support);
  j["v1"] = to_json(dec.conv_part);
  j["v2"] = to_json(dec.cone_part);
  return j;
}

inline Json to_json(const IndexQuadruple& q) {
  Json j;
  j["P1"] = to_json(q.core_pieces);
  j["Q1"] = to_json(q.stratum_pieces);
  j["P2"] = to_json(q.core_rows);
  j["Q2"] = to_json(q.stratum_rows);
  Json cert;
  cert["lambda"] = Json::array();
  for (const Rat& c : q.membership.point_coeffs) cert["lambda"].push_back(rat_str(c));
  cert["mu"] = Json::array();
  for (const Rat& c : q.membership.ray_coeffs) cert["mu"].push_back(rat_str(c));
  j["membership_certificate"] = cert;
  j["stratum_witness"] = to_json(q.stratum_witness);
  return j;
}

inline Json to_json(const SecondOrderPiece& piece) {
  Json j;
  j["quadruple"] = to_json(piece.quadruple);
  j["F"] = to_json(piece.value_set);
  j["G"] = to_json(piece.direction_cone);
  return j;
}

inline Json to_json(const StabilityReport& rep) {
  Json j;
  j["soqc"] = rep.soqc;
  j["nd"] = rep.nd;
  j["multiplier_set_nonempty"] = rep.multipliers.nonempty;
  j["multiplier_unique"] = rep.multipliers.unique;
  j["partial_subgradient"] = to_json(rep.multipliers.target);
  if (rep.multipliers.nonempty) j["multiplier_witness"] = to_json(rep.multipliers.witness);
  if (rep.multipliers.second) j["multiplier_second"] = to_json(*rep.multipliers.second);
  if (rep.multiplier) j["multiplier"] = to_json(*rep.multiplier);
  if (rep.subspace) {
    j["ssosc_subspace"] = to_json(rep.subspace->basis);
    j["gamma_pieces"] = to_json(rep.subspace->gamma_pieces);
    j["gamma_rows"] = to_json(rep.subspace->gamma_rows);
  }
  if (rep.ssosc) {
    j["ssosc"] = rep.ssosc->holds;
    Json minors = Json::array();
    for (const Rat& m : rep.ssosc->minors) minors.push_back(rat_str(m));
    j["ssosc_minors"] = minors;
    if (rep.ssosc->violator) j["ssosc_violator"] = to_json(*rep.ssosc->violator);
  }
  if (rep.fully_stable)
    j["fully_stable"] = *rep.fully_stable;
  else
    j["fully_stable"] = nullptr;
  return j;
}

inline Json to_json(const ProbeReport& rep) {
  Json j;
  j["gamma"] = rat_str(rep.gamma);
  j["grid_points"] = rep.grid_points;
  j["multi_valued"] = rep.multi_valued;
  j["base_argmin_is_base"] = rep.base_argmin_is_base;
  j["max_ratio"] = rep.max_ratio ? Json(rat_str(*rep.max_ratio)) : Json(nullptr);
  j["evidence_fully_stable"] = rep.evidence_fully_stable;
  Json pts = Json::array();
  for (const ProbeGridPoint& pt : rep.points) {
    Json p;
    p["w"] = to_json(pt.w);
    p["v"] = to_json(pt.v);
    p["status"] = pt.empty ? "empty" : (pt.single ? "single" : "multiple");
    if (pt.value) p["value"] = rat_str(*pt.value);
    if (pt.single) p["argmin"] = to_json(pt.argmin);
    pts.push_back(std::move(p));
  }
  j["points"] = pts;
  return j;
}

}  // namespace cpwl::io
