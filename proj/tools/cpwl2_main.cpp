// cpwl2 command-line front end: one JSON input document, one subcommand, one
// JSON report on stdout. Exit codes: 0 success, 1 invalid input,
// 2 precondition failure, 3 internal-consistency failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "cpwl/io.hpp"

namespace {

using cpwl::io::Json;

struct Options {
  std::string command;
  std::string input_path;
  std::string point;
  std::string subgradient;
  std::string direction;
  std::string format = "json";
  std::uint64_t seed = 0;
  int max_indices = 12;
  int samples = 100;
};

cpwl::RatVec parse_csv_vec(const std::string& text, const std::string& what) {
  std::vector<cpwl::Rat> vals;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) vals.push_back(cpwl::parse_rat(item));
  if (vals.empty()) throw cpwl::ParseError(what + ": empty vector");
  cpwl::RatVec v(static_cast<int>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) v[static_cast<int>(i)] = vals[i];
  return v;
}

Json load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cpwl::ParseError("cannot open input file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw cpwl::ParseError(std::string("invalid JSON: ") + e.what());
  }
}

std::string doc_kind(const Json& doc) {
  if (!doc.contains("kind") || !doc.at("kind").is_string())
    throw cpwl::ParseError("document: missing string field 'kind'");
  return doc.at("kind").get<std::string>();
}

void require_kind(const Json& doc, const std::string& expected) {
  if (doc_kind(doc) != expected)
    throw cpwl::ParseError("document kind '" + doc_kind(doc) + "' does not match the command (needs '" +
                           expected + "')");
}

cpwl::RatVec query_vec(const Options& opt, const Json& doc, const std::string& flag_value,
                       const std::string& key, int dim) {
  if (!flag_value.empty()) {
    cpwl::RatVec v = parse_csv_vec(flag_value, key);
    if (v.dim() != dim)
      throw cpwl::ParseError(key + ": expected dimension " + std::to_string(dim));
    return v;
  }
  if (doc.contains(key)) return cpwl::io::vec_field(doc.at(key), "document." + key, dim);
  throw cpwl::ParseError("missing " + key + " (give --" + key + " or a document field)");
  (void)opt;
}

/// Seeded direction family: the origin, signed axes, then random rationals.
std::vector<cpwl::RatVec> direction_family(int dim, int count, std::uint64_t seed) {
  std::vector<cpwl::RatVec> dirs;
  dirs.push_back(cpwl::RatVec::zero(dim));
  for (int i = 0; i < dim; ++i) {
    dirs.push_back(cpwl::RatVec::unit(dim, i));
    dirs.push_back(-cpwl::RatVec::unit(dim, i));
  }
  cpwl::SplitMix64 rng(seed);
  while (static_cast<int>(dirs.size()) < count) {
    cpwl::RatVec d(dim);
    for (int i = 0; i < dim; ++i) d[i] = rng.next_rat(4);
    if (!d.is_zero()) dirs.push_back(std::move(d));
  }
  return dirs;
}

Json run_command(const Options& opt) {
  Json doc = load_document(opt.input_path);
  Json report;
  report["schema"] = "cpwl2-report/1";
  report["command"] = opt.command;
  report["input"] = doc;

  auto theta_of = [&]() {
    require_kind(doc, "cpwl-query");
    cpwl::io::check_keys(doc, {"kind", "theta", "point", "subgradient", "direction"}, "document");
    return cpwl::io::parse_theta(cpwl::io::require_field(doc, "theta", "document"),
                                 "document.theta");
  };

  if (opt.command == "eval") {
    cpwl::CpwlFunction theta = theta_of();
    cpwl::RatVec z = query_vec(opt, doc, opt.point, "point", theta.dim());
    std::optional<cpwl::Rat> value = theta.evaluate(z);
    report["value"] = value ? Json(cpwl::rat_str(*value)) : Json("inf");
    if (value) {
      cpwl::ActiveSets act = theta.active_sets(z);
      report["active_pieces"] = cpwl::io::to_json(act.pieces);
      report["active_rows"] = cpwl::io::to_json(act.rows);
    }
  } else if (opt.command == "subdiff") {
    cpwl::CpwlFunction theta = theta_of();
    cpwl::RatVec z = query_vec(opt, doc, opt.point, "point", theta.dim());
    cpwl::ActiveSets act = theta.active_sets(z);
    report["active_pieces"] = cpwl::io::to_json(act.pieces);
    report["active_rows"] = cpwl::io::to_json(act.rows);
    report["subdifferential"] = cpwl::io::to_json(theta.subdifferential(z));
    report["singular_subdifferential"] = cpwl::io::to_json(theta.singular_subdifferential(z));
  } else if (opt.command == "d2") {
    cpwl::CpwlFunction theta = theta_of();
    cpwl::RatVec z = query_vec(opt, doc, opt.point, "point", theta.dim());
    cpwl::RatVec v = query_vec(opt, doc, opt.subgradient, "subgradient", theta.dim());
    cpwl::SecondOrderMap map = cpwl::second_order_map(theta, z, v, opt.max_indices);
    report["decomposition"] = cpwl::io::to_json(map.decomposition);
    Json pieces = Json::array();
    for (const cpwl::SecondOrderPiece& piece : map.pieces)
      pieces.push_back(cpwl::io::to_json(piece));
    report["pieces"] = pieces;
    if (!opt.direction.empty() || doc.contains("direction")) {
      cpwl::RatVec u = query_vec(opt, doc, opt.direction, "direction", theta.dim());
      std::vector<cpwl::GeneratorSet> value = cpwl::eval_second_order(map, u);
      report["direction"] = cpwl::io::to_json(u);
      report["value_empty"] = value.empty();
      Json sets = Json::array();
      for (const cpwl::GeneratorSet& g : value) sets.push_back(cpwl::io::to_json(g));
      report["value"] = sets;
    }
  } else if (opt.command == "d2zero") {
    cpwl::CpwlFunction theta = theta_of();
    cpwl::RatVec z = query_vec(opt, doc, opt.point, "point", theta.dim());
    cpwl::RatVec v = query_vec(opt, doc, opt.subgradient, "subgradient", theta.dim());
    report["basis"] = cpwl::io::to_json(cpwl::value_at_zero(theta, z, v));
  } else if (opt.command == "d2dom") {
    cpwl::CpwlFunction theta = theta_of();
    cpwl::RatVec z = query_vec(opt, doc, opt.point, "point", theta.dim());
    cpwl::RatVec v = query_vec(opt, doc, opt.subgradient, "subgradient", theta.dim());
    cpwl::SubgradientDecomposition dec = theta.decompose_subgradient(z, v);
    cpwl::DomainSubspace dom = cpwl::domain_subspace(theta, z, v, dec);
    report["decomposition"] = cpwl::io::to_json(dec);
    report["gamma_pieces"] = cpwl::io::to_json(dom.gamma_pieces);
    report["gamma_rows"] = cpwl::io::to_json(dom.gamma_rows);
    report["basis"] = cpwl::io::to_json(dom.basis);
  } else if (opt.command == "reduce") {
    cpwl::CpwlFunction theta = theta_of();
    cpwl::RatVec z = query_vec(opt, doc, opt.point, "point", theta.dim());
    cpwl::ReductionResult red = cpwl::build_reduction(theta, z);
    report["s"] = red.reduced_dim;
    report["shift"] = cpwl::io::to_json(red.shift);
    report["B"] = cpwl::io::to_json(red.projection);
    report["radius"] = cpwl::rat_str(red.radius);
    report["theta_reduced"] = cpwl::io::to_json(red.reduced);
    report["verified"] = cpwl::verify_reduction(theta, red, opt.samples, opt.seed);
    report["samples"] = opt.samples;
  } else if (opt.command == "soqc") {
    require_kind(doc, "composite");
    cpwl::CompositeProblemData p = cpwl::io::parse_composite(doc, "document");
    bool soqc = cpwl::soqc_check(p);
    cpwl::ReductionResult red = cpwl::build_reduction(p.theta, p.zbar);
    report["soqc"] = soqc;
    report["nd"] = cpwl::nd_check(p, red);
  } else if (opt.command == "stability") {
    require_kind(doc, "composite");
    cpwl::CompositeProblemData p = cpwl::io::parse_composite(doc, "document");
    report["report"] = cpwl::io::to_json(cpwl::full_stability_verdict(p, opt.max_indices));
  } else if (opt.command == "chainrule") {
    require_kind(doc, "composite");
    cpwl::CompositeProblemData p = cpwl::io::parse_composite(doc, "document");
    cpwl::RatVec u = query_vec(opt, doc, opt.direction, "direction", p.n);
    std::vector<cpwl::GeneratorSet> sets = cpwl::chain_rule_eval(p, u, opt.max_indices);
    report["direction"] = cpwl::io::to_json(u);
    report["value_empty"] = sets.empty();
    Json out = Json::array();
    for (const cpwl::GeneratorSet& g : sets) out.push_back(cpwl::io::to_json(g));
    report["value"] = out;
  } else if (opt.command == "minimax") {
    require_kind(doc, "minimax");
    cpwl::MinimaxProblemData mp = cpwl::io::parse_minimax(doc, "document");
    cpwl::MinimaxKkt kkt = cpwl::minimax_kkt(mp);
    report["nd"] = cpwl::minimax_nd_check(mp);
    report["lambda"] = cpwl::io::to_json(kkt.lambda);
    report["row_multipliers"] = cpwl::io::to_json(kkt.row_multipliers);
    report["normal_vector"] = cpwl::io::to_json(kkt.normal_vector);
    report["multiplier_unique"] = kkt.unique;
    report["report"] = cpwl::io::to_json(cpwl::minimax_verdict(mp, opt.max_indices));
    report["composite_cross_check"] = true;  // minimax_verdict asserts agreement
  } else if (opt.command == "oracle-check") {
    cpwl::CpwlFunction theta = theta_of();
    std::vector<cpwl::GraphPiece> pieces = cpwl::graph_pieces(theta, opt.max_indices);
    std::vector<cpwl::RatVec> dirs = direction_family(theta.dim(), 20, opt.seed);
    int points_checked = 0;
    bool agree = true;
    auto check_point = [&](const cpwl::RatVec& z, const cpwl::RatVec& v) {
      std::vector<cpwl::OracleCone> cones = cpwl::limiting_normal_cone(theta, z, v, pieces);
      cpwl::SecondOrderMap map = cpwl::second_order_map(theta, z, v, opt.max_indices);
      for (const cpwl::RatVec& u : dirs) {
        std::vector<cpwl::HalfspaceSystem> formula;
        for (const cpwl::GeneratorSet& g : cpwl::eval_second_order(map, u))
          formula.push_back(cpwl::generators_to_halfspaces(g));
        std::vector<cpwl::HalfspaceSystem> oracle =
            cpwl::second_subdiff(theta, z, v, u, cones);
        if (!cpwl::unions_equal(formula, oracle)) agree = false;
      }
      ++points_checked;
    };
    if (!opt.point.empty() || doc.contains("point")) {
      cpwl::RatVec z = query_vec(opt, doc, opt.point, "point", theta.dim());
      cpwl::RatVec v = query_vec(opt, doc, opt.subgradient, "subgradient", theta.dim());
      check_point(z, v);
    } else {
      for (const cpwl::GraphPiece& piece : pieces) {
        auto [sys, strict] = cpwl::stratum_system(theta, piece.stratum_pieces, piece.stratum_rows);
        std::optional<cpwl::RatVec> z = cpwl::feasible_point(sys, strict);
        if (!z) continue;
        cpwl::GeneratorSet sub = theta.subdifferential(*z);
        cpwl::RatVec centroid = cpwl::RatVec::zero(theta.dim());
        for (const cpwl::RatVec& p : sub.points) centroid += p;
        centroid *= cpwl::Rat(1, static_cast<long long>(sub.points.size()));
        check_point(*z, centroid);
        if (!sub.rays.empty()) {
          cpwl::RatVec shifted = centroid;
          for (const cpwl::RatVec& r : sub.rays) shifted += r;
          check_point(*z, shifted);
        }
      }
    }
    report["agreement"] = agree;
    report["strata"] = static_cast<int>(pieces.size());
    report["points_checked"] = points_checked;
    report["directions_per_point"] = static_cast<int>(dirs.size());
  } else if (opt.command == "probe") {
    require_kind(doc, "quadratic-probe");
    cpwl::QuadraticProblemInstance inst = cpwl::io::parse_probe(doc, "document");
    cpwl::Rat radius = doc.contains("grid_radius")
                           ? cpwl::io::rat_field(doc.at("grid_radius"), "document.grid_radius")
                           : cpwl::Rat(1, 4);
    int count = doc.contains("grid_count")
                    ? cpwl::io::int_field(doc.at("grid_count"), "document.grid_count")
                    : 9;
    report["probe"] = cpwl::io::to_json(cpwl::full_stability_probe(inst, radius, count));
  } else {
    throw cpwl::ParseError("unknown command '" + opt.command + "'");
  }
  return report;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"exact second-order analysis of convex piecewise linear functions"};
  app.require_subcommand(1);
  static const std::vector<std::string> commands = {
      "eval", "subdiff", "d2",       "d2dom",  "d2zero",       "reduce",
      "soqc", "stability", "chainrule", "minimax", "oracle-check", "probe"};
  for (const std::string& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--input", opt.input_path, "input JSON document")->required();
    sub->add_option("--point", opt.point, "query point, comma-separated rationals");
    sub->add_option("--subgradient", opt.subgradient, "subgradient, comma-separated rationals");
    sub->add_option("--direction,-u", opt.direction, "direction, comma-separated rationals");
    sub->add_option("--seed", opt.seed, "seed for sampled checks (default 0)");
    sub->add_option("--max-indices", opt.max_indices, "active-index cap (default 12)");
    sub->add_option("--samples", opt.samples, "grid samples for reduce (default 100)");
    sub->add_option("--format", opt.format, "output format (json)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  opt.command = app.get_subcommands().front()->get_name();
  if (opt.format != "json") {
    std::cerr << "error: unsupported format '" << opt.format << "'\n";
    return 1;
  }
  try {
    std::cout << run_command(opt).dump(2) << "\n";
    return 0;
  } catch (const cpwl::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const cpwl::PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return 2;
  } catch (const cpwl::InternalCheckError& e) {
    std::cerr << "internal consistency failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
