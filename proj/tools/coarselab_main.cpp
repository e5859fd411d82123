// coarselab: batch front-end for coarse-map certificates, uniform-Roe-window
// computations and cobounded decompositions. Reports are deterministic JSON:
// fixed key order, fixed seed, no timestamps — two runs over identical inputs
// produce identical bytes.
//
// Exit codes: 0 = all checks pass; 1 = a certificate failed (the report names
// the counterexample); 2 = usage or IO error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>

#include "coarselab/certify.hpp"
#include "coarselab/cobounded.hpp"
#include "coarselab/gallery.hpp"
#include "coarselab/io.hpp"
#include "coarselab/orbit.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace coarselab;

std::size_t default_point_cap() {
  if (const char* v = std::getenv("COARSELAB_POINT_CAP")) {
    const long long parsed = std::atoll(v);
    if (parsed > 0) return static_cast<std::size_t>(parsed);
  }
  return kDefaultPointCap;
}

struct Common {
  std::vector<std::string> space_paths;
  std::string out = "-";
  std::size_t point_cap = default_point_cap();
  double tol = 1e-9;
  int parallel = 1;
};

void add_common(CLI::App* cmd, Common& common, bool with_spaces = true) {
  if (with_spaces) {
    cmd->add_option("--space", common.space_paths, "space JSON file (repeatable)");
  }
  cmd->add_option("--out", common.out, "report path ('-' = stdout)");
  cmd->add_option("--point-cap", common.point_cap,
                  "max points per space (env COARSELAB_POINT_CAP)");
  cmd->add_option("--tol", common.tol, "numeric tolerance for operator norms")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--parallel", common.parallel, "parallelism degree")
      ->check(CLI::PositiveNumber);
}

io::SpaceRegistry load_registry(const Common& common) {
  io::SpaceRegistry registry;
  for (const auto& path : common.space_paths) {
    registry.add(share(io::space_from_json(io::read_file(path), common.point_cap)));
  }
  return registry;
}

json envelope(const std::string& command, const Common& common) {
  json doc;
  doc["tool"] = "coarselab";
  doc["version"] = "0.1.0";
  doc["command"] = command;
  doc["seed"] = operator_norm_seed();
  json config;
  config["spaces"] = common.space_paths;
  config["point_cap"] = common.point_cap;
  config["tol"] = common.tol;
  config["parallel"] = common.parallel;
  doc["config"] = std::move(config);
  return doc;
}

int emit(json doc, const Common& common, bool pass) {
  doc["pass"] = pass;
  const std::string text = doc.dump(2) + "\n";
  if (common.out == "-") {
    std::cout << text;
  } else {
    io::write_file(common.out, text);
  }
  return pass ? 0 : 1;
}

void emit_raw(const std::string& text, const Common& common) {
  if (common.out == "-") {
    std::cout << text;
  } else {
    io::write_file(common.out, text);
  }
}

std::vector<Dist> parse_scales(const std::string& text) {
  std::vector<Dist> scales;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string tok = text.substr(start, comma == std::string::npos
                                                   ? std::string::npos
                                                   : comma - start);
    if (!tok.empty()) scales.push_back(static_cast<Dist>(std::stoll(tok)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (scales.empty()) fail(errc::domain, "no scales given");
  return scales;
}

std::vector<std::pair<PointId, PointId>> parse_edges(const std::string& text) {
  std::vector<std::pair<PointId, PointId>> edges;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string tok =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const std::size_t dash = tok.find('-');
    if (dash == std::string::npos) fail(errc::io, "edge must look like a-b");
    edges.emplace_back(static_cast<PointId>(std::stoul(tok.substr(0, dash))),
                       static_cast<PointId>(std::stoul(tok.substr(dash + 1))));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return edges;
}

// ---------------------------------------------------------------------------

int run_gen_space(const Common& common, const std::string& kind, int dim, Dist side,
                  std::size_t n, const std::string& edges, Dist lo, Dist hi,
                  const std::string& label) {
  FiniteSpace space;
  if (kind == "grid") {
    space = build_grid_window(dim, side, common.point_cap);
  } else if (kind == "graph") {
    space = FiniteSpace::from_edges("graph[" + std::to_string(n) + "]", n,
                                    parse_edges(edges), common.point_cap);
  } else if (kind == "int-window") {
    space = *gallery::int_window(lo, hi).space;
  } else if (kind == "nat-window") {
    space = *gallery::nat_window(static_cast<Dist>(n)).space;
  } else {
    fail(errc::domain, "unknown space kind '" + kind + "'");
  }
  if (!label.empty()) space = space.with_label(label);
  emit_raw(io::space_to_json(space), common);
  return 0;
}

int run_check_quotient(const Common& common, const std::string& map_path, Dist k,
                       const std::string& scales) {
  auto registry = load_registry(common);
  const PointMap f = io::map_from_json(io::read_file(map_path), registry, common.point_cap);
  const QuotientCertificate cert =
      quotient_certificate(f, k, parse_scales(scales), common.parallel);
  json doc = envelope("check-quotient", common);
  doc["config"]["map"] = map_path;
  doc["config"]["K"] = k;
  doc["config"]["scales"] = scales;
  doc["results"]["certificate"] = json::parse(io::certificate_to_json(cert));
  return emit(std::move(doc), common, cert.pass());
}

int run_n_to_1(const Common& common, const std::string& map_path, Dist s, int n_max) {
  auto registry = load_registry(common);
  const PointMap f = io::map_from_json(io::read_file(map_path), registry, common.point_cap);
  const auto witness = n_to_1_witness(f, s, n_max);
  json doc = envelope("n-to-1", common);
  doc["config"]["map"] = map_path;
  doc["config"]["s"] = s;
  doc["config"]["n_max"] = n_max;
  if (witness) {
    validate_n_to_1_witness(f, *witness);
    doc["results"]["witness"] = json::parse(io::n_to_1_to_json(*witness));
  } else {
    doc["results"]["witness"] = nullptr;
  }
  return emit(std::move(doc), common, witness.has_value());
}

int run_injectivize(const Common& common, const std::string& map_path) {
  auto registry = load_registry(common);
  const PointMap f = io::map_from_json(io::read_file(map_path), registry, common.point_cap);
  const Injectivization result = injectivize(f);
  json doc = envelope("injectivize", common);
  doc["config"]["map"] = map_path;
  doc["results"] = json::parse(io::injectivization_to_json(result));
  return emit(std::move(doc), common, result.closeness_to_f <= 1);
}

int run_orbit(const Common& common, const std::string& action_path,
              const std::string& scales) {
  auto registry = load_registry(common);
  const json aj = json::parse(io::read_file(action_path));
  if (!aj.contains("space") || !aj.contains("perms")) {
    fail(errc::io, "action file needs 'space' and 'perms'");
  }
  SpacePtr space = registry.require(aj.at("space").get<std::string>());
  const auto perms = aj.at("perms").get<std::vector<std::vector<PointId>>>();
  const OrbitResult result = orbit_space(space, perms, parse_scales(scales));
  json doc = envelope("orbit", common);
  doc["config"]["action"] = action_path;
  doc["config"]["scales"] = scales;
  doc["results"] = json::parse(io::orbit_to_json(result));
  return emit(std::move(doc), common, result.certificate.pass());
}

int run_op_info(const Common& common, const std::string& op_path,
                const std::string& ghost_exclude) {
  auto registry = load_registry(common);
  const BandOperator a =
      io::operator_from_json(io::read_file(op_path), registry, common.point_cap);
  std::vector<PointId> exclude;
  if (!ghost_exclude.empty()) {
    for (const Dist v : parse_scales(ghost_exclude)) exclude.push_back(static_cast<PointId>(v));
  }
  json doc = envelope("op-info", common);
  doc["config"]["op"] = op_path;
  doc["config"]["ghost_exclude"] = exclude;
  json results;
  results["space"] = a.space().label();
  results["nnz"] = a.nnz();
  results["propagation"] = a.propagation();
  results["norm"] = operator_norm(a, common.tol);
  results["ghost_tail"] = ghost_tail(a, exclude);
  doc["results"] = std::move(results);
  return emit(std::move(doc), common, true);
}

int run_truncate(const Common& common, const std::string& op_path, Dist r) {
  auto registry = load_registry(common);
  const BandOperator a =
      io::operator_from_json(io::read_file(op_path), registry, common.point_cap);
  const TruncationResult result = truncate(a, r, common.tol);
  json doc = envelope("truncate", common);
  doc["config"]["op"] = op_path;
  doc["config"]["r"] = r;
  doc["results"]["band"] = json::parse(io::operator_to_json(result.band));
  doc["results"]["error"] = result.error;
  doc["results"]["propagation"] = result.band.propagation();
  return emit(std::move(doc), common, true);
}

int run_decompose(const Common& common, const std::string& map_path, Dist k, Dist delta,
                  const std::string& op_path, Dist eps) {
  auto registry = load_registry(common);
  const PointMap f = io::map_from_json(io::read_file(map_path), registry, common.point_cap);
  const BandOperator a =
      io::operator_from_json(io::read_file(op_path), registry, common.point_cap);
  json doc = envelope("decompose", common);
  doc["config"]["map"] = map_path;
  doc["config"]["op"] = op_path;
  doc["config"]["K"] = k;
  doc["config"]["delta"] = delta;
  doc["config"]["eps"] = eps;
  try {
    const QuotientDecomposition qd = quotient_decomposition(f, k, delta, a, eps);
    const CoboundedWitness w = witness_from_decomposition(qd, f, common.tol);
    const WitnessCheck check = check_witness(w, common.tol);
    doc["results"]["decomposition"] = json::parse(io::decomposition_to_json(qd));
    doc["results"]["residual"] = check.residual;
    doc["results"]["witness_pass"] = check.pass;
    return emit(std::move(doc), common, qd.exact && check.pass);
  } catch (const error& e) {
    if (e.code() != errc::decomposition) throw;
    doc["results"]["error"] = e.what();
    return emit(std::move(doc), common, false);
  }
}

int run_parity(const Common& common, const std::string& op_path) {
  auto registry = load_registry(common);
  const BandOperator a =
      io::operator_from_json(io::read_file(op_path), registry, common.point_cap);
  const CoboundedWitness w = parity_decomposition(a, common.tol);
  const WitnessCheck check = check_witness(w, common.tol);
  json doc = envelope("parity", common);
  doc["config"]["op"] = op_path;
  doc["results"] = json::parse(io::witness_to_json(w, check));
  return emit(std::move(doc), common, check.pass && check.residual <= 1e-12);
}

int run_reconstruct(const Common& common, const std::string& embedding_path, PointId x0) {
  auto registry = load_registry(common);
  const EmbeddingTable phi =
      io::embedding_from_json(io::read_file(embedding_path), registry, common.point_cap);
  json doc = envelope("reconstruct", common);
  doc["config"]["embedding"] = embedding_path;
  doc["config"]["x0"] = x0;
  const RankProfile profile = rank_profile(phi, common.tol);
  doc["results"]["rank_profile"] = json::parse(io::rank_profile_to_json(profile));
  if (profile.kind == RankProfile::Kind::irregular) {
    doc["results"]["error"] = "rank profile is irregular; no implementing isometry";
    return emit(std::move(doc), common, false);
  }
  const IsometryMap u = reconstruct_isometry(phi, x0, std::nullopt, 1e-12);
  const SpatialCheck check = verify_spatial(phi, u, 1e-12);
  doc["results"]["isometry"] = json::parse(io::isometry_to_json(u));
  doc["results"]["verify"] = json::parse(io::spatial_check_to_json(check));
  return emit(std::move(doc), common, check.pass);
}

int run_verify_spatial(const Common& common, const std::string& embedding_path,
                       const std::string& isometry_path) {
  auto registry = load_registry(common);
  const EmbeddingTable phi =
      io::embedding_from_json(io::read_file(embedding_path), registry, common.point_cap);
  const IsometryMap u =
      io::isometry_from_json(io::read_file(isometry_path), registry, common.point_cap);
  const SpatialCheck check = verify_spatial(phi, u, 1e-12);
  json doc = envelope("verify-spatial", common);
  doc["config"]["embedding"] = embedding_path;
  doc["config"]["isometry"] = isometry_path;
  doc["results"]["verify"] = json::parse(io::spatial_check_to_json(check));
  return emit(std::move(doc), common, check.pass);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coarselab: finite-window certificates for coarse maps and "
               "uniform Roe operators"};
  app.require_subcommand(1);

  Common gen_common;
  std::string gen_kind, gen_edges, gen_label;
  int gen_dim = 1;
  Dist gen_side = 10, gen_lo = 0, gen_hi = 9;
  std::size_t gen_n = 10;
  auto* gen = app.add_subcommand("gen-space", "generate a space JSON file");
  add_common(gen, gen_common, /*with_spaces=*/false);
  gen->add_option("--kind", gen_kind, "grid | graph | int-window | nat-window")->required();
  gen->add_option("--dim", gen_dim);
  gen->add_option("--side", gen_side);
  gen->add_option("--n", gen_n);
  gen->add_option("--edges", gen_edges, "a-b,c-d,...");
  gen->add_option("--lo", gen_lo);
  gen->add_option("--hi", gen_hi);
  gen->add_option("--label", gen_label);

  Common cq_common;
  std::string cq_map, cq_scales;
  Dist cq_k = 0;
  auto* cq = app.add_subcommand("check-quotient", "co-coarse certificate per scale");
  add_common(cq, cq_common);
  cq->add_option("--map", cq_map)->required();
  cq->add_option("--K", cq_k)->required();
  cq->add_option("--scales", cq_scales)->required();

  Common nt_common;
  std::string nt_map;
  Dist nt_s = 0;
  int nt_max = 8;
  auto* nt = app.add_subcommand("n-to-1", "coarsely n-to-1 witness");
  add_common(nt, nt_common);
  nt->add_option("--map", nt_map)->required();
  nt->add_option("--s", nt_s)->required();
  nt->add_option("--n-max", nt_max);

  Common inj_common;
  std::string inj_map;
  auto* inj = app.add_subcommand("injectivize", "close injective replacement into Y x {1..n}");
  add_common(inj, inj_common);
  inj->add_option("--map", inj_map)->required();

  Common orb_common;
  std::string orb_action, orb_scales = "1,2,4";
  auto* orb = app.add_subcommand("orbit", "orbit space of a permutation action");
  add_common(orb, orb_common);
  orb->add_option("--action", orb_action)->required();
  orb->add_option("--scales", orb_scales);

  Common oi_common;
  std::string oi_op, oi_ghost;
  auto* oi = app.add_subcommand("op-info", "propagation, norm and ghost tail");
  add_common(oi, oi_common);
  oi->add_option("--op", oi_op)->required();
  oi->add_option("--ghost-exclude", oi_ghost, "points excluded from the ghost tail");

  Common tr_common;
  std::string tr_op;
  Dist tr_r = 0;
  auto* tr = app.add_subcommand("truncate", "band truncation with norm error");
  add_common(tr, tr_common);
  tr->add_option("--op", tr_op)->required();
  tr->add_option("--r", tr_r)->required();

  Common dc_common;
  std::string dc_map, dc_op;
  Dist dc_k = 0, dc_delta = 0, dc_eps = 0;
  auto* dc = app.add_subcommand("decompose", "block decomposition through a bijective quotient");
  add_common(dc, dc_common);
  dc->add_option("--map", dc_map)->required();
  dc->add_option("--K", dc_k)->required();
  dc->add_option("--delta", dc_delta)->required();
  dc->add_option("--op", dc_op)->required();
  dc->add_option("--eps", dc_eps)->required();

  Common pa_common;
  std::string pa_op;
  auto* pa = app.add_subcommand("parity", "odd/even parity witness over an N-window");
  add_common(pa, pa_common);
  pa->add_option("--op", pa_op)->required();

  Common rc_common;
  std::string rc_embedding;
  PointId rc_x0 = 0;
  auto* rc = app.add_subcommand("reconstruct", "implementing isometry from a 1-to-n table");
  add_common(rc, rc_common);
  rc->add_option("--embedding", rc_embedding)->required();
  rc->add_option("--x0", rc_x0);

  Common vs_common;
  std::string vs_embedding, vs_isometry;
  auto* vs = app.add_subcommand("verify-spatial", "check Phi = Ad(u) composed with I_n");
  add_common(vs, vs_common);
  vs->add_option("--embedding", vs_embedding)->required();
  vs->add_option("--isometry", vs_isometry)->required();

  try {
    app.parse(argc, argv);
    if (gen->parsed()) {
      return run_gen_space(gen_common, gen_kind, gen_dim, gen_side, gen_n, gen_edges,
                           gen_lo, gen_hi, gen_label);
    }
    if (cq->parsed()) return run_check_quotient(cq_common, cq_map, cq_k, cq_scales);
    if (nt->parsed()) return run_n_to_1(nt_common, nt_map, nt_s, nt_max);
    if (inj->parsed()) return run_injectivize(inj_common, inj_map);
    if (orb->parsed()) return run_orbit(orb_common, orb_action, orb_scales);
    if (oi->parsed()) return run_op_info(oi_common, oi_op, oi_ghost);
    if (tr->parsed()) return run_truncate(tr_common, tr_op, tr_r);
    if (dc->parsed()) return run_decompose(dc_common, dc_map, dc_k, dc_delta, dc_op, dc_eps);
    if (pa->parsed()) return run_parity(pa_common, pa_op);
    if (rc->parsed()) return run_reconstruct(rc_common, rc_embedding, rc_x0);
    if (vs->parsed()) return run_verify_spatial(vs_common, vs_embedding, vs_isometry);
    std::cerr << "no subcommand\n";
    return 2;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const error& e) {
    std::cerr << "coarselab: " << errc_name(e.code()) << " error: " << e.what() << "\n";
    switch (e.code()) {
      case errc::decomposition:
      case errc::malformed_embedding:
      case errc::frame:
      case errc::invariant_violation:
        return 1;  // a check failed on valid inputs
      default:
        return 2;  // usage or IO problem
    }
  } catch (const std::exception& e) {
    std::cerr << "coarselab: " << e.what() << "\n";
    return 2;
  }
}
