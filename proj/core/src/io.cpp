#include "coarselab/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace coarselab::io {

using json = nlohmann::ordered_json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(errc::io, std::string("JSON parse error: ") + e.what());
  }
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) {
    fail(errc::io, std::string("missing JSON field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(errc::io, std::string("bad JSON field '") + key + "': " + e.what());
  }
}

json space_to_value(const FiniteSpace& space) {
  json j;
  j["label"] = space.label();
  j["n"] = space.size();
  if (space.is_grid() && space.size() > 512) {
    // the unit-step edges of a grid window regenerate its l1 metric, and the
    // dense matrix of a large grid is needlessly quadratic on disk
    json edges = json::array();
    const int dim = space.grid_dim();
    const Dist side = space.grid_side();
    for (std::size_t p = 0; p < space.size(); ++p) {
      const auto coords = space.grid_coordinates(static_cast<PointId>(p));
      Dist stride = 1;
      for (int axis = dim - 1; axis >= 0; --axis) {
        if (coords[axis] + 1 < side) {
          edges.push_back(json::array({p, p + static_cast<std::size_t>(stride)}));
        }
        stride *= side;
      }
    }
    j["edges"] = std::move(edges);
  } else {
    json dist = json::array();
    for (std::size_t x = 0; x < space.size(); ++x) {
      json row = json::array();
      for (std::size_t y = 0; y < space.size(); ++y) {
        row.push_back(space.dist(static_cast<PointId>(x), static_cast<PointId>(y)));
      }
      dist.push_back(std::move(row));
    }
    j["dist"] = std::move(dist);
  }
  if (!space.truncation_boundary().empty()) j["boundary"] = space.truncation_boundary();
  if (space.interior_margin() != 0) j["interior_margin"] = space.interior_margin();
  if (space.nonmetric()) j["nonmetric"] = true;
  return j;
}

FiniteSpace space_from_value(const json& j, std::size_t point_cap) {
  const auto label = field<std::string>(j, "label");
  const auto n = field<std::size_t>(j, "n");
  FiniteSpace space;
  if (j.contains("dist")) {
    auto dist = field<std::vector<std::vector<Dist>>>(j, "dist");
    if (dist.size() != n) {
      fail(errc::io, "space '" + label + "': 'dist' has " + std::to_string(dist.size()) +
                         " rows, 'n' is " + std::to_string(n));
    }
    const bool allow_nonmetric = j.value("nonmetric", false);
    space = FiniteSpace::from_distance_matrix(label, dist, allow_nonmetric, point_cap);
  } else if (j.contains("edges")) {
    auto edges = field<std::vector<std::pair<PointId, PointId>>>(j, "edges");
    space = FiniteSpace::from_edges(label, n, edges, point_cap);
  } else {
    fail(errc::io, "space '" + label + "' needs either 'dist' or 'edges'");
  }
  if (j.contains("boundary")) {
    space = space.with_truncation_boundary(field<std::vector<PointId>>(j, "boundary"));
  }
  if (j.contains("interior_margin")) {
    space = space.with_interior_margin(field<Dist>(j, "interior_margin"));
  }
  return space;
}

SpacePtr resolve_space(const json& j, const char* label_key, const char* inline_key,
                       SpaceRegistry& registry, std::size_t point_cap) {
  if (j.contains(inline_key)) {
    SpacePtr space = share(space_from_value(j.at(inline_key), point_cap));
    // a space loaded explicitly under the same label takes precedence
    if (SpacePtr existing = registry.find(space->label())) return existing;
    registry.add(space);
    return space;
  }
  return registry.require(field<std::string>(j, label_key));
}

json operator_to_value(const BandOperator& op, bool inline_space) {
  json j;
  j["space"] = op.space().label();
  json triplets = json::array();
  for (const auto& e : op.entries()) {
    triplets.push_back(json::array({e.x, e.y, e.value.real(), e.value.imag()}));
  }
  j["triplets"] = std::move(triplets);
  if (inline_space) j["space_obj"] = space_to_value(op.space());
  return j;
}

BandOperator operator_from_value(const json& j, SpaceRegistry& registry,
                                 std::size_t point_cap) {
  SpacePtr space = resolve_space(j, "space", "space_obj", registry, point_cap);
  std::vector<OperatorEntry> entries;
  if (!j.contains("triplets")) fail(errc::io, "operator needs 'triplets'");
  for (const auto& t : j.at("triplets")) {
    if (!t.is_array() || t.size() != 4) {
      fail(errc::io, "operator triplet must be [x, y, re, im]");
    }
    entries.push_back(OperatorEntry{t[0].get<PointId>(), t[1].get<PointId>(),
                                    Scalar{t[2].get<double>(), t[3].get<double>()}});
  }
  return BandOperator(std::move(space), std::move(entries));
}

json map_to_value(const PointMap& map, bool inline_spaces) {
  json j;
  j["domain"] = map.domain().label();
  j["codomain"] = map.codomain().label();
  j["values"] = map.values();
  if (inline_spaces) {
    j["domain_space"] = space_to_value(map.domain());
    j["codomain_space"] = space_to_value(map.codomain());
  }
  return j;
}

json counterexample_to_value(const std::optional<CoCoarseCounterexample>& cex) {
  if (!cex) return nullptr;
  json j;
  j["x"] = cex->x;
  j["target"] = cex->target;
  j["delta_tried"] = cex->delta;
  return j;
}

json certificate_to_value(const QuotientCertificate& cert) {
  json j;
  j["K"] = cert.k;
  j["pass"] = cert.pass();
  json scales = json::array();
  for (const auto& s : cert.scales) {
    json sj;
    sj["eps"] = s.eps;
    sj["pass"] = s.pass;
    sj["delta"] = s.delta ? json(*s.delta) : json(nullptr);
    sj["modulus"] = s.modulus_at_eps;
    sj["interior_size"] = s.interior.size();
    if (s.interior.size() <= 1000) sj["interior"] = s.interior;
    sj["interior_empty"] = s.interior_empty;
    sj["counterexample"] = counterexample_to_value(s.counterexample);
    scales.push_back(std::move(sj));
  }
  j["scales"] = std::move(scales);
  return j;
}

json witness_to_value(const CoboundedWitness& w, const WitnessCheck& check) {
  json j;
  j["eps"] = w.eps;
  j["k"] = w.k;
  j["ell"] = w.ell ? json(*w.ell) : json(nullptr);
  json terms = json::array();
  for (const auto& term : w.terms) {
    json tj;
    tj["c"] = operator_to_value(term.c, false);
    tj["a"] = operator_to_value(term.a, false);
    terms.push_back(std::move(tj));
  }
  j["terms"] = std::move(terms);
  j["target"] = operator_to_value(w.target, false);
  json cj;
  cj["pass"] = check.pass;
  cj["residual"] = check.residual;
  cj["max_c_propagation"] = check.max_c_propagation;
  cj["max_c_norm"] = check.max_c_norm;
  cj["max_a_norm"] = check.max_a_norm;
  if (!check.failure.empty()) cj["failure"] = check.failure;
  j["check"] = std::move(cj);
  return j;
}

std::string dump(const json& j, int indent) { return j.dump(indent) + "\n"; }

}  // namespace

void SpaceRegistry::add(SpacePtr space) {
  if (find(space->label())) {
    fail(errc::io, "duplicate space label '" + space->label() + "'");
  }
  spaces_.push_back(std::move(space));
}

SpacePtr SpaceRegistry::find(const std::string& label) const {
  for (const auto& s : spaces_) {
    if (s->label() == label) return s;
  }
  return nullptr;
}

SpacePtr SpaceRegistry::require(const std::string& label) const {
  SpacePtr s = find(label);
  if (!s) fail(errc::io, "unknown space label '" + label + "' (load it with --space)");
  return s;
}

FiniteSpace space_from_json(const std::string& text, std::size_t point_cap) {
  return space_from_value(parse(text), point_cap);
}

std::string space_to_json(const FiniteSpace& space, int indent) {
  return dump(space_to_value(space), indent);
}

PointMap map_from_json(const std::string& text, SpaceRegistry& registry,
                       std::size_t point_cap) {
  const json j = parse(text);
  SpacePtr domain = resolve_space(j, "domain", "domain_space", registry, point_cap);
  SpacePtr codomain = resolve_space(j, "codomain", "codomain_space", registry, point_cap);
  return PointMap(std::move(domain), std::move(codomain),
                  field<std::vector<PointId>>(j, "values"));
}

std::string map_to_json(const PointMap& map, bool inline_spaces, int indent) {
  return dump(map_to_value(map, inline_spaces), indent);
}

BandOperator operator_from_json(const std::string& text, SpaceRegistry& registry,
                                std::size_t point_cap) {
  return operator_from_value(parse(text), registry, point_cap);
}

std::string operator_to_json(const BandOperator& op, bool inline_space, int indent) {
  return dump(operator_to_value(op, inline_space), indent);
}

EmbeddingTable embedding_from_json(const std::string& text, SpaceRegistry& registry,
                                   std::size_t point_cap) {
  const json j = parse(text);
  SpacePtr domain = resolve_space(j, "domain", "domain_space", registry, point_cap);
  SpacePtr codomain = resolve_space(j, "codomain", "codomain_space", registry, point_cap);
  const std::size_t n = domain->size();
  std::vector<BandOperator> values(n * n, BandOperator::zero(codomain));
  std::vector<char> seen(n * n, 0);
  if (!j.contains("pairs")) fail(errc::io, "embedding needs 'pairs'");
  for (const auto& p : j.at("pairs")) {
    if (!p.is_array() || p.size() != 3) {
      fail(errc::io, "embedding pair must be [x, y, operator]");
    }
    const auto x = p[0].get<PointId>();
    const auto y = p[1].get<PointId>();
    if (x >= n || y >= n) fail(errc::io, "embedding pair out of range");
    BandOperator op = operator_from_value(p[2], registry, point_cap);
    if (!same_space(op.space(), *codomain)) {
      fail(errc::io, "embedding pair operator lives over the wrong space");
    }
    values[static_cast<std::size_t>(x) * n + y] = std::move(op);
    seen[static_cast<std::size_t>(x) * n + y] = 1;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) {
      fail(errc::io, "embedding is missing the pair (" + std::to_string(i / n) + "," +
                         std::to_string(i % n) + ")");
    }
  }
  return EmbeddingTable(std::move(domain), std::move(codomain), std::move(values));
}

std::string embedding_to_json(const EmbeddingTable& phi, bool inline_spaces, int indent) {
  json j;
  j["domain"] = phi.domain().label();
  j["codomain"] = phi.codomain().label();
  if (inline_spaces) {
    j["domain_space"] = space_to_value(phi.domain());
    j["codomain_space"] = space_to_value(phi.codomain());
  }
  json pairs = json::array();
  for (std::size_t x = 0; x < phi.domain().size(); ++x) {
    for (std::size_t y = 0; y < phi.domain().size(); ++y) {
      pairs.push_back(json::array(
          {x, y,
           operator_to_value(phi.unit_image(static_cast<PointId>(x), static_cast<PointId>(y)),
                             false)}));
    }
  }
  j["pairs"] = std::move(pairs);
  return dump(j, indent);
}

IsometryMap isometry_from_json(const std::string& text, SpaceRegistry& registry,
                               std::size_t point_cap) {
  const json j = parse(text);
  SpacePtr base = resolve_space(j, "domain", "domain_space", registry, point_cap);
  SpacePtr codomain = resolve_space(j, "codomain", "codomain_space", registry, point_cap);
  const auto kind_name = field<std::string>(j, "kind");
  const int fiber = field<int>(j, "fiber");
  IsometryMap::Kind kind;
  if (kind_name == "plain") kind = IsometryMap::Kind::plain;
  else if (kind_name == "amplified") kind = IsometryMap::Kind::amplified;
  else fail(errc::io, "isometry kind must be 'plain' or 'amplified'");
  std::vector<IsometryMap::Column> columns;
  if (!j.contains("columns")) fail(errc::io, "isometry needs 'columns'");
  for (const auto& cj : j.at("columns")) {
    IsometryMap::Column col;
    for (const auto& e : cj) {
      if (!e.is_array() || e.size() != 3) fail(errc::io, "column entry must be [p, re, im]");
      col.emplace_back(e[0].get<PointId>(), Scalar{e[1].get<double>(), e[2].get<double>()});
    }
    columns.push_back(std::move(col));
  }
  return IsometryMap(kind, std::move(base), std::move(codomain), fiber, std::move(columns));
}

std::string isometry_to_json(const IsometryMap& u, bool inline_spaces, int indent) {
  json j;
  j["kind"] = u.kind() == IsometryMap::Kind::plain ? "plain" : "amplified";
  j["domain"] = u.base_domain()->label();
  j["codomain"] = u.codomain().label();
  j["fiber"] = u.fiber_dim();
  if (inline_spaces) {
    j["domain_space"] = space_to_value(*u.base_domain());
    j["codomain_space"] = space_to_value(u.codomain());
  }
  json columns = json::array();
  for (const auto& col : u.columns()) {
    json cj = json::array();
    for (const auto& [p, v] : col) {
      cj.push_back(json::array({p, v.real(), v.imag()}));
    }
    columns.push_back(std::move(cj));
  }
  j["columns"] = std::move(columns);
  return dump(j, indent);
}

std::string certificate_to_json(const QuotientCertificate& cert, int indent) {
  return dump(certificate_to_value(cert), indent);
}

std::string n_to_1_to_json(const NTo1Witness& witness, int indent) {
  json j;
  j["s"] = witness.s;
  j["r"] = witness.r;
  j["n"] = witness.n;
  json balls = json::array();
  for (std::size_t y = 0; y < witness.pieces.size(); ++y) {
    if (witness.pieces[y].empty()) continue;
    json bj;
    bj["y"] = y;
    bj["pieces"] = witness.pieces[y];
    balls.push_back(std::move(bj));
  }
  j["balls"] = std::move(balls);
  return dump(j, indent);
}

std::string injectivization_to_json(const Injectivization& result, int indent) {
  json j;
  j["z"] = space_to_value(*result.z);
  j["g"] = map_to_value(result.g, false);
  j["inclusion"] = map_to_value(result.inclusion, false);
  j["fiber_bound"] = result.fiber_bound;
  j["closeness"] = result.closeness_to_f;
  return dump(j, indent);
}

std::string m_bound_to_json(const MBoundReport& report, int indent) {
  json j;
  j["m"] = report.m;
  json scales = json::array();
  for (const auto& s : report.scales) {
    json sj;
    sj["eps"] = s.eps;
    sj["delta"] = s.delta;
    sj["max_steps"] = s.max_steps;
    sj["skipped"] = s.skipped;
    json balls = json::array();
    for (const auto& b : s.balls) {
      json bj;
      bj["y"] = b.y;
      bj["centers"] = b.centers;
      balls.push_back(std::move(bj));
    }
    sj["balls"] = std::move(balls);
    scales.push_back(std::move(sj));
  }
  j["scales"] = std::move(scales);
  return dump(j, indent);
}

std::string orbit_to_json(const OrbitResult& result, int indent) {
  json j;
  j["quotient"] = space_to_value(*result.quotient);
  j["q"] = map_to_value(result.q, false);
  j["max_displacement"] = result.max_displacement;
  j["nonmetric"] = result.quotient->nonmetric();
  if (const auto& v = result.quotient->triangle_violation()) {
    j["triangle_violation"] = json::array({v->x, v->y, v->z});
  } else {
    j["triangle_violation"] = nullptr;
  }
  j["certificate"] = certificate_to_value(result.certificate);
  json distortion = json::array();
  for (const auto& [t, w] : result.distortion) {
    distortion.push_back(json::array({t, w}));
  }
  j["distortion"] = std::move(distortion);
  return dump(j, indent);
}

std::string decomposition_to_json(const QuotientDecomposition& qd, int indent) {
  json j;
  j["K"] = qd.k;
  j["delta"] = qd.delta;
  j["eps_requested"] = qd.eps_requested;
  j["eps_used"] = qd.eps_used;
  if (!qd.note.empty()) j["note"] = qd.note;
  json partition;
  partition["separation"] = qd.partition.separation;
  partition["classes"] = qd.partition.classes;
  j["partition"] = std::move(partition);
  json blocks = json::array();
  for (const auto& b : qd.blocks) {
    json bj;
    bj["row_class"] = b.row_class;
    bj["col_class"] = b.col_class;
    bj["c"] = operator_to_value(b.c, false);
    bj["d"] = operator_to_value(b.d, false);
    json pairs = json::array();
    for (const auto& p : b.pairs) {
      pairs.push_back(json::array({p.y, p.y_prime, p.x, p.z}));
    }
    bj["pairs"] = std::move(pairs);
    blocks.push_back(std::move(bj));
  }
  j["blocks"] = std::move(blocks);
  j["block_count"] = qd.blocks.size();
  j["exact"] = qd.exact;
  return dump(j, indent);
}

std::string witness_to_json(const CoboundedWitness& witness, const WitnessCheck& check,
                            int indent) {
  return dump(witness_to_value(witness, check), indent);
}

std::string rank_profile_to_json(const RankProfile& profile, int indent) {
  json j;
  switch (profile.kind) {
    case RankProfile::Kind::rank_one_preserving: j["kind"] = "rank-one-preserving"; break;
    case RankProfile::Kind::one_to_n: j["kind"] = "1-to-n"; break;
    case RankProfile::Kind::irregular: j["kind"] = "irregular"; break;
  }
  j["n"] = profile.n;
  j["ranks"] = profile.ranks_by_point;
  j["offenders"] = profile.offenders;
  return dump(j, indent);
}

std::string spatial_check_to_json(const SpatialCheck& check, int indent) {
  json j;
  j["pass"] = check.pass;
  j["max_deviation"] = check.max_deviation;
  if (check.counterexample) {
    json cj;
    cj["x"] = check.counterexample->x;
    cj["y"] = check.counterexample->y;
    cj["v"] = check.counterexample->v;
    cj["w"] = check.counterexample->w;
    cj["deviation"] = check.counterexample->deviation;
    j["counterexample"] = std::move(cj);
  } else {
    j["counterexample"] = nullptr;
  }
  return dump(j, indent);
}

std::string diagnostic_to_json(const AlmostCoboundedReport& report, int indent) {
  json j;
  j["k"] = report.k;
  j["eps"] = report.eps;
  json probes = json::array();
  for (const auto& p : report.probes) {
    json pj;
    pj["admits_witness"] = p.admits_witness;
    pj["residual"] = p.residual;
    pj["delta"] = p.delta ? json(*p.delta) : json(nullptr);
    json unreachable = json::array();
    for (const auto& u : p.unreachable) {
      unreachable.push_back(json::array({u.input, u.output}));
    }
    pj["unreachable"] = std::move(unreachable);
    pj["max_required_domain_distance"] = p.max_required_domain_distance;
    pj["worst_entry"] = p.worst_entry
                            ? json(json::array({p.worst_entry->input, p.worst_entry->output}))
                            : json(nullptr);
    pj["flagged"] = p.flagged;
    if (!p.note.empty()) pj["note"] = p.note;
    probes.push_back(std::move(pj));
  }
  j["probes"] = std::move(probes);
  return dump(j, indent);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io, "cannot open '" + path + "' for reading");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) fail(errc::io, "write to '" + path + "' failed");
}

}  // namespace coarselab::io
