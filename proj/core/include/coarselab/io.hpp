#pragma once

#include <string>

#include "coarselab/certify.hpp"
#include "coarselab/cobounded.hpp"
#include "coarselab/orbit.hpp"

namespace coarselab::io {

/// Known spaces, looked up by label when loading maps and operators.
class SpaceRegistry {
 public:
  void add(SpacePtr space);
  SpacePtr find(const std::string& label) const;  // nullptr when absent
  SpacePtr require(const std::string& label) const;
  const std::vector<SpacePtr>& spaces() const { return spaces_; }

 private:
  std::vector<SpacePtr> spaces_;
};

/// Space format: {"label": str, "n": int, "dist": [[int]]} or
/// {"label": str, "n": int, "edges": [[int,int]]}, with optional
/// "boundary": [int], "interior_margin": int, "nonmetric": bool.
/// Validation failures name the first violated triple.
FiniteSpace space_from_json(const std::string& text,
                            std::size_t point_cap = kDefaultPointCap);
std::string space_to_json(const FiniteSpace& space, int indent = 2);

/// Map format: {"domain": label, "codomain": label, "values": [int]}; the
/// spaces may be inlined as "domain_space"/"codomain_space" objects.
PointMap map_from_json(const std::string& text, SpaceRegistry& registry,
                       std::size_t point_cap = kDefaultPointCap);
std::string map_to_json(const PointMap& map, bool inline_spaces = false, int indent = 2);

/// Operator format: {"space": label, "triplets": [[x, y, re, im]]}; the space
/// may be inlined as "space_obj".
BandOperator operator_from_json(const std::string& text, SpaceRegistry& registry,
                                std::size_t point_cap = kDefaultPointCap);
std::string operator_to_json(const BandOperator& op, bool inline_space = false,
                             int indent = 2);

/// Embedding table format: {"domain": label, "codomain": label,
/// "pairs": [[x, y, operator-json]]}; spaces may be inlined.
EmbeddingTable embedding_from_json(const std::string& text, SpaceRegistry& registry,
                                   std::size_t point_cap = kDefaultPointCap);
std::string embedding_to_json(const EmbeddingTable& phi, bool inline_spaces = false,
                              int indent = 2);

/// Isometry format: {"kind": "plain"|"amplified", "domain": label,
/// "codomain": label, "fiber": n, "columns": [[[p, re, im], ...], ...]}.
IsometryMap isometry_from_json(const std::string& text, SpaceRegistry& registry,
                               std::size_t point_cap = kDefaultPointCap);
std::string isometry_to_json(const IsometryMap& u, bool inline_spaces = false,
                             int indent = 2);

std::string certificate_to_json(const QuotientCertificate& cert, int indent = 2);
std::string n_to_1_to_json(const NTo1Witness& witness, int indent = 2);
std::string injectivization_to_json(const Injectivization& result, int indent = 2);
std::string m_bound_to_json(const MBoundReport& report, int indent = 2);
std::string orbit_to_json(const OrbitResult& result, int indent = 2);
std::string decomposition_to_json(const QuotientDecomposition& qd, int indent = 2);
std::string witness_to_json(const CoboundedWitness& witness, const WitnessCheck& check,
                            int indent = 2);
std::string rank_profile_to_json(const RankProfile& profile, int indent = 2);
std::string spatial_check_to_json(const SpatialCheck& check, int indent = 2);
std::string diagnostic_to_json(const AlmostCoboundedReport& report, int indent = 2);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace coarselab::io
