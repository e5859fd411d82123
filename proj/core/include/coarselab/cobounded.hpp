#pragma once

#include <memory>
#include <variant>

#include "coarselab/embedding.hpp"

namespace coarselab {

/// The embedding a witness factors through: either spatially implemented
/// (Ad(u) with optional amplification) or an arbitrary tabulated one.
class Embedding {
 public:
  explicit Embedding(IsometryMap u) : impl_(std::move(u)) {}
  explicit Embedding(EmbeddingTable table) : impl_(std::move(table)) {}

  const FiniteSpace& domain() const;
  const FiniteSpace& codomain() const;
  SpacePtr domain_ptr() const;
  SpacePtr codomain_ptr() const;

  /// Phi(a) for a band operator over the domain. For an amplified isometry
  /// this is Ad(u)∘I_n(a); for a table, the linear extension of the unit
  /// values.
  BandOperator apply(const BandOperator& a) const;

  const IsometryMap* isometry() const { return std::get_if<IsometryMap>(&impl_); }
  const EmbeddingTable* table() const { return std::get_if<EmbeddingTable>(&impl_); }

  /// The underlying point map, when the embedding is Ad(u_f).
  const PointMap* underlying_map() const;

 private:
  std::variant<IsometryMap, EmbeddingTable> impl_;
};

using EmbeddingPtr = std::shared_ptr<const Embedding>;

struct WitnessTerm {
  BandOperator c;  // over the codomain; the propagation-<=k corrector
  BandOperator a;  // over the domain; fed through the embedding
};

/// Certified data for b ≈ Σ c_i Phi(a_i) within eps, with propagation(c_i)
/// bounded by k and (optionally) term count and norms bounded by ell.
struct CoboundedWitness {
  EmbeddingPtr embedding;
  BandOperator target;
  std::vector<WitnessTerm> terms;
  double eps = 0.0;
  Dist k = 0;
  std::optional<double> ell;
};

struct WitnessCheck {
  bool pass = false;
  double residual = 0.0;
  Dist max_c_propagation = 0;
  double max_c_norm = 0.0;
  double max_a_norm = 0.0;
  std::string failure;  // empty on pass
};

/// Recomputes the norm residual and all side conditions.
WitnessCheck check_witness(const CoboundedWitness& w, double tol = 1e-9);

/// One block of the constructive decomposition of a band operator through a
/// bijective coarse quotient: block = d · Phi(c) exactly, with
/// propagation(c) <= delta over the domain and propagation(d) <= K over the
/// codomain.
struct DecompositionBlock {
  int row_class = 0;  // partition class of the outputs y'
  int col_class = 0;  // partition class of the inputs y
  BandOperator c;     // over X
  BandOperator d;     // over Y
  struct MatchedPair {
    PointId y = 0;        // input support point (= f(x))
    PointId y_prime = 0;  // output support point
    PointId x = 0;        // f^{-1}(y)
    PointId z = 0;        // companion with d(x,z) <= delta, dist(f(z),y') <= K
  };
  std::vector<MatchedPair> pairs;
};

struct QuotientDecomposition {
  Dist k = 0;
  Dist delta = 0;
  Dist eps_requested = 0;
  Dist eps_used = 0;      // raised to max(eps, propagation(a), K + min distance)
  std::string note;       // records the raise, when it happened
  Partition partition;    // 3*eps_used-separated classes of the codomain
  std::vector<DecompositionBlock> blocks;  // nonempty blocks only
  BandOperator reassembled;                // Σ d·Phi(c)
  bool exact = false;                      // reassembled == a entrywise
};

/// Block decomposition of `a` through the bijection f. Throws
/// errc::decomposition naming the offending (x, y') when no companion point
/// exists on the window.
QuotientDecomposition quotient_decomposition(const PointMap& f, Dist k, Dist delta,
                                             const BandOperator& a, Dist eps);

/// Repackages a decomposition as a checkable witness (eps = 0, k = K).
CoboundedWitness witness_from_decomposition(const QuotientDecomposition& qd,
                                            const PointMap& f, double tol = 1e-9);

/// Parity decomposition of an operator over an N-window {1..N} through the
/// folding embedding: diagonal odd/even blocks plus shift-corrected cross
/// blocks, residual exactly 0, k = 1.
CoboundedWitness parity_decomposition(const BandOperator& a, double tol = 1e-9);

struct ProbeEntryObstruction {
  PointId input = 0;   // column of the probe entry
  PointId output = 0;  // row of the probe entry
};

struct ProbeReport {
  bool admits_witness = false;  // constructive pathway produced a verified witness
  double residual = 0.0;
  std::optional<Dist> delta;    // co-coarse witness used by the pathway
  std::vector<ProbeEntryObstruction> unreachable;  // no companion at propagation k
  Dist max_required_domain_distance = 0;           // largest finite rho
  std::optional<ProbeEntryObstruction> worst_entry;
  bool flagged = false;
  std::string note;
};

struct AlmostCoboundedReport {
  Dist k = 0;
  Dist eps = 0;
  std::vector<ProbeReport> probes;
};

/// For each probe b over the codomain: runs the decomposition pathway when
/// the embedding is Ad(u_f) with bijective f, and scans for the obstruction
/// pattern — entries e_{f(x)f(y)} whose routing at propagation k forces
/// domain factors of propagation rho = d(x, f^{-1}(ball(output, k))).
AlmostCoboundedReport almost_cobounded_diagnostic(const Embedding& phi, Dist k, Dist eps,
                                                  const std::vector<BandOperator>& probes,
                                                  double tol = 1e-9);

}  // namespace coarselab
