#pragma once

#include <functional>
#include <optional>

#include "coarselab/band_operator.hpp"
#include "coarselab/map.hpp"

namespace coarselab {

/// X x {1..n} with dist((x,i),(y,j)) = dist(x,y) for x != y and 1 for
/// same-point distinct-fiber pairs (the same "+1" device as the
/// injectivization metric). Point (x,i) has index x*n + i.
FiniteSpace product_space(const FiniteSpace& base, int fiber_dim);

inline PointId product_point(PointId x, int fiber, int fiber_dim) {
  return static_cast<PointId>(x * static_cast<PointId>(fiber_dim) + fiber);
}

/// Block amplification: [a_{xy}] -> [a_{xy} Id_n] over the product space.
/// Multiplies rank by n and preserves propagation.
BandOperator amplify(const BandOperator& a, int fiber_dim);

/// A sparse column isometry u : l2(domain) -> l2(codomain). `plain` kind
/// comes from an injective point map (0/1 columns, u delta_x = delta_{f(x)});
/// `amplified` kind has domain X x {1..n} and arbitrary orthonormal columns.
class IsometryMap {
 public:
  enum class Kind { plain, amplified };

  using Column = std::vector<std::pair<PointId, Scalar>>;  // sorted sparse vector

  /// Columns are indexed by product_point(x, i, fiber_dim) over the base
  /// space (for plain kind fiber_dim = 1, so by x itself). Orthonormality of
  /// the columns is checked within tol; errc::frame on violation.
  IsometryMap(Kind kind, SpacePtr base, SpacePtr codomain, int fiber_dim,
              std::vector<Column> columns, double tol = 1e-12);

  Kind kind() const { return kind_; }
  /// The space the isometry acts on: the base itself for plain kind, the
  /// product base x {1..n} for amplified kind.
  const FiniteSpace& domain() const { return *domain_; }
  const FiniteSpace& codomain() const { return *codomain_; }
  const SpacePtr& domain_ptr() const { return domain_; }
  const SpacePtr& codomain_ptr() const { return codomain_; }
  /// The underlying point space before amplification.
  const SpacePtr& base_domain() const { return base_; }
  int fiber_dim() const { return fiber_dim_; }
  const std::vector<Column>& columns() const { return columns_; }

  /// Underlying point map for the plain kind.
  const std::optional<PointMap>& point_map() const { return point_map_; }

  std::vector<Scalar> apply_column(PointId domain_point) const;

 private:
  friend IsometryMap isometry_from_map(const PointMap& f);

  Kind kind_;
  SpacePtr base_;
  SpacePtr domain_;
  SpacePtr codomain_;
  int fiber_dim_ = 1;
  std::vector<Column> columns_;
  std::optional<PointMap> point_map_;
};

/// u_f with u_f delta_x = delta_{f(x)}; requires f injective.
IsometryMap isometry_from_map(const PointMap& f);

/// Ad(u): a -> u a u* over the codomain space. For plain u from f this sends
/// e_{xy} to e_{f(x)f(y)} exactly.
BandOperator conjugate(const IsometryMap& u, const BandOperator& a);

/// An embedding presented by its values on matrix units: (x,y) -> Phi(e_{xy})
/// over the codomain. Linear extension gives Phi on arbitrary operators.
class EmbeddingTable {
 public:
  EmbeddingTable(SpacePtr domain, SpacePtr codomain, std::vector<BandOperator> values);

  /// Tabulates Ad(u)∘I_n for an isometry u with domain X x {1..n}
  /// (n = 1 and a plain u gives Ad(u_f)).
  static EmbeddingTable tabulate_spatial(const IsometryMap& u);

  const FiniteSpace& domain() const { return *domain_; }
  const FiniteSpace& codomain() const { return *codomain_; }
  const SpacePtr& domain_ptr() const { return domain_; }
  const SpacePtr& codomain_ptr() const { return codomain_; }

  const BandOperator& unit_image(PointId x, PointId y) const;

  /// Linear extension to a band operator over the domain.
  BandOperator apply(const BandOperator& a) const;

  /// Throws errc::malformed_embedding on failure. The weak check covers the
  /// diagonal projections (self-adjoint idempotents, mutually orthogonal) and
  /// adjoint compatibility; the full check adds multiplicativity on sampled
  /// triples. Rank classification runs the weak check only — cross-block
  /// multiplicativity is exactly what forces rank constancy, so a mixed-rank
  /// direct sum must still reach the `irregular` verdict.
  void validate(double tol = 1e-9, bool include_multiplicativity = true) const;

 private:
  SpacePtr domain_;
  SpacePtr codomain_;
  std::vector<BandOperator> values_;  // (x,y) at index x*|X| + y
};

struct RankProfile {
  enum class Kind { rank_one_preserving, one_to_n, irregular };
  Kind kind = Kind::irregular;
  int n = 0;                              // common rank when not irregular
  std::vector<PointId> ranks_by_point;    // rank of Phi(e_{xx}) per x
  std::vector<PointId> offenders;         // points off the common rank
};

/// Ranks of the diagonal projections Phi(e_{xx}); validates the table first.
RankProfile rank_profile(const EmbeddingTable& phi, double tol = 1e-9);

/// An orthonormal n-frame spanning Im(Phi(e_{x0 x0})), stored as dense
/// coordinate vectors over the codomain.
struct Frame {
  std::vector<std::vector<Scalar>> vectors;
};

/// Deterministic orthonormalization of the projection's columns in
/// coordinate order.
Frame default_frame(const EmbeddingTable& phi, PointId x0, double tol = 1e-9);

/// Rebuilds the implementing isometry from a 1-to-n rank-preserving table:
/// u (delta_x ⊗ xi_i) = Phi(e_{x0 x}) v_i. The frame must be orthonormal and
/// span Im(Phi(e_{x0 x0})) (errc::frame otherwise).
IsometryMap reconstruct_isometry(const EmbeddingTable& phi, PointId x0,
                                 const std::optional<Frame>& frame = std::nullopt,
                                 double tol = 1e-9);

struct SpatialCheck {
  bool pass = false;
  double max_deviation = 0.0;
  struct Counterexample {
    PointId x = 0, y = 0;  // matrix unit
    PointId v = 0, w = 0;  // codomain entry where the images differ
    double deviation = 0.0;
  };
  std::optional<Counterexample> counterexample;  // first in (x,y,v,w) order
};

/// Checks Phi(e_{xy}) = u I_n(e_{xy}) u* for all tabulated pairs, within tol.
SpatialCheck verify_spatial(const EmbeddingTable& phi, const IsometryMap& u,
                            double tol = 1e-12);

}  // namespace coarselab
