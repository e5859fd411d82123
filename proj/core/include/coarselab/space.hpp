#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coarselab/error.hpp"

namespace coarselab {

/// Index of a point inside its owning space's point list.
using PointId = std::uint32_t;

/// Exact metric distance. All spaces here carry integral metrics
/// (word metrics, shortest-path metrics and the constructions derived
/// from them), so certificate checks are bit-reproducible.
using Dist = std::int64_t;

inline constexpr std::size_t kDefaultPointCap = 20000;

struct TriangleViolation {
  PointId x = 0, y = 0, z = 0;  // dist(x,z) > dist(x,y) + dist(y,z)
};

/// A finite window of a uniformly locally finite metric space.
///
/// Immutable after construction. Two storage kinds: an explicit distance
/// matrix, or an l1 grid window whose distances are computed from
/// coordinates on the fly. A window additionally records which points sit
/// on the truncation boundary (where the ambient infinite space was cut
/// off); quantified certificates restrict universal claims to points whose
/// relevant balls stay clear of that set.
class FiniteSpace {
 public:
  FiniteSpace() = default;

  /// Validates symmetry, zero diagonal, discreteness (min positive
  /// distance >= 1) and the triangle inequality. A triangle violation is
  /// fatal unless allow_nonmetric is set, in which case the space is
  /// flagged and the first violation retained.
  static FiniteSpace from_distance_matrix(std::string label,
                                          const std::vector<std::vector<Dist>>& dist,
                                          bool allow_nonmetric = false,
                                          std::size_t point_cap = kDefaultPointCap);

  /// Shortest-path metric of a connected graph with unit edge weights.
  static FiniteSpace from_edges(std::string label, std::size_t n,
                                const std::vector<std::pair<PointId, PointId>>& edges,
                                std::size_t point_cap = kDefaultPointCap);

  /// {0,...,side-1}^dim with the l1 word metric; every outer face is
  /// truncation boundary.
  static FiniteSpace grid(std::string label, int dim, Dist side,
                          std::size_t point_cap = kDefaultPointCap);

  const std::string& label() const { return label_; }
  std::size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }

  Dist dist(PointId x, PointId y) const;
  Dist diameter() const { return diameter_; }
  Dist min_positive_distance() const { return min_pos_; }

  bool nonmetric() const { return nonmetric_; }
  const std::optional<TriangleViolation>& triangle_violation() const {
    return violation_;
  }

  Dist interior_margin() const { return margin_; }
  const std::vector<PointId>& truncation_boundary() const { return boundary_; }

  /// Value-semantic modifiers (windows are assembled by builders).
  FiniteSpace with_label(std::string label) const;
  FiniteSpace with_truncation_boundary(std::vector<PointId> boundary) const;
  FiniteSpace with_interior_margin(Dist margin) const;

  /// Closed ball {y : dist(x,y) <= r}, ascending point order.
  std::vector<PointId> ball(PointId x, Dist r) const;

  /// K-neighborhood A^K = {x : dist(x, A) <= K}; A must be sorted.
  std::vector<PointId> neighborhood(const std::vector<PointId>& a, Dist k) const;

  /// max_x |ball(x, r)| — the finite-window u.l.f. witness.
  std::int64_t growth(Dist r) const;

  /// Distance from x to the truncation boundary; nullopt when the window
  /// has none (a genuine whole space, e.g. a graph space).
  std::optional<Dist> boundary_distance(PointId x) const;

  /// A point is interior for a check needing radius rho when its
  /// (rho + margin)-ball misses the truncation boundary.
  bool is_interior(PointId x, Dist radius) const;
  std::vector<PointId> interior_points(Dist radius) const;

  /// Sorted distinct distances realized between pairs of points
  /// (always contains 0 for a nonempty space).
  const std::vector<Dist>& realized_distances() const { return realized_; }

  bool is_grid() const { return kind_ == Kind::grid; }
  int grid_dim() const;
  Dist grid_side() const;
  /// Coordinates of a grid point, most significant axis first.
  std::vector<Dist> grid_coordinates(PointId x) const;
  PointId grid_point(const std::vector<Dist>& coords) const;

  /// Label + size equality; the identity used for domain checks.
  friend bool same_space(const FiniteSpace& a, const FiniteSpace& b) {
    return a.n_ == b.n_ && a.label_ == b.label_;
  }

 private:
  enum class Kind { explicit_matrix, grid };

  void finalize_explicit(bool allow_nonmetric, bool skip_triangle = false);
  void check_point(PointId x) const;

  std::string label_;
  std::size_t n_ = 0;
  Kind kind_ = Kind::explicit_matrix;

  // explicit kind
  std::vector<std::int32_t> matrix_;  // n*n row-major

  // grid kind
  int dim_ = 0;
  Dist side_ = 0;

  std::vector<PointId> boundary_;  // sorted
  bool grid_faces_ = false;        // boundary_ is exactly the grid's outer faces
  Dist margin_ = 0;
  bool nonmetric_ = false;
  std::optional<TriangleViolation> violation_;

  Dist diameter_ = 0;
  Dist min_pos_ = 0;
  std::vector<Dist> realized_;
};

using SpacePtr = std::shared_ptr<const FiniteSpace>;

inline SpacePtr share(FiniteSpace space) {
  return std::make_shared<const FiniteSpace>(std::move(space));
}

/// {0,...,side-1}^dim with the l1 metric (word metric on Z^dim).
FiniteSpace build_grid_window(int dim, Dist side,
                              std::size_t point_cap = kDefaultPointCap);

/// Shortest-path metric space of a connected graph.
FiniteSpace build_graph_space(std::size_t n,
                              const std::vector<std::pair<PointId, PointId>>& edges,
                              std::size_t point_cap = kDefaultPointCap);

struct Partition {
  std::vector<std::vector<PointId>> classes;
  Dist separation = 0;
};

/// Greedy first-fit partition into K-separated classes (all pairwise
/// distances within a class >= K). Deterministic: points in index order,
/// ties broken by lowest class index.
Partition separated_partition(const FiniteSpace& space, Dist k);

/// Validates the Partition invariants by direct pairwise scan.
void validate_partition(const FiniteSpace& space, const Partition& partition);

std::int64_t growth_function(const FiniteSpace& space, Dist r);

}  // namespace coarselab
