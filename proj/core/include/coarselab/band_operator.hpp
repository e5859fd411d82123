#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "coarselab/space.hpp"

namespace coarselab {

using Scalar = std::complex<double>;

/// One sparse entry of an operator on l2(space). The value at (x, y) is
/// <a delta_x, delta_y>: column x is the input point, row y the output, so
/// the matrix unit with a single 1 at (x, y) maps delta_x to delta_y.
struct OperatorEntry {
  PointId x = 0;  // input (column)
  PointId y = 0;  // output (row)
  Scalar value{0.0, 0.0};
};

/// A finite-window band operator: a sparse complex matrix indexed by the
/// points of one space, with its propagation (largest distance between the
/// input and output of a nonzero entry) cached. Immutable.
class BandOperator {
 public:
  BandOperator() = default;
  BandOperator(SpacePtr space, std::vector<OperatorEntry> entries);

  static BandOperator zero(SpacePtr space);
  /// e_{xy}: the partial isometry with e_{xy} delta_x = delta_y.
  static BandOperator matrix_unit(SpacePtr space, PointId x, PointId y);
  /// chi_A: the diagonal 0/1 projection onto A.
  static BandOperator indicator(SpacePtr space, const std::vector<PointId>& a);
  static BandOperator identity(SpacePtr space);

  const FiniteSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }

  /// Entries sorted by (x, y), zeros dropped.
  const std::vector<OperatorEntry>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }
  std::size_t nnz() const { return entries_.size(); }

  Dist propagation() const { return propagation_; }
  std::vector<std::pair<PointId, PointId>> support() const;

  Scalar entry(PointId x, PointId y) const;

  /// Apply to a coordinate vector over the space's points.
  std::vector<Scalar> apply(const std::vector<Scalar>& v) const;

  BandOperator adjoint() const;
  BandOperator scaled(Scalar factor) const;

  double max_abs_entry() const;
  double frobenius_norm() const;

  friend BandOperator add(const BandOperator& a, const BandOperator& b);
  friend BandOperator subtract(const BandOperator& a, const BandOperator& b);
  /// Operator composition a∘b (the right factor acts first), so that
  /// multiply(e_{yz}, e_{xy}) = e_{xz}.
  friend BandOperator multiply(const BandOperator& a, const BandOperator& b);

  friend bool operator==(const BandOperator& a, const BandOperator& b);

 private:
  void normalize();

  SpacePtr space_;
  std::vector<OperatorEntry> entries_;
  Dist propagation_ = 0;
};

BandOperator operator+(const BandOperator& a, const BandOperator& b);
BandOperator operator-(const BandOperator& a, const BandOperator& b);
BandOperator operator*(const BandOperator& a, const BandOperator& b);

Dist propagation(const BandOperator& a);
std::vector<std::pair<PointId, PointId>> support(const BandOperator& a);

/// Entrywise max |a - b|; the exact-arithmetic comparisons use == instead.
double max_entry_distance(const BandOperator& a, const BandOperator& b);

struct TruncationResult {
  BandOperator band;  // entries with dist(x,y) <= r
  double error = 0.0; // operator norm of the discarded tail
};

/// Entry-zeroing band truncation: a witness that `a` is err-r-approximable
/// (an upper bound on the optimal approximation error, not claimed optimal).
TruncationResult truncate(const BandOperator& a, Dist r, double tol = 1e-9);

/// max |entry(x,y)| over x,y outside A — the finite-window ghost diagnostic.
double ghost_tail(const BandOperator& a, const std::vector<PointId>& a_set);

/// Spectral norm within multiplicative tolerance tol. Dense Hermitian
/// eigensolve on a*a for spaces of at most 32 points; power iteration with a
/// deterministic start vector above that. Non-convergence raises
/// errc::numeric carrying the best bracket in the message.
double operator_norm(const BandOperator& a, double tol = 1e-9);

/// Seed recorded in CLI reports for the power-iteration start vector.
std::uint64_t operator_norm_seed() noexcept;

}  // namespace coarselab
