#pragma once

#include "coarselab/map.hpp"

namespace coarselab::gallery {

/// 1-D integer interval [lo, hi] with |i-j|; point index i holds value lo+i.
struct IntervalWindow {
  SpacePtr space;
  Dist lo = 0;
  Dist hi = 0;

  PointId id_of(Dist value) const;
  Dist value_of(PointId id) const;
};

/// Window of Z: truncation boundary at both ends.
IntervalWindow int_window(Dist lo, Dist hi);

/// Window {1..n} of N = {1,2,...}: 1 is a genuine edge of N, so only the
/// top end is truncation boundary.
IntervalWindow nat_window(Dist n);

/// The bijective folding coarse quotient Z -> N, f(v) = 2v for v >= 1 and
/// f(v) = -2v+1 for v <= 0, restricted to the window mapping onto {1..n}.
struct FoldingMap {
  IntervalWindow domain;
  IntervalWindow codomain;
  PointMap map;
};
FoldingMap folding_map(Dist n);

/// Coordinate-dropping projection between grid windows of equal side
/// (the standard projection Z^m -> Z^n on windows; keeps the first axes).
PointMap grid_projection(SpacePtr from, SpacePtr to);

struct ProjectionMap {
  SpacePtr domain;
  SpacePtr codomain;
  PointMap map;
};
ProjectionMap projection_2d_to_1d(Dist side);

/// {identity, x -> -x} on an int window [-m, m].
std::vector<std::vector<PointId>> reflection_action(const IntervalWindow& window);

/// Cycle C_{2k} folded onto a path by v -> min(v, 2k-v): the 2-to-1 double
/// cover example on graphs.
struct DoubleCover {
  SpacePtr cycle;
  SpacePtr path;
  PointMap map;
};
DoubleCover cycle_double_cover(int k);

/// v -> 2v as a map {1..n} -> {1..2n}; injective, not co-coarse at K=0.
struct DoubleSpacing {
  IntervalWindow domain;
  IntervalWindow codomain;
  PointMap map;
};
DoubleSpacing double_spacing(Dist n);

/// True when the space carries the path metric in index order (dist = |i-j|).
bool is_path_window(const FiniteSpace& space);

}  // namespace coarselab::gallery
