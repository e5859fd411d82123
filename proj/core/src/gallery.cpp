#include "coarselab/gallery.hpp"

#include <numeric>
#include <sstream>

namespace coarselab::gallery {

PointId IntervalWindow::id_of(Dist value) const {
  if (value < lo || value > hi) {
    fail(errc::domain, "value " + std::to_string(value) + " outside [" +
                           std::to_string(lo) + "," + std::to_string(hi) + "]");
  }
  return static_cast<PointId>(value - lo);
}

Dist IntervalWindow::value_of(PointId id) const {
  if (id >= space->size()) fail(errc::domain, "interval point out of range");
  return lo + static_cast<Dist>(id);
}

IntervalWindow int_window(Dist lo, Dist hi) {
  if (hi < lo) fail(errc::domain, "empty interval window");
  std::ostringstream label;
  label << "Z[" << lo << "," << hi << "]";
  FiniteSpace space = FiniteSpace::grid(label.str(), 1, hi - lo + 1);
  return IntervalWindow{share(std::move(space)), lo, hi};
}

IntervalWindow nat_window(Dist n) {
  if (n < 1) fail(errc::domain, "nat window needs n >= 1");
  std::ostringstream label;
  label << "N[1," << n << "]";
  FiniteSpace space = FiniteSpace::grid(label.str(), 1, n);
  space = space.with_truncation_boundary({static_cast<PointId>(n - 1)});
  return IntervalWindow{share(std::move(space)), 1, n};
}

FoldingMap folding_map(Dist n) {
  if (n < 1) fail(errc::domain, "folding window needs n >= 1");
  const Dist hi = n / 2;
  const Dist lo = hi - n + 1;  // [1-M, M] for n = 2M, [-M, M] for n = 2M+1
  FoldingMap out{int_window(lo, hi), nat_window(n), {}};
  std::vector<PointId> values(out.domain.space->size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Dist v = out.domain.value_of(static_cast<PointId>(i));
    const Dist w = v >= 1 ? 2 * v : -2 * v + 1;
    values[i] = out.codomain.id_of(w);
  }
  out.map = PointMap(out.domain.space, out.codomain.space, std::move(values));
  return out;
}

PointMap grid_projection(SpacePtr from, SpacePtr to) {
  const int m = from->grid_dim();
  const int n = to->grid_dim();
  if (n > m || from->grid_side() != to->grid_side()) {
    fail(errc::domain, "grid projection needs fewer axes over the same side");
  }
  std::vector<PointId> values(from->size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto coords = from->grid_coordinates(static_cast<PointId>(i));
    values[i] = to->grid_point(std::vector<Dist>(coords.begin(), coords.begin() + n));
  }
  return PointMap(std::move(from), std::move(to), std::move(values));
}

ProjectionMap projection_2d_to_1d(Dist side) {
  ProjectionMap out;
  out.domain = share(build_grid_window(2, side));
  out.codomain = share(build_grid_window(1, side));
  out.map = grid_projection(out.domain, out.codomain);
  return out;
}

std::vector<std::vector<PointId>> reflection_action(const IntervalWindow& window) {
  if (window.lo != -window.hi) {
    fail(errc::domain, "reflection needs a window symmetric around 0");
  }
  const std::size_t n = window.space->size();
  std::vector<PointId> id(n), refl(n);
  std::iota(id.begin(), id.end(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    refl[i] = window.id_of(-window.value_of(static_cast<PointId>(i)));
  }
  return {id, refl};
}

DoubleCover cycle_double_cover(int k) {
  if (k < 2) fail(errc::domain, "double cover needs k >= 2");
  const std::size_t n = 2 * static_cast<std::size_t>(k);
  std::vector<std::pair<PointId, PointId>> cycle_edges;
  for (std::size_t i = 0; i < n; ++i) {
    cycle_edges.emplace_back(static_cast<PointId>(i), static_cast<PointId>((i + 1) % n));
  }
  std::vector<std::pair<PointId, PointId>> path_edges;
  for (int i = 0; i < k; ++i) {
    path_edges.emplace_back(static_cast<PointId>(i), static_cast<PointId>(i + 1));
  }
  DoubleCover out;
  out.cycle = share(FiniteSpace::from_edges("C" + std::to_string(n), n, cycle_edges));
  out.path = share(FiniteSpace::from_edges("P" + std::to_string(k + 1),
                                           static_cast<std::size_t>(k) + 1, path_edges));
  std::vector<PointId> values(n);
  for (std::size_t v = 0; v < n; ++v) {
    values[v] = static_cast<PointId>(std::min(v, n - v));
  }
  out.map = PointMap(out.cycle, out.path, std::move(values));
  return out;
}

DoubleSpacing double_spacing(Dist n) {
  DoubleSpacing out{nat_window(n), nat_window(2 * n), {}};
  std::vector<PointId> values(out.domain.space->size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = out.codomain.id_of(2 * out.domain.value_of(static_cast<PointId>(i)));
  }
  out.map = PointMap(out.domain.space, out.codomain.space, std::move(values));
  return out;
}

bool is_path_window(const FiniteSpace& space) {
  for (std::size_t i = 0; i < space.size(); ++i) {
    for (std::size_t j = i + 1; j < space.size(); ++j) {
      if (space.dist(static_cast<PointId>(i), static_cast<PointId>(j)) !=
          static_cast<Dist>(j - i)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace coarselab::gallery
