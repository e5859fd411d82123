#pragma once

// Brute-force oracles kept independent of the implementation paths they
// check. Expected values in the tests were computed by these and frozen.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "coarselab/band_operator.hpp"
#include "coarselab/map.hpp"

namespace coarselab::oracle {

/// l1 ball in Z^dim by direct coordinate enumeration (no space machinery).
inline std::int64_t l1_ball_size(const std::vector<Dist>& center, Dist side, Dist r) {
  std::vector<std::vector<Dist>> frontier{{}};
  for (const Dist c : center) {
    std::vector<std::vector<Dist>> next;
    for (const auto& prefix : frontier) {
      for (Dist v = 0; v < side; ++v) {
        auto p = prefix;
        p.push_back(v);
        next.push_back(std::move(p));
      }
    }
    frontier = std::move(next);
    (void)c;
  }
  std::int64_t count = 0;
  for (const auto& p : frontier) {
    Dist d = 0;
    for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - center[i]);
    if (d <= r) ++count;
  }
  return count;
}

/// Minimum number of K-separated classes by exhaustive backtracking with
/// label symmetry breaking (point i may open at most one fresh class), n <= 12.
inline bool separated_colorable(const FiniteSpace& space, Dist k, int classes,
                                std::vector<int>& assign, std::size_t pos, int used) {
  const std::size_t n = space.size();
  if (pos == n) return true;
  const int limit = std::min(classes - 1, used);  // classes 0..used are tryable
  for (int c = 0; c <= limit; ++c) {
    bool ok = true;
    for (std::size_t prev = 0; prev < pos && ok; ++prev) {
      if (assign[prev] == c &&
          space.dist(static_cast<PointId>(prev), static_cast<PointId>(pos)) < k) {
        ok = false;
      }
    }
    if (!ok) continue;
    assign[pos] = c;
    if (separated_colorable(space, k, classes, assign, pos + 1,
                            std::max(used, c + 1))) {
      return true;
    }
  }
  return false;
}

inline int min_separated_classes(const FiniteSpace& space, Dist k) {
  const std::size_t n = space.size();
  for (int classes = 1; classes <= static_cast<int>(n); ++classes) {
    std::vector<int> assign(n, -1);
    if (separated_colorable(space, k, classes, assign, 0, 0)) return classes;
  }
  return static_cast<int>(n);
}

/// Definition-level co-coarse check: for all x in the given set,
/// ball(f(x), eps) ⊆ N_K(f(ball(x, delta))).
inline bool cococoarse_holds(const PointMap& f, Dist k, Dist eps, Dist delta,
                             const std::vector<PointId>& quantified) {
  const FiniteSpace& dom = f.domain();
  const FiniteSpace& cod = f.codomain();
  for (const PointId x : quantified) {
    for (std::size_t t = 0; t < cod.size(); ++t) {
      if (cod.dist(f(x), static_cast<PointId>(t)) > eps) continue;
      bool covered = false;
      for (std::size_t z = 0; z < dom.size() && !covered; ++z) {
        if (dom.dist(x, static_cast<PointId>(z)) > delta) continue;
        covered = cod.dist(f(static_cast<PointId>(z)), static_cast<PointId>(t)) <= k;
      }
      if (!covered) return false;
    }
  }
  return true;
}

inline Eigen::MatrixXcd dense_of(const BandOperator& a) {
  const auto n = static_cast<Eigen::Index>(a.space().size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& e : a.entries()) m(e.y, e.x) = e.value;
  return m;
}

/// Spectral norm via dense SVD (a route independent of the library's
/// eigensolve-on-a*a and power iteration paths).
inline double svd_norm(const BandOperator& a) {
  if (a.is_zero()) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(dense_of(a));
  return svd.singularValues()(0);
}

inline double svd_norm(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

inline Eigen::Index dense_rank(const BandOperator& a, double tol = 1e-9) {
  if (a.is_zero()) return 0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(dense_of(a));
  qr.setThreshold(tol);
  return qr.rank();
}

/// Largest codomain distance over pairs within t, by definition.
inline Dist brute_modulus(const PointMap& f, Dist t) {
  Dist best = 0;
  for (std::size_t a = 0; a < f.domain().size(); ++a) {
    for (std::size_t b = 0; b < f.domain().size(); ++b) {
      if (f.domain().dist(static_cast<PointId>(a), static_cast<PointId>(b)) <= t) {
        best = std::max(best, f.codomain().dist(f(static_cast<PointId>(a)),
                                                f(static_cast<PointId>(b))));
      }
    }
  }
  return best;
}

}  // namespace coarselab::oracle
