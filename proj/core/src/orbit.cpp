#include "coarselab/orbit.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace coarselab {

namespace {

using Perm = std::vector<PointId>;

bool is_permutation(const Perm& p, std::size_t n) {
  if (p.size() != n) return false;
  std::vector<char> seen(n, 0);
  for (const PointId v : p) {
    if (v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

Perm compose_perm(const Perm& a, const Perm& b) {  // a after b
  Perm out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = a[b[i]];
  return out;
}

Perm invert_perm(const Perm& p) {
  Perm out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[p[i]] = static_cast<PointId>(i);
  return out;
}

}  // namespace

OrbitResult orbit_space(SpacePtr space, const std::vector<std::vector<PointId>>& action,
                        const std::vector<Dist>& cert_scales) {
  const FiniteSpace& x = *space;
  const std::size_t n = x.size();
  if (action.empty()) fail(errc::group_axiom, "action needs at least the identity");

  std::set<Perm> group;
  for (const auto& p : action) {
    if (!is_permutation(p, n)) {
      fail(errc::group_axiom, "action element is not a permutation of the space");
    }
    group.insert(p);
  }
  Perm id(n);
  std::iota(id.begin(), id.end(), 0);
  if (!group.count(id)) fail(errc::group_axiom, "action does not contain the identity");
  for (const auto& p : group) {
    if (!group.count(invert_perm(p))) {
      fail(errc::group_axiom, "action is not closed under inverses");
    }
    for (const auto& q : group) {
      if (!group.count(compose_perm(p, q))) {
        fail(errc::group_axiom, "action is not closed under composition");
      }
    }
  }

  // orbits, ordered by least member
  std::vector<int> orbit_of(n, -1);
  std::vector<std::vector<PointId>> orbits;
  for (std::size_t i = 0; i < n; ++i) {
    if (orbit_of[i] >= 0) continue;
    const int idx = static_cast<int>(orbits.size());
    std::vector<PointId> members;
    std::vector<PointId> stack{static_cast<PointId>(i)};
    orbit_of[i] = idx;
    while (!stack.empty()) {
      const PointId u = stack.back();
      stack.pop_back();
      members.push_back(u);
      for (const auto& g : group) {
        const PointId v = g[u];
        if (orbit_of[v] < 0) {
          orbit_of[v] = idx;
          stack.push_back(v);
        }
      }
    }
    std::sort(members.begin(), members.end());
    orbits.push_back(std::move(members));
  }

  // ∂([x],[y]) = min of the two directed sup-inf quantities
  const std::size_t m = orbits.size();
  std::vector<std::vector<Dist>> dist(m, std::vector<Dist>(m, 0));
  auto directed = [&](const std::vector<PointId>& from, const std::vector<PointId>& to) {
    Dist sup = 0;
    for (const PointId a : from) {
      Dist inf = std::numeric_limits<Dist>::max();
      for (const PointId b : to) inf = std::min(inf, x.dist(a, b));
      sup = std::max(sup, inf);
    }
    return sup;
  };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const Dist d = std::min(directed(orbits[i], orbits[j]), directed(orbits[j], orbits[i]));
      dist[i][j] = dist[j][i] = d;
    }
  }

  Dist max_displacement = 0;
  for (const auto& g : group) {
    for (std::size_t i = 0; i < n; ++i) {
      max_displacement = std::max(max_displacement, x.dist(static_cast<PointId>(i), g[i]));
    }
  }

  FiniteSpace q_space = FiniteSpace::from_distance_matrix(
      x.label() + "/G", dist, /*allow_nonmetric=*/true, std::max(kDefaultPointCap, m));
  std::vector<PointId> q_boundary;
  for (std::size_t i = 0; i < m; ++i) {
    for (const PointId member : orbits[i]) {
      if (std::binary_search(x.truncation_boundary().begin(),
                             x.truncation_boundary().end(), member)) {
        q_boundary.push_back(static_cast<PointId>(i));
        break;
      }
    }
  }
  // permutations of the window keep orbits complete, so the quotient metric
  // is exact; only the inherited truncation frontier needs marking
  q_space = q_space.with_truncation_boundary(std::move(q_boundary))
                .with_interior_margin(x.interior_margin());
  SpacePtr qp = share(std::move(q_space));

  std::vector<PointId> qvals(n);
  for (std::size_t i = 0; i < n; ++i) qvals[i] = static_cast<PointId>(orbit_of[i]);
  PointMap q(space, qp, std::move(qvals));

  OrbitResult out{qp, q, max_displacement, {}, {}};
  out.certificate = quotient_certificate(q, max_displacement, cert_scales);
  for (const Dist t : cert_scales) {
    Dist worst = 0;
    for (const auto& g : group) {
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
          if (x.dist(static_cast<PointId>(a), static_cast<PointId>(b)) <= t) {
            worst = std::max(worst, x.dist(g[a], g[b]));
          }
        }
      }
    }
    out.distortion.emplace_back(t, worst);
  }
  return out;
}

}  // namespace coarselab
