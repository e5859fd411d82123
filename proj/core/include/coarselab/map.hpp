#pragma once

#include <memory>
#include <vector>

#include "coarselab/space.hpp"

namespace coarselab {

/// A total map between two finite spaces, stored as one codomain point per
/// domain point.
class PointMap {
 public:
  PointMap() = default;
  PointMap(SpacePtr domain, SpacePtr codomain, std::vector<PointId> values);

  const FiniteSpace& domain() const { return *domain_; }
  const FiniteSpace& codomain() const { return *codomain_; }
  const SpacePtr& domain_ptr() const { return domain_; }
  const SpacePtr& codomain_ptr() const { return codomain_; }

  PointId operator()(PointId x) const { return values_[x]; }
  const std::vector<PointId>& values() const { return values_; }

  bool injective() const;
  bool surjective() const;
  bool bijective() const { return injective() && surjective(); }

  /// Preimages grouped by codomain point, each in ascending domain order.
  std::vector<std::vector<PointId>> fibers() const;

  /// Image as a sorted set of codomain points.
  std::vector<PointId> image() const;

 private:
  SpacePtr domain_;
  SpacePtr codomain_;
  std::vector<PointId> values_;
};

PointMap identity_map(SpacePtr space);

/// g after f; spaces must chain.
PointMap compose(const PointMap& g, const PointMap& f);

/// Modulus of uniform continuity at scale t: the largest codomain distance
/// realized by pairs at domain distance <= t. Monotone in t.
Dist modulus(const PointMap& f, Dist t);

/// sup_x dist(f(x), g(x)); requires equal domains and codomains.
Dist closeness(const PointMap& f, const PointMap& g);

}  // namespace coarselab
