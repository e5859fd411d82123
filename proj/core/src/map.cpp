#include "coarselab/map.hpp"

#include <algorithm>

namespace coarselab {

PointMap::PointMap(SpacePtr domain, SpacePtr codomain, std::vector<PointId> values)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), values_(std::move(values)) {
  if (!domain_ || !codomain_) fail(errc::domain, "point map needs both spaces");
  if (values_.size() != domain_->size()) {
    fail(errc::domain, "map from '" + domain_->label() + "' needs " +
                           std::to_string(domain_->size()) + " values, got " +
                           std::to_string(values_.size()));
  }
  for (const PointId v : values_) {
    if (v >= codomain_->size()) {
      fail(errc::domain, "map value " + std::to_string(v) + " out of range for '" +
                             codomain_->label() + "'");
    }
  }
}

bool PointMap::injective() const {
  std::vector<char> hit(codomain_->size(), 0);
  for (const PointId v : values_) {
    if (hit[v]++) return false;
  }
  return true;
}

bool PointMap::surjective() const {
  std::vector<char> hit(codomain_->size(), 0);
  std::size_t distinct = 0;
  for (const PointId v : values_) {
    if (!hit[v]) {
      hit[v] = 1;
      ++distinct;
    }
  }
  return distinct == codomain_->size();
}

std::vector<std::vector<PointId>> PointMap::fibers() const {
  std::vector<std::vector<PointId>> out(codomain_->size());
  for (std::size_t x = 0; x < values_.size(); ++x) {
    out[values_[x]].push_back(static_cast<PointId>(x));
  }
  return out;
}

std::vector<PointId> PointMap::image() const {
  std::vector<PointId> out(values_);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PointMap identity_map(SpacePtr space) {
  std::vector<PointId> values(space->size());
  for (std::size_t x = 0; x < values.size(); ++x) values[x] = static_cast<PointId>(x);
  SpacePtr codomain = space;
  return PointMap(std::move(space), std::move(codomain), std::move(values));
}

PointMap compose(const PointMap& g, const PointMap& f) {
  if (!same_space(f.codomain(), g.domain())) {
    fail(errc::domain, "cannot compose: '" + f.codomain().label() + "' != '" +
                           g.domain().label() + "'");
  }
  std::vector<PointId> values(f.domain().size());
  for (std::size_t x = 0; x < values.size(); ++x) {
    values[x] = g(f(static_cast<PointId>(x)));
  }
  return PointMap(f.domain_ptr(), g.codomain_ptr(), std::move(values));
}

Dist modulus(const PointMap& f, Dist t) {
  const FiniteSpace& x = f.domain();
  const FiniteSpace& y = f.codomain();
  Dist best = 0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    for (std::size_t b = a + 1; b < x.size(); ++b) {
      const PointId pa = static_cast<PointId>(a), pb = static_cast<PointId>(b);
      if (x.dist(pa, pb) <= t) best = std::max(best, y.dist(f(pa), f(pb)));
    }
  }
  return best;
}

Dist closeness(const PointMap& f, const PointMap& g) {
  if (!same_space(f.domain(), g.domain()) || !same_space(f.codomain(), g.codomain())) {
    fail(errc::domain, "closeness needs maps over the same spaces");
  }
  Dist best = 0;
  for (std::size_t x = 0; x < f.domain().size(); ++x) {
    best = std::max(best, f.codomain().dist(f(static_cast<PointId>(x)),
                                            g(static_cast<PointId>(x))));
  }
  return best;
}

}  // namespace coarselab
