#pragma once

#include "coarselab/certify.hpp"

namespace coarselab {

/// Orbit space of a finite group of permutations, with the min-of-directed
/// sup-inf metric. The quotient distance matrix is validated; a triangle
/// violation flags the result `nonmetric` (never silently repaired).
struct OrbitResult {
  SpacePtr quotient;                 // nonmetric() reports the flag
  PointMap q;                        // class map X -> X/G
  Dist max_displacement = 0;         // max_{g,x} d(x, g·x); the K used below
  QuotientCertificate certificate;   // for q at K on the given scales
  std::vector<std::pair<Dist, Dist>> distortion;  // (t, max_g ω_g(t)) per scale
};

/// Verifies the permutations form a group (identity, closure, inverses) and
/// that each acts bijectively; throws errc::group_axiom otherwise.
OrbitResult orbit_space(SpacePtr space, const std::vector<std::vector<PointId>>& action,
                        const std::vector<Dist>& cert_scales = {1, 2, 4});

}  // namespace coarselab
