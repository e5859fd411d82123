#pragma once

#include <optional>
#include <vector>

#include "coarselab/map.hpp"

namespace coarselab {

/// Witness that the co-coarse inclusion ball(f(x), eps) ⊆ N_K(f(ball(x, delta)))
/// failed: target lies in the left side but not the right.
struct CoCoarseCounterexample {
  PointId x = 0;       // interior domain point
  PointId target = 0;  // uncovered codomain point
  Dist delta = 0;      // the largest delta attempted
};

struct ScaleVerdict {
  Dist eps = 0;
  bool pass = false;
  std::optional<Dist> delta;            // least witness when passing
  Dist modulus_at_eps = 0;              // coarseness side, finite on windows
  std::vector<PointId> interior;        // domain points the claim quantified over
  std::optional<CoCoarseCounterexample> counterexample;
  bool interior_empty = false;          // no point qualified at any attempted delta
};

/// Per-scale (eps, delta) certificate that a map is K-co-coarse on the
/// window's interior. `pass()` iff every scale passed.
struct QuotientCertificate {
  Dist k = 0;
  std::vector<ScaleVerdict> scales;

  bool pass() const {
    for (const auto& s : scales)
      if (!s.pass) return false;
    return !scales.empty();
  }
};

/// Least delta (over realized domain distances, ascending) such that
/// ball(f(x), eps) ⊆ N_K(f(ball(x, delta))) for every interior x.
/// Interior at (eps, delta): ball(x, delta) misses the domain truncation
/// boundary and ball(f(x), eps) misses the codomain one. A delta whose
/// interior set is empty certifies nothing and counts as failing.
std::optional<Dist> cococoarse_witness(const PointMap& f, Dist k, Dist eps);

QuotientCertificate quotient_certificate(const PointMap& f, Dist k,
                                         const std::vector<Dist>& scales,
                                         int parallelism = 1);

/// Per-ball cover data for a coarsely-n-to-1 witness: the preimage of every
/// radius-s codomain ball is covered by at most n pieces of diameter <= r.
struct NTo1Witness {
  Dist s = 0;
  Dist r = 0;
  int n = 0;
  /// pieces[y] covers the preimage of ball(y, s); ascending point order.
  std::vector<std::vector<std::vector<PointId>>> pieces;
};

/// Sweeps r over realized domain distances up to diam(domain)/2 (the
/// whole-window cover is a truncation artifact, not coarse content) and
/// returns the lexicographically least (n, r); absent when min n > n_max.
std::optional<NTo1Witness> n_to_1_witness(const PointMap& f, Dist s, int n_max);

/// Reuses a witness for f at scale s + 2*closeness(f,g) as a witness for g
/// at scale s (the pieces transfer verbatim). Throws errc::invariant_violation
/// if the transferred cover fails to validate.
NTo1Witness transfer_n_to_1_witness(const NTo1Witness& wf, const PointMap& g, Dist s);

void validate_n_to_1_witness(const PointMap& f, const NTo1Witness& w);

struct CompositionResult {
  Dist l = 0;  // K_g + modulus(g, K_f)
  QuotientCertificate certificate;  // for g∘f at L on the requested scales
};

CompositionResult composition_constant(Dist k_f, Dist k_g, const PointMap& f,
                                       const PointMap& g,
                                       const std::vector<Dist>& scales);

/// Injectivization: Z = Y x {1..n} with dist((y,i),(z,j)) = dist(y,z) + 1 on
/// distinct pairs; g enumerates each fiber; the inclusion lands in Y x {1}.
struct Injectivization {
  SpacePtr z;
  PointMap g;          // X -> Z, injective
  PointMap inclusion;  // Y -> Z, y -> (y, 1)
  int fiber_bound = 0; // n = max fiber size
  Dist closeness_to_f = 0;  // closeness(inclusion∘f, g), at most 1
};

Injectivization injectivize(const PointMap& f);

/// Greedy net of the m-bound argument for an injective K-co-coarse map:
/// the preimage of every interior ball(y, eps) is covered by at most
/// m = growth(codomain, K) balls of radius 3*delta(2*eps).
struct MBoundBall {
  PointId y = 0;
  std::vector<PointId> centers;            // picked domain points x_i
  std::vector<std::vector<PointId>> cover; // ball(x_i, 3*delta) per center
};

struct MBoundScale {
  Dist eps = 0;
  Dist delta = 0;   // witness at scale 2*eps
  int max_steps = 0;
  std::vector<MBoundBall> balls;
  std::vector<PointId> skipped;  // codomain points too close to the boundary
};

struct MBoundReport {
  std::int64_t m = 0;
  std::vector<MBoundScale> scales;
};

MBoundReport injective_quotient_m_bound(const PointMap& f, Dist k,
                                        const std::vector<Dist>& scales);

}  // namespace coarselab
