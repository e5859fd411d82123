#include "coarselab/certify.hpp"

#include <algorithm>
#include <future>

namespace coarselab {

namespace {

std::vector<char> mask_of(const std::vector<PointId>& pts, std::size_t n) {
  std::vector<char> mask(n, 0);
  for (const PointId p : pts) mask[p] = 1;
  return mask;
}

struct DeltaAttempt {
  bool pass = false;
  bool interior_empty = false;
  std::vector<PointId> interior;
  std::optional<CoCoarseCounterexample> counterexample;
};

DeltaAttempt attempt_delta(const PointMap& f, Dist k, Dist eps, Dist delta) {
  const FiniteSpace& dom = f.domain();
  const FiniteSpace& cod = f.codomain();
  DeltaAttempt out;
  // x qualifies when its delta-ball is complete on the domain side and the
  // eps-ball around f(x) is complete on the codomain side; the K-neighborhood
  // condition is pointwise, so codomain truncation only makes the check harder.
  for (std::size_t xi = 0; xi < dom.size(); ++xi) {
    const PointId x = static_cast<PointId>(xi);
    if (!dom.is_interior(x, delta) || !cod.is_interior(f(x), eps)) continue;
    out.interior.push_back(x);
  }
  if (out.interior.empty()) {
    out.interior_empty = true;
    return out;
  }
  for (const PointId x : out.interior) {
    std::vector<PointId> image;
    for (const PointId z : dom.ball(x, delta)) image.push_back(f(z));
    std::sort(image.begin(), image.end());
    image.erase(std::unique(image.begin(), image.end()), image.end());

    const auto covered = mask_of(cod.neighborhood(image, k), cod.size());
    for (const PointId target : cod.ball(f(x), eps)) {
      if (!covered[target]) {
        out.counterexample = CoCoarseCounterexample{x, target, delta};
        return out;
      }
    }
  }
  out.pass = true;
  return out;
}

ScaleVerdict verdict_for_scale(const PointMap& f, Dist k, Dist eps) {
  ScaleVerdict v;
  v.eps = eps;
  v.modulus_at_eps = modulus(f, eps);
  bool saw_nonempty = false;
  for (const Dist delta : f.domain().realized_distances()) {
    DeltaAttempt attempt = attempt_delta(f, k, eps, delta);
    if (attempt.pass) {
      v.pass = true;
      v.delta = delta;
      v.interior = std::move(attempt.interior);
      return v;
    }
    if (!attempt.interior_empty) {
      saw_nonempty = true;
      v.counterexample = attempt.counterexample;
      v.interior = std::move(attempt.interior);
    }
  }
  v.pass = false;
  v.interior_empty = !saw_nonempty;
  return v;
}

}  // namespace

std::optional<Dist> cococoarse_witness(const PointMap& f, Dist k, Dist eps) {
  if (k < 0 || eps < 0) fail(errc::domain, "co-coarse witness needs K, eps >= 0");
  const ScaleVerdict v = verdict_for_scale(f, k, eps);
  return v.delta;
}

QuotientCertificate quotient_certificate(const PointMap& f, Dist k,
                                         const std::vector<Dist>& scales,
                                         int parallelism) {
  if (scales.empty()) fail(errc::domain, "quotient certificate needs nonempty scales");
  if (k < 0) fail(errc::domain, "quotient certificate needs K >= 0");
  QuotientCertificate cert;
  cert.k = k;
  cert.scales.resize(scales.size());
  if (parallelism > 1 && scales.size() > 1) {
    std::vector<std::future<ScaleVerdict>> jobs;
    jobs.reserve(scales.size());
    for (const Dist eps : scales) {
      jobs.push_back(std::async(std::launch::async,
                                [&f, k, eps] { return verdict_for_scale(f, k, eps); }));
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) cert.scales[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < scales.size(); ++i) {
      cert.scales[i] = verdict_for_scale(f, k, scales[i]);
    }
  }
  return cert;
}

namespace {

// Greedy cover of one preimage set by pieces of diameter <= r: r-connected
// components first, each chunked in ascending point order.
std::vector<std::vector<PointId>> chunk_preimage(const FiniteSpace& dom,
                                                 const std::vector<PointId>& pre,
                                                 Dist r) {
  std::vector<std::vector<PointId>> pieces;
  const std::size_t m = pre.size();
  if (m == 0) return pieces;

  std::vector<int> comp(m, -1);
  int n_comp = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (comp[i] >= 0) continue;
    // BFS over the "distance <= r" relation
    comp[i] = n_comp;
    std::vector<std::size_t> stack{i};
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < m; ++v) {
        if (comp[v] < 0 && dom.dist(pre[u], pre[v]) <= r) {
          comp[v] = n_comp;
          stack.push_back(v);
        }
      }
    }
    ++n_comp;
  }

  for (int c = 0; c < n_comp; ++c) {
    std::vector<PointId> members;
    for (std::size_t i = 0; i < m; ++i)
      if (comp[i] == c) members.push_back(pre[i]);
    std::vector<char> used(members.size(), 0);
    for (std::size_t seed = 0; seed < members.size(); ++seed) {
      if (used[seed]) continue;
      std::vector<PointId> piece{members[seed]};
      used[seed] = 1;
      for (std::size_t j = seed + 1; j < members.size(); ++j) {
        if (used[j]) continue;
        bool fits = true;
        for (const PointId q : piece) {
          if (dom.dist(members[j], q) > r) {
            fits = false;
            break;
          }
        }
        if (fits) {
          piece.push_back(members[j]);
          used[j] = 1;
        }
      }
      pieces.push_back(std::move(piece));
    }
  }
  return pieces;
}

}  // namespace

std::optional<NTo1Witness> n_to_1_witness(const PointMap& f, Dist s, int n_max) {
  if (s < 0) fail(errc::domain, "n-to-1 witness needs s >= 0");
  if (n_max < 1) fail(errc::domain, "n-to-1 witness needs n_max >= 1");
  const FiniteSpace& dom = f.domain();
  const FiniteSpace& cod = f.codomain();
  if (dom.empty() || cod.empty()) return std::nullopt;

  // Every diameter-<=s subset of Y sits inside some radius-s ball, so it
  // suffices to cover the preimages of the balls.
  std::vector<std::vector<PointId>> preimages(cod.size());
  for (std::size_t x = 0; x < dom.size(); ++x) {
    // x belongs to the preimage of ball(y, s) iff dist(f(x), y) <= s
    for (std::size_t y = 0; y < cod.size(); ++y) {
      if (cod.dist(f(static_cast<PointId>(x)), static_cast<PointId>(y)) <= s) {
        preimages[y].push_back(static_cast<PointId>(x));
      }
    }
  }

  const Dist r_cap = dom.diameter() / 2;
  int best_n = -1;
  Dist best_r = 0;
  for (const Dist r : dom.realized_distances()) {
    if (r > r_cap) break;
    int worst = 0;
    for (std::size_t y = 0; y < cod.size() && (best_n < 0 || worst < best_n); ++y) {
      worst = std::max(worst,
                       static_cast<int>(chunk_preimage(dom, preimages[y], r).size()));
    }
    if (best_n < 0 || worst < best_n) {
      best_n = worst;
      best_r = r;
    }
  }
  if (best_n < 0 || best_n > n_max) return std::nullopt;

  NTo1Witness w;
  w.s = s;
  w.r = best_r;
  w.n = best_n;
  w.pieces.resize(cod.size());
  for (std::size_t y = 0; y < cod.size(); ++y) {
    w.pieces[y] = chunk_preimage(dom, preimages[y], best_r);
  }
  return w;
}

void validate_n_to_1_witness(const PointMap& f, const NTo1Witness& w) {
  const FiniteSpace& dom = f.domain();
  const FiniteSpace& cod = f.codomain();
  if (w.pieces.size() != cod.size()) {
    fail(errc::invariant_violation, "witness has wrong number of ball assignments");
  }
  for (std::size_t y = 0; y < cod.size(); ++y) {
    if (static_cast<int>(w.pieces[y].size()) > w.n) {
      fail(errc::invariant_violation,
           "witness exceeds n at codomain point " + std::to_string(y));
    }
    std::vector<char> covered(dom.size(), 0);
    for (const auto& piece : w.pieces[y]) {
      for (std::size_t i = 0; i < piece.size(); ++i) {
        covered[piece[i]] = 1;
        for (std::size_t j = i + 1; j < piece.size(); ++j) {
          if (dom.dist(piece[i], piece[j]) > w.r) {
            fail(errc::invariant_violation,
                 "witness piece exceeds diameter r at codomain point " + std::to_string(y));
          }
        }
      }
    }
    for (std::size_t x = 0; x < dom.size(); ++x) {
      if (cod.dist(f(static_cast<PointId>(x)), static_cast<PointId>(y)) <= w.s &&
          !covered[x]) {
        fail(errc::invariant_violation, "witness does not cover preimage point " +
                                            std::to_string(x) + " of ball around " +
                                            std::to_string(y));
      }
    }
  }
}

NTo1Witness transfer_n_to_1_witness(const NTo1Witness& wf, const PointMap& g, Dist s) {
  if (s > wf.s) {
    fail(errc::domain, "transfer target scale exceeds the witness scale");
  }
  NTo1Witness wg = wf;
  wg.s = s;
  validate_n_to_1_witness(g, wg);
  return wg;
}

CompositionResult composition_constant(Dist k_f, Dist k_g, const PointMap& f,
                                       const PointMap& g,
                                       const std::vector<Dist>& scales) {
  CompositionResult out;
  out.l = k_g + modulus(g, k_f);
  out.certificate = quotient_certificate(compose(g, f), out.l, scales);
  return out;
}

Injectivization injectivize(const PointMap& f) {
  const FiniteSpace& x = f.domain();
  const FiniteSpace& y = f.codomain();
  if (x.empty()) fail(errc::domain, "cannot injectivize a map on an empty space");

  const auto fibers = f.fibers();
  std::size_t n = 1;
  for (const auto& fiber : fibers) n = std::max(n, fiber.size());

  const std::size_t zn = y.size() * n;
  std::vector<std::vector<Dist>> dist(zn, std::vector<Dist>(zn, 0));
  for (std::size_t p = 0; p < zn; ++p) {
    const PointId yp = static_cast<PointId>(p / n);
    for (std::size_t q = 0; q < zn; ++q) {
      if (p == q) continue;
      const PointId yq = static_cast<PointId>(q / n);
      dist[p][q] = y.dist(yp, yq) + 1;
    }
  }
  FiniteSpace z = FiniteSpace::from_distance_matrix(
      y.label() + "x{1.." + std::to_string(n) + "}", dist, /*allow_nonmetric=*/false,
      std::max(kDefaultPointCap, zn));
  std::vector<PointId> zboundary;
  for (const PointId b : y.truncation_boundary()) {
    for (std::size_t j = 0; j < n; ++j) {
      zboundary.push_back(static_cast<PointId>(b * n + j));
    }
  }
  z = z.with_truncation_boundary(std::move(zboundary)).with_interior_margin(y.interior_margin());

  SpacePtr zp = share(std::move(z));

  std::vector<PointId> gvals(x.size());
  for (std::size_t yi = 0; yi < fibers.size(); ++yi) {
    for (std::size_t j = 0; j < fibers[yi].size(); ++j) {
      gvals[fibers[yi][j]] = static_cast<PointId>(yi * n + j);
    }
  }
  PointMap g(f.domain_ptr(), zp, std::move(gvals));

  std::vector<PointId> ivals(y.size());
  for (std::size_t yi = 0; yi < y.size(); ++yi) ivals[yi] = static_cast<PointId>(yi * n);
  PointMap inclusion(f.codomain_ptr(), zp, std::move(ivals));

  Injectivization out{zp, g, inclusion, static_cast<int>(n), 0};
  out.closeness_to_f = closeness(compose(inclusion, f), g);
  return out;
}

MBoundReport injective_quotient_m_bound(const PointMap& f, Dist k,
                                        const std::vector<Dist>& scales) {
  if (!f.injective()) fail(errc::injectivity, "m-bound needs an injective map");
  const FiniteSpace& dom = f.domain();
  const FiniteSpace& cod = f.codomain();

  MBoundReport report;
  report.m = growth_function(cod, k);

  const auto image_mask = mask_of(f.image(), cod.size());
  std::vector<PointId> preimage_of(cod.size(), 0);
  for (std::size_t x = 0; x < dom.size(); ++x) preimage_of[f(static_cast<PointId>(x))] =
      static_cast<PointId>(x);

  for (const Dist eps : scales) {
    const auto delta = cococoarse_witness(f, k, 2 * eps);
    if (!delta) {
      fail(errc::domain, "map is not certified " + std::to_string(k) +
                             "-co-coarse at scale " + std::to_string(2 * eps));
    }
    MBoundScale scale;
    scale.eps = eps;
    scale.delta = *delta;

    for (std::size_t yi = 0; yi < cod.size(); ++yi) {
      const PointId y = static_cast<PointId>(yi);
      if (!cod.is_interior(y, 2 * eps + k)) {
        scale.skipped.push_back(y);
        continue;
      }
      std::vector<PointId> targets;  // B(y, eps) ∩ f[X]
      bool domain_clear = true;
      for (const PointId t : cod.ball(y, eps)) {
        if (!image_mask[t]) continue;
        targets.push_back(t);
        if (!dom.is_interior(preimage_of[t], 3 * scale.delta)) domain_clear = false;
      }
      if (!domain_clear) {
        scale.skipped.push_back(y);
        continue;
      }

      MBoundBall ball;
      ball.y = y;
      std::vector<char> covered(cod.size(), 0);
      for (;;) {
        PointId next_center = 0;
        bool found = false;
        // first domain point (index order) whose image is still uncovered
        for (std::size_t x = 0; x < dom.size() && !found; ++x) {
          const PointId fx = f(static_cast<PointId>(x));
          if (cod.dist(fx, y) <= eps && !covered[fx]) {
            next_center = static_cast<PointId>(x);
            found = true;
          }
        }
        if (!found) break;
        ball.centers.push_back(next_center);
        if (static_cast<std::int64_t>(ball.centers.size()) > report.m) {
          fail(errc::invariant_violation,
               "greedy net exceeded m=" + std::to_string(report.m) +
                   " at interior ball around " + std::to_string(y) + " (eps=" +
                   std::to_string(eps) + ")");
        }
        const auto reach = dom.ball(next_center, 3 * scale.delta);
        ball.cover.push_back(reach);
        for (const PointId z : reach) covered[f(z)] = 1;
      }

      // the resulting cover: f^{-1}(B(y, eps)) ⊆ ∪ B(x_i, 3 delta)
      for (const PointId t : targets) {
        const PointId z = preimage_of[t];
        bool in_cover = false;
        for (const auto& piece : ball.cover) {
          if (std::binary_search(piece.begin(), piece.end(), z)) {
            in_cover = true;
            break;
          }
        }
        if (!in_cover) {
          fail(errc::invariant_violation,
               "greedy net cover misses preimage point " + std::to_string(z));
        }
      }

      scale.max_steps = std::max(scale.max_steps, static_cast<int>(ball.centers.size()));
      scale.balls.push_back(std::move(ball));
    }
    report.scales.push_back(std::move(scale));
  }
  return report;
}

}  // namespace coarselab
