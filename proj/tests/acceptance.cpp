// Acceptance suite: one check per shipped criterion, each printed as a
// pass/fail line with its pinned tolerance. Exit code 0 iff every criterion
// passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "coarselab/certify.hpp"
#include "coarselab/cobounded.hpp"
#include "coarselab/gallery.hpp"
#include "coarselab/orbit.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace coarselab;
namespace gal = coarselab::gallery;

namespace {

struct Harness {
  int failures = 0;

  void run(int index, const std::string& name, const std::function<void()>& body) {
    try {
      body();
      std::printf("criterion %d: PASS  %s\n", index, name.c_str());
    } catch (const std::exception& e) {
      ++failures;
      std::printf("criterion %d: FAIL  %s\n    %s\n", index, name.c_str(), e.what());
    }
  }
};

void require(bool condition, const std::string& message) {
  if (!condition) throw std::runtime_error(message);
}

// rebinds a point map onto new space handles with identical index semantics
PointMap rebind(const PointMap& f, SpacePtr domain, SpacePtr codomain) {
  return PointMap(std::move(domain), std::move(codomain), f.values());
}

PointMap jitter(const PointMap& f, Dist amount, std::uint64_t seed) {
  testutil::Rng rng(seed);
  std::uniform_int_distribution<Dist> shift(-amount, amount);
  std::vector<PointId> values(f.domain().size());
  const auto n = static_cast<Dist>(f.codomain().size());
  for (std::size_t x = 0; x < values.size(); ++x) {
    Dist v = static_cast<Dist>(f(static_cast<PointId>(x))) + shift(rng);
    values[x] = static_cast<PointId>(std::clamp<Dist>(v, 0, n - 1));
  }
  return PointMap(f.domain_ptr(), f.codomain_ptr(), values);
}

// v -> ceil(v/2) between nat windows; a 0-co-coarse halving quotient
PointMap half_map(const gal::IntervalWindow& from, const gal::IntervalWindow& to) {
  std::vector<PointId> values(from.space->size());
  for (std::size_t x = 0; x < values.size(); ++x) {
    const Dist v = from.value_of(static_cast<PointId>(x));
    values[x] = to.id_of((v + 1) / 2);
  }
  return PointMap(from.space, to.space, values);
}

void criterion_1_partitions() {
  const auto started = std::chrono::steady_clock::now();
  testutil::Rng rng(0xACCE97);
  std::uniform_int_distribution<std::size_t> size_dist(50, 500);
  for (int trial = 0; trial < 50; ++trial) {
    const FiniteSpace g = testutil::random_graph_space(rng, size_dist(rng));
    for (const Dist k : {2, 3, 5}) {
      const Partition p = separated_partition(g, k);
      validate_partition(g, p);  // throws on any invariant violation
      const Dist inner = std::max<Dist>(k - g.min_positive_distance(), 0);
      require(static_cast<std::int64_t>(p.classes.size()) <= growth_function(g, inner),
              "class count exceeds the greedy ball-size bound");
    }
  }
  // brute-force chromatic oracle on small instances
  std::uniform_int_distribution<std::size_t> small_dist(4, 12);
  for (int trial = 0; trial < 10; ++trial) {
    const FiniteSpace g = testutil::random_graph_space(rng, small_dist(rng));
    for (const Dist k : {2, 3, 5}) {
      const Partition p = separated_partition(g, k);
      validate_partition(g, p);
      require(static_cast<int>(p.classes.size()) >= oracle::min_separated_classes(g, k),
              "greedy beat the chromatic optimum (oracle bug)");
    }
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  require(elapsed < 10.0, "partition criterion exceeded the 10 s budget");
}

void criterion_2_composition() {
  int pairs = 0;
  auto check_pair = [&](const PointMap& f, Dist k_f, const PointMap& g, Dist k_g,
                        const std::vector<Dist>& scales) {
    require(quotient_certificate(f, k_f, scales).pass(), "setup: f not certified");
    require(quotient_certificate(g, k_g, scales).pass(), "setup: g not certified");
    const CompositionResult comp = composition_constant(k_f, k_g, f, g, scales);
    require(comp.l == k_g + modulus(g, k_f), "L formula mismatch");
    require(comp.certificate.pass(),
            "composite fails at L = " + std::to_string(comp.l));
    ++pairs;
  };

  // grid projections Z^3 -> Z^2 -> Z (the codomain window limits the scale)
  {
    const SpacePtr g3 = share(build_grid_window(3, 5));
    const SpacePtr g2 = share(build_grid_window(2, 5));
    const SpacePtr g1 = share(build_grid_window(1, 5));
    check_pair(gal::grid_projection(g3, g2), 0, gal::grid_projection(g2, g1), 0, {1});
  }
  // projection then folding (windows <= 196 points)
  for (const Dist side : {9, 10, 11, 12, 13, 14, 8}) {
    const auto proj = gal::projection_2d_to_1d(side);
    const auto folding = gal::folding_map(side);
    check_pair(proj.map, 0, rebind(folding.map, proj.codomain, folding.codomain.space), 1,
               {1, 2});
  }
  // shift then folding
  for (const Dist n : {12, 16, 20, 24, 28, 36, 40}) {
    const auto folding = gal::folding_map(n);
    const auto shift_dom = gal::int_window(folding.domain.lo - 1, folding.domain.hi - 1);
    std::vector<PointId> values(shift_dom.space->size());
    for (std::size_t x = 0; x < values.size(); ++x) {
      values[x] = folding.domain.id_of(shift_dom.value_of(static_cast<PointId>(x)) + 1);
    }
    check_pair(PointMap(shift_dom.space, folding.domain.space, values), 0, folding.map, 1,
               {1, 2, 3});
  }
  // folding then halving
  for (const Dist n : {12, 16, 20, 24, 32}) {
    const auto folding = gal::folding_map(n);
    const auto small = gal::nat_window((n + 1) / 2);
    check_pair(folding.map, 1, half_map(folding.codomain, small), 0, {1, 2, 3});
  }
  // halving chains
  for (const Dist n : {24, 40}) {
    const auto a = gal::nat_window(n);
    const auto b = gal::nat_window((n + 1) / 2);
    const auto c = gal::nat_window(((n + 1) / 2 + 1) / 2);
    check_pair(half_map(a, b), 0, half_map(b, c), 0, {1, 2});
  }
  require(pairs >= 20, "fewer than 20 composable pairs exercised");
}

void criterion_3_closeness_stability() {
  int pairs = 0;
  const std::vector<Dist> scales{2, 3};
  auto check_pair = [&](const PointMap& f, Dist k, Dist s, std::uint64_t seed) {
    const PointMap g = jitter(f, 1, seed);
    const Dist m = closeness(f, g);
    require(quotient_certificate(f, k, scales).pass(), "setup: f not certified");
    require(quotient_certificate(g, k + m, scales).pass(),
            "certificate did not transfer to K+m");
    const auto wf = n_to_1_witness(f, s + 2 * m, 8);
    require(wf.has_value(), "setup: no witness for f");
    const NTo1Witness wg = transfer_n_to_1_witness(*wf, g, s);
    require(wg.n == wf->n, "transfer changed n");
    validate_n_to_1_witness(g, wg);
    ++pairs;
  };
  std::uint64_t seed = 1000;
  for (const Dist n : {24, 28, 32, 36, 40, 44, 48, 52, 56, 60}) {
    check_pair(gal::folding_map(n).map, 1, 3, seed++);
  }
  for (const Dist n : {30, 36, 42, 48, 50}) {
    check_pair(half_map(gal::nat_window(n), gal::nat_window((n + 1) / 2)), 0, 3, seed++);
  }
  for (const int k : {8, 9, 10, 11, 12}) {
    check_pair(gal::cycle_double_cover(k).map, 0, 2, seed++);
  }
  require(pairs == 20, "expected exactly 20 pairs");
}

void criterion_4_folding_end_to_end() {
  const auto folding = gal::folding_map(40);
  const QuotientCertificate cert = quotient_certificate(folding.map, 1, {1, 2, 4});
  require(cert.pass(), "folding certificate failed");
  // regression fixtures frozen from the brute-force oracle
  const Dist expected_delta[3] = {0, 1, 2};
  for (std::size_t i = 0; i < 3; ++i) {
    require(cert.scales[i].delta == expected_delta[i], "delta drifted from fixture");
    require(oracle::cococoarse_holds(folding.map, 1, cert.scales[i].eps,
                                     *cert.scales[i].delta, cert.scales[i].interior),
            "oracle disagrees with the certificate");
  }
  const auto witness = n_to_1_witness(folding.map, 4, 8);
  require(witness.has_value() && witness->n == 2, "folding n-to-1 witness is not 2");
  require(witness->r == 4, "witness r drifted from the frozen oracle value");
  validate_n_to_1_witness(folding.map, *witness);

  const MBoundReport report = injective_quotient_m_bound(folding.map, 1, {1, 2, 4});
  require(report.m == 3, "m bound is not growth(N-window, 1) = 3");
  for (const auto& scale : report.scales) {
    require(scale.max_steps <= report.m, "greedy net exceeded m");
    require(!scale.balls.empty(), "no interior balls exercised");
  }
}

void criterion_5_decomposition_exactness() {
  testutil::Rng rng(0xDEC);
  const Dist sizes[] = {20, 24, 28, 32, 36, 40, 44, 48, 52, 56, 60, 21, 27, 33, 39, 45,
                        51, 57, 22, 26, 30, 34, 38, 42, 46, 50, 54, 58, 60, 59};
  int instance = 0;
  for (const Dist n : sizes) {
    const auto folding = gal::folding_map(n);
    const BandOperator a = testutil::random_dyadic_band(rng, folding.codomain.space, 3, 0.7);
    const Dist eps = 3;
    const auto delta = cococoarse_witness(folding.map, 1, eps);
    require(delta.has_value(), "no co-coarse witness at eps = 3");
    const QuotientDecomposition qd =
        quotient_decomposition(folding.map, 1, *delta, a, eps);
    require(qd.exact && qd.reassembled == a, "reassembly is not exact");
    const std::size_t classes = qd.partition.classes.size();
    require(qd.blocks.size() <= classes * classes, "block count exceeds n^2");
    for (const auto& block : qd.blocks) {
      require(block.c.propagation() <= *delta, "c factor exceeds delta");
      require(block.d.propagation() <= 1, "d factor exceeds K");
    }
    ++instance;
  }
  require(instance == 30, "expected 30 instances");
}

void criterion_6_parity_witness() {
  testutil::Rng rng(0x9A);
  const auto nat = gal::nat_window(40);
  for (int trial = 0; trial < 30; ++trial) {
    const BandOperator a = testutil::random_dyadic_band(rng, nat.space, 3, 0.6);
    const CoboundedWitness w = parity_decomposition(a);
    require(w.k == 1, "parity witness k is not 1");
    const WitnessCheck check = check_witness(w, 1e-9);
    require(check.pass, "parity witness failed: " + check.failure);
    require(check.residual <= 1e-12, "parity residual above 1e-12");
  }
}

void criterion_7_reconstruction_round_trip() {
  testutil::Rng rng(0x57);
  for (const int n : {1, 2, 3}) {
    for (int trial = 0; trial < 10; ++trial) {
      const Dist m = 6 + static_cast<Dist>(trial % 5);  // domain size
      const SpacePtr x = share(build_grid_window(1, m));
      const SpacePtr y = share(build_grid_window(1, std::min<Dist>(50, m * n + 9)));
      const auto targets = testutil::random_injection(rng, x->size() * n, y->size());
      std::vector<IsometryMap::Column> columns(x->size() * static_cast<std::size_t>(n));
      for (std::size_t i = 0; i < columns.size(); ++i) {
        columns[i] = {{targets[i], Scalar{1.0, 0.0}}};
      }
      const IsometryMap w(IsometryMap::Kind::amplified, x, y, n, std::move(columns));
      const EmbeddingTable phi = EmbeddingTable::tabulate_spatial(w);

      const RankProfile profile = rank_profile(phi);
      require(profile.n == n && profile.offenders.empty(), "rank profile is not 1-to-n");

      const IsometryMap u = reconstruct_isometry(phi, 0);
      const SpatialCheck check = verify_spatial(phi, u, 1e-12);
      require(check.pass, "verify_spatial failed after reconstruction");
      require(check.max_deviation <= 1e-12, "residual above 1e-12");
    }
  }
}

void criterion_8_homomorphism_and_norms() {
  testutil::Rng rng(0x8A);
  const auto folding = gal::folding_map(36);
  const IsometryMap u = isometry_from_map(folding.map);
  for (int trial = 0; trial < 100; ++trial) {
    const BandOperator a = testutil::random_int_band(rng, folding.domain.space, 3, 0.4);
    const BandOperator b = testutil::random_int_band(rng, folding.domain.space, 3, 0.4);
    require(conjugate(u, add(a, b)) == add(conjugate(u, a), conjugate(u, b)),
            "Ad(u_f) is not exactly additive");
    require(conjugate(u, multiply(a, b)) == multiply(conjugate(u, a), conjugate(u, b)),
            "Ad(u_f) is not exactly multiplicative");
    require(conjugate(u, a.adjoint()) == conjugate(u, a).adjoint(),
            "Ad(u_f) is not exactly adjoint-compatible");
    require(conjugate(u, a).propagation() <= modulus(folding.map, a.propagation()),
            "propagation exceeded the modulus bound");
  }
  // C*-identity against the dense oracle on spaces of at most 32 points
  const double tol = 1e-9;
  const SpacePtr small = share(build_grid_window(1, 28));
  for (int trial = 0; trial < 25; ++trial) {
    const BandOperator a = testutil::random_dyadic_band(rng, small, 4, 0.6);
    const double oracle_norm = oracle::svd_norm(a);
    const double cstar = operator_norm(multiply(a.adjoint(), a), tol);
    require(std::abs(cstar - oracle_norm * oracle_norm) <=
                2 * tol * std::max(1.0, oracle_norm * oracle_norm) + 1e-9,
            "C*-identity drifted beyond 2*tol of the dense oracle");
  }
}

void criterion_9_cli_determinism() {
  const std::string cli = COARSELAB_CLI_PATH;
  const std::string corpus = COARSELAB_CORPUS_DIR;
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "missing report file " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
  };
  const std::vector<std::string> commands = {
      "gen-space --kind grid --dim 2 --side 6",
      "gen-space --kind nat-window --n 17",
      "check-quotient --space " + corpus + "/zwin40.json --space " + corpus +
          "/nat40.json --map " + corpus + "/folding40.json --K 1 --scales 1,2,4",
      "check-quotient --map " + corpus + "/proj8.json --K 0 --scales 1,2",
      "n-to-1 --map " + corpus + "/folding40.json --s 4",
      "injectivize --map " + corpus + "/cover16.json",
      "orbit --space " + corpus + "/zwin11.json --action " + corpus + "/reflect11.json",
      "op-info --op " + corpus + "/band40.json",
      "truncate --op " + corpus + "/band40.json --r 2",
      "decompose --map " + corpus + "/folding40.json --K 1 --delta 2 --op " + corpus +
          "/op_e21.json --eps 1",
      "parity --op " + corpus + "/band40.json",
      "reconstruct --embedding " + corpus + "/phi2.json --x0 0",
      "verify-spatial --embedding " + corpus + "/phi2.json --isometry " + corpus +
          "/u_wrong.json",
  };
  for (const auto& cmd : commands) {
    for (const char* out : {"acc_run1.json", "acc_run2.json"}) {
      const std::string full = cli + " " + cmd + " --out " + out + " >/dev/null 2>&1";
      const int status = std::system(full.c_str());
      require(WEXITSTATUS(status) != 2, "CLI reported a usage/IO error: " + cmd);
    }
    require(slurp("acc_run1.json") == slurp("acc_run2.json"),
            "report bytes differ across runs: " + cmd);
  }
  std::remove("acc_run1.json");
  std::remove("acc_run2.json");
}

}  // namespace

int main() {
  Harness harness;
  harness.run(1, "K-separated partitions on 50 random graphs (validity, bound, oracle, <10s)",
              criterion_1_partitions);
  harness.run(2, "composition passes at L = K_g + modulus(g, K_f) on 20+ certified pairs",
              criterion_2_composition);
  harness.run(3, "closeness stability of certificates (K+m) and n-to-1 witnesses (s+2m)",
              criterion_3_closeness_stability);
  harness.run(4, "folding end-to-end on {1..40}: deltas {0,1,2}, n=2 at s=4, m=3",
              criterion_4_folding_end_to_end);
  harness.run(5, "block decomposition exactness on 30 random bands (prop<=3, N<=60)",
              criterion_5_decomposition_exactness);
  harness.run(6, "parity witness residual <= 1e-12 with k=1 on 30 random bands over {1..40}",
              criterion_6_parity_witness);
  harness.run(7, "reconstruction round trip for n in {1,2,3}, 10 injections each, <=1e-12",
              criterion_7_reconstruction_round_trip);
  harness.run(8, "Ad(u_f) exact *-homomorphism laws; norm C*-identity within 2*tol",
              criterion_8_homomorphism_and_norms);
  harness.run(9, "byte-identical CLI reports across two runs of the example corpus",
              criterion_9_cli_determinism);
  if (harness.failures > 0) {
    std::printf("%d criterion(s) failed\n", harness.failures);
    return 1;
  }
  std::printf("all 9 criteria passed\n");
  return 0;
}
