#include <benchmark/benchmark.h>

#include <random>

#include "coarselab/certify.hpp"
#include "coarselab/cobounded.hpp"
#include "coarselab/gallery.hpp"

using namespace coarselab;
namespace gal = coarselab::gallery;

namespace {

FiniteSpace bench_graph(std::size_t n) {
  std::mt19937_64 rng(17);
  std::vector<std::pair<PointId, PointId>> edges;
  for (std::size_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::size_t> pick(0, v - 1);
    edges.emplace_back(static_cast<PointId>(pick(rng)), static_cast<PointId>(v));
  }
  for (std::size_t i = 0; i < n / 2; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    const auto a = pick(rng), b = pick(rng);
    if (a != b) edges.emplace_back(static_cast<PointId>(a), static_cast<PointId>(b));
  }
  return build_graph_space(n, edges);
}

BandOperator bench_band(const SpacePtr& space, Dist prop) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<OperatorEntry> entries;
  for (std::size_t x = 0; x < space->size(); ++x) {
    for (std::size_t y = 0; y < space->size(); ++y) {
      if (space->dist(static_cast<PointId>(x), static_cast<PointId>(y)) > prop) continue;
      if (coin(rng) > 0.6) continue;
      entries.push_back(OperatorEntry{static_cast<PointId>(x), static_cast<PointId>(y),
                                      Scalar{coin(rng) - 0.5, coin(rng) - 0.5}});
    }
  }
  return BandOperator(space, std::move(entries));
}

void BM_SeparatedPartition(benchmark::State& state) {
  const FiniteSpace g = bench_graph(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(separated_partition(g, 3));
  }
}
BENCHMARK(BM_SeparatedPartition)->Arg(100)->Arg(250)->Arg(500);

void BM_QuotientCertificate(benchmark::State& state) {
  const auto folding = gal::folding_map(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(quotient_certificate(folding.map, 1, {1, 2, 4}));
  }
}
BENCHMARK(BM_QuotientCertificate)->Arg(40)->Arg(80)->Arg(160);

void BM_OperatorNorm(benchmark::State& state) {
  const SpacePtr line = share(build_grid_window(1, state.range(0)));
  const BandOperator a = bench_band(line, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(operator_norm(a, 1e-9));
  }
}
BENCHMARK(BM_OperatorNorm)->Arg(24)->Arg(64)->Arg(160);

void BM_Multiply(benchmark::State& state) {
  const SpacePtr line = share(build_grid_window(1, state.range(0)));
  const BandOperator a = bench_band(line, 4);
  const BandOperator b = bench_band(line, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(multiply(a, b));
  }
}
BENCHMARK(BM_Multiply)->Arg(64)->Arg(256);

void BM_QuotientDecomposition(benchmark::State& state) {
  const auto folding = gal::folding_map(state.range(0));
  const BandOperator a = bench_band(folding.codomain.space, 3);
  const Dist delta = *cococoarse_witness(folding.map, 1, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(quotient_decomposition(folding.map, 1, delta, a, 3));
  }
}
BENCHMARK(BM_QuotientDecomposition)->Arg(40)->Arg(60);

void BM_ParityDecomposition(benchmark::State& state) {
  const auto nat = gal::nat_window(state.range(0));
  const BandOperator a = bench_band(nat.space, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(parity_decomposition(a));
  }
}
BENCHMARK(BM_ParityDecomposition)->Arg(40)->Arg(80);

}  // namespace

BENCHMARK_MAIN();
