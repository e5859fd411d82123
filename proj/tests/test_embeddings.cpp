#include <doctest.h>

#include <cmath>

#include "coarselab/embedding.hpp"
#include "coarselab/gallery.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace coarselab;
namespace gal = coarselab::gallery;

namespace {

/// Amplified 0/1 isometry from an injection of X x {1..n} into Y.
IsometryMap injection_isometry(const SpacePtr& x, const SpacePtr& y, int n,
                               const std::vector<PointId>& targets) {
  std::vector<IsometryMap::Column> columns(x->size() * static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < columns.size(); ++i) {
    columns[i] = {{targets[i], Scalar{1.0, 0.0}}};
  }
  return IsometryMap(IsometryMap::Kind::amplified, x, y, n, std::move(columns));
}

}  // namespace

TEST_CASE("u_f from injective point maps") {
  const SpacePtr s = share(build_grid_window(1, 5));
  const IsometryMap uid = isometry_from_map(identity_map(s));
  for (std::size_t x = 0; x < 5; ++x) {
    REQUIRE(uid.columns()[x].size() == 1);
    CHECK(uid.columns()[x][0].first == static_cast<PointId>(x));
  }

  const auto folding = gal::folding_map(12);
  const IsometryMap uf = isometry_from_map(folding.map);
  CHECK(uf.kind() == IsometryMap::Kind::plain);
  for (std::size_t x = 0; x < uf.columns().size(); ++x) {
    REQUIRE(uf.columns()[x].size() == 1);
    CHECK(uf.columns()[x][0].first == folding.map(static_cast<PointId>(x)));
    CHECK(uf.columns()[x][0].second == Scalar{1.0, 0.0});
  }

  const PointMap collision(s, s, {0, 0, 1, 2, 3});
  CHECK_THROWS_AS(isometry_from_map(collision), error);
}

TEST_CASE("conjugation by u_f") {
  const auto folding = gal::folding_map(10);
  const IsometryMap u = isometry_from_map(folding.map);
  const SpacePtr x = folding.domain.space;
  const SpacePtr y = folding.codomain.space;

  // e_{xy} -> e_{f(x)f(y)}
  const BandOperator exy = BandOperator::matrix_unit(x, 1, 4);
  CHECK(conjugate(u, exy) ==
        BandOperator::matrix_unit(y, folding.map(1), folding.map(4)));

  // identity -> projection onto the image coordinates
  CHECK(conjugate(u, BandOperator::identity(x)) ==
        BandOperator::indicator(y, folding.map.image()));

  // random band: propagation bound and the dense product oracle
  testutil::Rng rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const BandOperator a = testutil::random_int_band(rng, x, 3, 0.4);
    const BandOperator image = conjugate(u, a);
    CHECK(image.propagation() <= modulus(folding.map, a.propagation()));

    Eigen::MatrixXcd udense = Eigen::MatrixXcd::Zero(y->size(), x->size());
    for (std::size_t col = 0; col < x->size(); ++col) {
      for (const auto& [row, v] : u.columns()[col]) udense(row, col) = v;
    }
    const Eigen::MatrixXcd expected = udense * oracle::dense_of(a) * udense.adjoint();
    CHECK((expected - oracle::dense_of(image)).cwiseAbs().maxCoeff() == 0.0);
  }

  CHECK_THROWS_AS(conjugate(u, BandOperator::identity(y)), error);
}

TEST_CASE("amplification") {
  const SpacePtr s = share(build_grid_window(1, 6));
  const BandOperator e14 = BandOperator::matrix_unit(s, 1, 4);
  const BandOperator amp = amplify(e14, 2);
  CHECK(oracle::dense_rank(amp) == 2);
  CHECK(amp.propagation() == e14.propagation());

  CHECK(amplify(BandOperator::identity(s), 3) ==
        BandOperator::identity(amplify(BandOperator::identity(s), 3).space_ptr()));

  // the product metric: same point, distinct fibers sit at distance 1
  const FiniteSpace prod = product_space(*s, 3);
  CHECK(prod.dist(product_point(2, 0, 3), product_point(2, 2, 3)) == 1);
  CHECK(prod.dist(product_point(2, 1, 3), product_point(4, 0, 3)) == s->dist(2, 4));

  testutil::Rng rng(9);
  const BandOperator a = testutil::random_int_band(rng, s, 2, 0.5);
  const BandOperator b = testutil::random_int_band(rng, s, 2, 0.5);
  CHECK(amplify(add(a, b), 2) == add(amplify(a, 2), amplify(b, 2)));
  CHECK(amplify(multiply(a, b), 2) == multiply(amplify(a, 2), amplify(b, 2)));
  CHECK(amplify(a, 2).propagation() == a.propagation());
  CHECK(oracle::dense_rank(amplify(a, 2)) == 2 * oracle::dense_rank(a));
}

TEST_CASE("Ad(u_f) is an exact *-homomorphism and preserves rank") {
  const auto folding = gal::folding_map(14);
  const IsometryMap u = isometry_from_map(folding.map);
  const SpacePtr x = folding.domain.space;
  testutil::Rng rng(1234);
  for (int trial = 0; trial < 25; ++trial) {
    const BandOperator a = testutil::random_int_band(rng, x, 3, 0.4);
    const BandOperator b = testutil::random_int_band(rng, x, 3, 0.4);
    CHECK(conjugate(u, add(a, b)) == add(conjugate(u, a), conjugate(u, b)));
    CHECK(conjugate(u, multiply(a, b)) == multiply(conjugate(u, a), conjugate(u, b)));
    CHECK(conjugate(u, a.adjoint()) == conjugate(u, a).adjoint());
    CHECK(oracle::dense_rank(conjugate(u, a)) == oracle::dense_rank(a));
  }
}

TEST_CASE("rank profiles") {
  const SpacePtr x = share(build_grid_window(1, 6));
  const SpacePtr y = share(build_grid_window(1, 30));

  // plain Ad(u_f): rank-one-preserving
  testutil::Rng rng(55);
  const PointMap f(x, y, testutil::random_injection(rng, x->size(), y->size()));
  const EmbeddingTable plain = EmbeddingTable::tabulate_spatial(isometry_from_map(f));
  const RankProfile p1 = rank_profile(plain);
  CHECK(p1.kind == RankProfile::Kind::rank_one_preserving);
  CHECK(p1.n == 1);

  // Ad(w) ∘ I_3: 1-to-3
  const auto targets = testutil::random_injection(rng, x->size() * 3, y->size());
  const IsometryMap w = injection_isometry(x, y, 3, targets);
  const EmbeddingTable amp = EmbeddingTable::tabulate_spatial(w);
  const RankProfile p3 = rank_profile(amp);
  CHECK(p3.kind == RankProfile::Kind::one_to_n);
  CHECK(p3.n == 3);

  // direct sum mixing ranks 1 and 2 across points: irregular
  const SpacePtr two = share(build_graph_space(2, {{0, 1}}));
  std::vector<BandOperator> values;
  const auto unit = [&](PointId a, PointId b) {
    return BandOperator::matrix_unit(y, a, b);
  };
  // point 0 carried by coordinate 0 (rank 1), point 1 by coordinates {5,6} (rank 2)
  const BandOperator p00 = unit(0, 0);
  const BandOperator p11 = add(unit(5, 5), unit(6, 6));
  values.push_back(p00);                       // (0,0)
  values.push_back(BandOperator::zero(y));     // (0,1): cross pair dropped
  values.push_back(BandOperator::zero(y));     // (1,0)
  values.push_back(p11);                       // (1,1)
  const EmbeddingTable mixed(two, y, values);
  const RankProfile pm = rank_profile(mixed);
  CHECK(pm.kind == RankProfile::Kind::irregular);
  CHECK(pm.offenders == std::vector<PointId>{1});
  CHECK_THROWS_AS(reconstruct_isometry(mixed, 0), error);
}

TEST_CASE("embedding table validation catches broken tables") {
  const SpacePtr x = share(build_graph_space(2, {{0, 1}}));
  const SpacePtr y = share(build_grid_window(1, 8));
  // Phi(e_xx) not idempotent
  std::vector<BandOperator> values(4, BandOperator::zero(y));
  values[0] = BandOperator::matrix_unit(y, 0, 0).scaled(Scalar{0.5, 0.0});
  values[3] = BandOperator::matrix_unit(y, 1, 1);
  CHECK_THROWS_AS(rank_profile(EmbeddingTable(x, y, values)), error);
  try {
    rank_profile(EmbeddingTable(x, y, values));
  } catch (const error& e) {
    CHECK(e.code() == errc::malformed_embedding);
  }
}

TEST_CASE("reconstruction round trip, n in {1,2,3}") {
  testutil::Rng rng(31415);
  for (const int n : {1, 2, 3}) {
    const SpacePtr x = share(build_grid_window(1, 7));
    const SpacePtr y = share(build_grid_window(1, static_cast<Dist>(7 * n + 11)));
    const auto targets = testutil::random_injection(rng, x->size() * n, y->size());
    const IsometryMap w = injection_isometry(x, y, n, targets);
    const EmbeddingTable phi = EmbeddingTable::tabulate_spatial(w);

    const RankProfile profile = rank_profile(phi);
    CHECK(profile.n == n);

    const IsometryMap u = reconstruct_isometry(phi, 0);
    const SpatialCheck check = verify_spatial(phi, u);
    CHECK(check.pass);
    CHECK(check.max_deviation <= 1e-12);

    if (n == 1) {
      // the default frame pins the phase, so u_f is recovered exactly
      CHECK(u.kind() == IsometryMap::Kind::plain);
      for (std::size_t col = 0; col < u.columns().size(); ++col) {
        REQUIRE(u.columns()[col].size() == 1);
        CHECK(u.columns()[col][0] == w.columns()[col][0]);
      }
    }
  }
}

TEST_CASE("reconstruction with a complex caller-supplied frame") {
  testutil::Rng rng(2718);
  const SpacePtr x = share(build_grid_window(1, 5));
  const SpacePtr y = share(build_grid_window(1, 23));
  const auto targets = testutil::random_injection(rng, x->size() * 2, y->size());
  const IsometryMap w = injection_isometry(x, y, 2, targets);
  const EmbeddingTable phi = EmbeddingTable::tabulate_spatial(w);

  // rotate the default frame by a fixed unitary with complex phases
  const Frame base = default_frame(phi, 0);
  const double c = std::cos(0.7), s = std::sin(0.7);
  Frame rotated;
  rotated.vectors.resize(2, std::vector<Scalar>(y->size(), Scalar{0.0, 0.0}));
  for (std::size_t i = 0; i < y->size(); ++i) {
    rotated.vectors[0][i] = c * base.vectors[0][i] + Scalar{0.0, s} * base.vectors[1][i];
    rotated.vectors[1][i] = Scalar{0.0, s} * base.vectors[0][i] + c * base.vectors[1][i];
  }
  const IsometryMap u = reconstruct_isometry(phi, 0, rotated);
  const SpatialCheck check = verify_spatial(phi, u);
  CHECK(check.pass);
  CHECK(check.max_deviation <= 1e-12);

  // the partial isometry fact: each Phi(e_{x0 x}) carries the frame to an
  // orthonormal family (all restricted singular values are 1)
  for (std::size_t col = 0; col < u.columns().size(); ++col) {
    double norm = 0.0;
    for (const auto& [p, v] : u.columns()[col]) norm += std::norm(v);
    CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("frame validation") {
  testutil::Rng rng(99);
  const SpacePtr x = share(build_grid_window(1, 4));
  const SpacePtr y = share(build_grid_window(1, 15));
  const auto targets = testutil::random_injection(rng, x->size() * 2, y->size());
  const EmbeddingTable phi =
      EmbeddingTable::tabulate_spatial(injection_isometry(x, y, 2, targets));

  Frame bad = default_frame(phi, 0);
  for (auto& v : bad.vectors[0]) v *= 2.0;  // not normalized
  CHECK_THROWS_AS(reconstruct_isometry(phi, 0, bad), error);

  Frame wrong_span = default_frame(phi, 0);
  wrong_span.vectors[0].assign(y->size(), Scalar{0.0, 0.0});
  // unit vector outside Im(Phi(e_00)): pick a coordinate not in the image
  std::vector<char> used(y->size(), 0);
  for (const PointId t : targets) used[t] = 1;
  for (std::size_t i = 0; i < y->size(); ++i) {
    if (!used[i]) {
      wrong_span.vectors[0][i] = Scalar{1.0, 0.0};
      break;
    }
  }
  CHECK_THROWS_AS(reconstruct_isometry(phi, 0, wrong_span), error);
  try {
    reconstruct_isometry(phi, 0, wrong_span);
  } catch (const error& e) {
    CHECK(e.code() == errc::frame);
  }
}

TEST_CASE("verify_spatial rejects the wrong isometry") {
  testutil::Rng rng(404);
  const SpacePtr x = share(build_grid_window(1, 5));
  const SpacePtr y = share(build_grid_window(1, 20));
  const PointMap f(x, y, testutil::random_injection(rng, x->size(), y->size()));
  const EmbeddingTable phi = EmbeddingTable::tabulate_spatial(isometry_from_map(f));

  // a different injection implements a different embedding
  PointMap g = f;
  for (;;) {
    g = PointMap(x, y, testutil::random_injection(rng, x->size(), y->size()));
    if (g.values() != f.values()) break;
  }
  const SpatialCheck bad = verify_spatial(phi, isometry_from_map(g));
  CHECK_FALSE(bad.pass);
  CHECK(bad.counterexample.has_value());

  const SpatialCheck good = verify_spatial(phi, isometry_from_map(f));
  CHECK(good.pass);
  CHECK(good.max_deviation == 0.0);
}
