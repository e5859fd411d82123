#include <doctest.h>

#include <cmath>

#include "coarselab/band_operator.hpp"
#include "coarselab/gallery.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace coarselab;

namespace {

SpacePtr line(Dist side) { return share(build_grid_window(1, side)); }

}  // namespace

TEST_CASE("matrix units and the entry-orientation convention") {
  const SpacePtr s = line(5);
  const BandOperator exx = BandOperator::matrix_unit(s, 2, 2);
  CHECK(exx.propagation() == 0);
  CHECK(oracle::dense_rank(exx) == 1);

  const BandOperator e03 = BandOperator::matrix_unit(s, 0, 3);
  CHECK(e03.propagation() == 3);

  // e_{xy} delta_x = delta_y
  std::vector<Scalar> delta_x(5, Scalar{0.0, 0.0});
  delta_x[0] = Scalar{1.0, 0.0};
  const auto image = e03.apply(delta_x);
  CHECK(image[3] == Scalar{1.0, 0.0});

  // chain composition x -> y -> z: the right factor acts first, so
  // e_{yz} · e_{xy} = e_{xz}; cross-checked against the dense 3x3 oracle
  const SpacePtr t = share(build_graph_space(3, {{0, 1}, {1, 2}}));
  const BandOperator exy = BandOperator::matrix_unit(t, 0, 1);
  const BandOperator eyz = BandOperator::matrix_unit(t, 1, 2);
  const BandOperator exz = BandOperator::matrix_unit(t, 0, 2);
  CHECK(multiply(eyz, exy) == exz);
  CHECK((oracle::dense_of(eyz) * oracle::dense_of(exy) - oracle::dense_of(exz)).norm() ==
        0.0);
  // the transpose trap: the other order annihilates for distinct x,z
  CHECK(multiply(exy, eyz).is_zero());
}

TEST_CASE("indicators") {
  const SpacePtr s = line(6);
  std::vector<PointId> all(6);
  for (PointId i = 0; i < 6; ++i) all[i] = i;
  CHECK(BandOperator::indicator(s, all) == BandOperator::identity(s));
  CHECK(BandOperator::indicator(s, {}).is_zero());

  const BandOperator a = BandOperator::indicator(s, {0, 2, 4});
  const BandOperator b = BandOperator::indicator(s, {2, 3, 4});
  CHECK(multiply(a, b) == BandOperator::indicator(s, {2, 4}));
  CHECK(a == a.adjoint());
  CHECK(multiply(a, a) == a);
}

TEST_CASE("propagation and support") {
  const SpacePtr s = line(6);
  std::vector<OperatorEntry> tridiag;
  for (PointId x = 0; x < 6; ++x) {
    for (PointId y = x > 0 ? x - 1 : 0; y <= std::min<PointId>(x + 1, 5); ++y) {
      tridiag.push_back(OperatorEntry{x, y, Scalar{1.0, 0.0}});
    }
  }
  CHECK(BandOperator(s, tridiag).propagation() == 1);

  const BandOperator e03 = BandOperator::matrix_unit(s, 0, 3);
  const BandOperator e11 = BandOperator::matrix_unit(s, 1, 1);
  CHECK(add(e03, e11).propagation() == 3);
  CHECK(BandOperator::zero(s).propagation() == 0);

  CHECK(e03.support() == std::vector<std::pair<PointId, PointId>>{{0, 3}});
  CHECK(BandOperator::zero(s).support().empty());
  const auto diag = BandOperator::indicator(s, {1, 4}).support();
  CHECK(diag == std::vector<std::pair<PointId, PointId>>{{1, 1}, {4, 4}});
}

TEST_CASE("propagation laws") {
  testutil::Rng rng(321);
  const SpacePtr s = share(testutil::random_graph_space(rng, 20));
  for (int trial = 0; trial < 20; ++trial) {
    const BandOperator a = testutil::random_int_band(rng, s, 3, 0.3);
    const BandOperator b = testutil::random_int_band(rng, s, 2, 0.3);
    CHECK(multiply(a, b).propagation() <= a.propagation() + b.propagation());
    CHECK(add(a, b).propagation() <= std::max(a.propagation(), b.propagation()));
    CHECK(a.adjoint().propagation() == a.propagation());
  }
}

TEST_CASE("truncation") {
  const SpacePtr s = line(8);
  const BandOperator e01 = BandOperator::matrix_unit(s, 0, 1);
  const auto same = truncate(e01, 3);
  CHECK(same.band == e01);
  CHECK(same.error == 0.0);

  const auto killed = truncate(BandOperator::matrix_unit(s, 0, 3), 2);
  CHECK(killed.band.is_zero());
  CHECK(killed.error == doctest::Approx(1.0).epsilon(1e-12));

  // exponentially decaying band, cut at r = 2; error against the SVD oracle
  std::vector<OperatorEntry> decay;
  for (PointId x = 0; x < 8; ++x) {
    for (PointId y = 0; y < 8; ++y) {
      decay.push_back(OperatorEntry{x, y, Scalar{std::pow(2.0, -static_cast<double>(
                                                    s->dist(x, y))), 0.0}});
    }
  }
  const BandOperator a(s, decay);
  const auto cut = truncate(a, 2);
  CHECK(cut.band.propagation() <= 2);
  CHECK(cut.error == doctest::Approx(oracle::svd_norm(subtract(a, cut.band))).epsilon(1e-9));

  // truncation is a projection at fixed r
  const auto again = truncate(cut.band, 2);
  CHECK(again.band == cut.band);
  CHECK(again.error == 0.0);
}

TEST_CASE("ghost tail") {
  const Dist n = 6;
  const SpacePtr s = line(n);
  std::vector<OperatorEntry> flat;
  for (PointId x = 0; x < n; ++x) {
    for (PointId y = 0; y < n; ++y) {
      flat.push_back(OperatorEntry{x, y, Scalar{1.0 / static_cast<double>(n), 0.0}});
    }
  }
  const BandOperator ghostlike(s, flat);
  CHECK(ghost_tail(ghostlike, {}) == doctest::Approx(1.0 / 6.0));
  std::vector<PointId> all(n);
  for (PointId i = 0; i < n; ++i) all[i] = i;
  CHECK(ghost_tail(ghostlike, all) == 0.0);

  const BandOperator e23 = BandOperator::matrix_unit(s, 2, 3);
  CHECK(ghost_tail(e23, {2}) == 0.0);
  CHECK(ghost_tail(e23, {0}) == 1.0);

  // antitone in A
  testutil::Rng rng(5);
  const BandOperator a = testutil::random_dyadic_band(rng, s, 3);
  double prev = ghost_tail(a, {});
  std::vector<PointId> grow;
  for (PointId i = 0; i < n; ++i) {
    grow.push_back(i);
    const double tail = ghost_tail(a, grow);
    CHECK(tail <= prev);
    prev = tail;
  }
}

TEST_CASE("operator norm: exact small cases") {
  const SpacePtr s = line(4);
  CHECK(operator_norm(BandOperator::matrix_unit(s, 1, 3)) == doctest::Approx(1.0));

  const SpacePtr two = share(build_graph_space(2, {{0, 1}}));
  std::vector<OperatorEntry> ones;
  for (PointId x = 0; x < 2; ++x) {
    for (PointId y = 0; y < 2; ++y) ones.push_back(OperatorEntry{x, y, Scalar{1.0, 0.0}});
  }
  CHECK(operator_norm(BandOperator(two, ones)) == doctest::Approx(2.0));
  CHECK(operator_norm(BandOperator::zero(two)) == 0.0);
  CHECK_THROWS_AS(operator_norm(BandOperator::zero(two), 0.0), error);
}

TEST_CASE("operator norm agrees with the dense oracle") {
  testutil::Rng rng(777);
  // dense path (n <= 32)
  const SpacePtr small = share(testutil::random_graph_space(rng, 18));
  for (int trial = 0; trial < 15; ++trial) {
    const BandOperator a = testutil::random_dyadic_band(rng, small, 4);
    CHECK(operator_norm(a, 1e-9) ==
          doctest::Approx(oracle::svd_norm(a)).epsilon(1e-8));
  }
  // power-iteration path (n > 32)
  const SpacePtr big = share(build_grid_window(1, 60));
  for (int trial = 0; trial < 10; ++trial) {
    const BandOperator a = testutil::random_dyadic_band(rng, big, 3);
    CHECK(operator_norm(a, 1e-10) ==
          doctest::Approx(oracle::svd_norm(a)).epsilon(1e-6));
  }
}

TEST_CASE("norm is submultiplicative and satisfies the C*-identity") {
  testutil::Rng rng(2024);
  const SpacePtr s = share(testutil::random_graph_space(rng, 24));
  const double tol = 1e-9;
  for (int trial = 0; trial < 20; ++trial) {
    const BandOperator a = testutil::random_dyadic_band(rng, s, 3);
    const BandOperator b = testutil::random_dyadic_band(rng, s, 3);
    const double na = operator_norm(a, tol);
    const double nb = operator_norm(b, tol);
    CHECK(operator_norm(multiply(a, b), tol) <= na * nb + 1e-7);
    const double cstar = operator_norm(multiply(a.adjoint(), a), tol);
    CHECK(std::abs(cstar - na * na) <= 2 * tol * std::max(1.0, na * na) + 1e-9);
  }
}

TEST_CASE("operators over mismatched spaces are rejected") {
  const SpacePtr a = line(4);
  const SpacePtr b = line(5);
  CHECK_THROWS_AS(add(BandOperator::identity(a), BandOperator::identity(b)), error);
  CHECK_THROWS_AS(BandOperator::matrix_unit(a, 0, 7), error);
}
