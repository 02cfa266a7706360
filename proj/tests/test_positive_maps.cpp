#include <doctest.h>

#include "opineq/positive_map.hpp"
#include "opineq/random.hpp"
#include "opineq/verifier.hpp"

using namespace opineq;

namespace {

SymMat random_symmetric(SplitMix64& rng, Index n) {
  Eigen::MatrixXd g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) g(i, j) = rng.uniform(-2.0, 2.0);
  return SymMat(Eigen::MatrixXd(g + g.transpose()));
}

std::vector<PositiveUnitalMap> sample_maps(SplitMix64& rng, Index n) {
  std::vector<PositiveUnitalMap> maps;
  for (const char* tag : {"identity", "corner", "trace", "vecstate", "pinching", "mixture"})
    maps.push_back(random_map(tag, rng, n));
  Eigen::MatrixXd v = random_orthogonal(rng, n).leftCols(n - 1);
  maps.push_back(PositiveUnitalMap::compression(v));
  return maps;
}

}  // namespace

TEST_CASE("corner of the counterexample matrix") {
  const SymMat a = SymMat::from_rows({{4, 1, -1}, {1, 2, 1}, {-1, 1, 2}});
  const auto phi = PositiveUnitalMap::corner(3, 2);
  CHECK(apply(phi, a) == SymMat::from_rows({{4, 1}, {1, 2}}));
  CHECK(phi.in_dim() == 3);
  CHECK(phi.out_dim() == 2);
  CHECK(phi.tag() == "corner");
}

TEST_CASE("scalar-valued maps") {
  const SymMat a = SymMat::from_rows({{1, 0, -1}, {0, 3, 1}, {-1, 1, 2}});
  const auto state = PositiveUnitalMap::vector_state(Eigen::VectorXd::Constant(3, 1 / std::sqrt(3.0)));
  CHECK(apply(state, a).value() == doctest::Approx(2.0));
  CHECK(apply(state, square(a)).value() == doctest::Approx(20.0 / 3));
  CHECK(state.tag() == "vecstate");
  const auto tr = PositiveUnitalMap::normalized_trace(2);
  CHECK(apply(tr, SymMat::from_rows({{3, -2}, {-2, 7}})).value() == 5);
  CHECK(tr.tag() == "trace");
  CHECK(tr.out_dim() == 1);
}

TEST_CASE("pinching and mixtures") {
  const SymMat a = SymMat::from_rows({{1, 2, 3}, {2, 4, 5}, {3, 5, 6}});
  const auto pin = PositiveUnitalMap::pinching(3, {{0, 2}, {1}});
  const SymMat p = apply(pin, a);
  CHECK(p(0, 2) == 3);
  CHECK(p(0, 1) == 0);
  CHECK(p(1, 1) == 4);
  CHECK(pin.tag() == "pinching");

  const Eigen::MatrixXd swap = (Eigen::MatrixXd(2, 2) << 0, 1, 1, 0).finished();
  const auto mix = PositiveUnitalMap::mixture({0.5, 0.5}, {Eigen::MatrixXd::Identity(2, 2), swap});
  const SymMat m = apply(mix, SymMat::diagonal({1, 3}));
  CHECK(m == SymMat::diagonal({2, 2}));
  CHECK(mix.tag() == "mixture");
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(PositiveUnitalMap::corner(3, 4), ShapeError);
  CHECK_THROWS_AS(PositiveUnitalMap::corner(3, 0), ShapeError);
  CHECK_THROWS_AS(PositiveUnitalMap::vector_state(Eigen::VectorXd::Ones(2)), BadParameter);
  CHECK_THROWS_AS(PositiveUnitalMap::compression(Eigen::MatrixXd::Ones(3, 2)), BadParameter);
  CHECK_THROWS_AS(PositiveUnitalMap::compression(Eigen::MatrixXd::Identity(2, 3)), ShapeError);
  CHECK_THROWS_AS(PositiveUnitalMap::pinching(3, {{0, 1}}), BadParameter);
  CHECK_THROWS_AS(PositiveUnitalMap::pinching(3, {{0, 1}, {1, 2}}), BadParameter);
  CHECK_THROWS_AS(PositiveUnitalMap::pinching(3, {{0, 1}, {5}}), ShapeError);
  CHECK_THROWS_AS(PositiveUnitalMap::mixture({0.5, 0.6}, {Eigen::MatrixXd::Identity(2, 2),
                                                          Eigen::MatrixXd::Identity(2, 2)}),
                  BadParameter);
  CHECK_THROWS_AS(PositiveUnitalMap::mixture({1.0}, {Eigen::MatrixXd::Ones(2, 2)}), BadParameter);
  CHECK_THROWS_AS(apply(PositiveUnitalMap::corner(3, 2), SymMat::identity(2)), ShapeError);
}

TEST_CASE("every map is linear, unital and positive") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = Index(rng.uniform_int(2, 7));
    for (const auto& phi : sample_maps(rng, n)) {
      const SymMat x = random_symmetric(rng, n);
      const SymMat y = random_symmetric(rng, n);
      const double s = rng.uniform(-2.0, 2.0);
      const SymMat lhs = apply(phi, x + s * y);
      const SymMat rhs = apply(phi, x) + s * apply(phi, y);
      CHECK((lhs - rhs).max_norm() <= 1e-12 * (1 + x.max_norm() + y.max_norm()));

      const SymMat unit = apply(phi, SymMat::identity(n));
      CHECK((unit - SymMat::identity(phi.out_dim())).max_norm() <= 1e-12);

      const auto check = verify_map(phi, 30, rng.next());
      CHECK(check.passed());
      CHECK(check.trials == 30);
    }
  }
}

TEST_CASE("verify_map rejects a non-isometric compression") {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(3, 2);
  v(0, 0) = 2;
  v(1, 1) = 1;
  const auto bad = PositiveUnitalMap::compression_unchecked(v);
  const auto check = verify_map(bad, 10);
  CHECK_FALSE(check.unital);
  CHECK(check.positive);
  CHECK_FALSE(check.passed());
  CHECK(check.unitality_error == doctest::Approx(3.0));
  CHECK_THROWS_AS(verify_map(bad, 0), BadParameter);
}
