#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "opineq/perspective.hpp"
#include "opineq/verifier.hpp"

using namespace opineq;

TEST_CASE("operator pairs") {
  const SymMat a = SymMat::from_rows({{2, 1}, {1, 2}});
  SUBCASE("B = cA gives a degenerate hull") {
    const auto pair = OperatorPair::create(a, 3.0 * a);
    CHECK(pair.m() == doctest::Approx(3.0));
    CHECK(pair.M() == doctest::Approx(3.0));
    CHECK_THROWS_AS(perspective_chord(pair, parse_function("log")), DegenerateInterval);
    CHECK_THROWS_AS(proposition31_bounds(pair, parse_function("log")), DegenerateInterval);
  }
  SUBCASE("the inner matrix is A^{-1/2} B A^{-1/2}") {
    const SymMat b = SymMat::from_rows({{3, 0}, {0, 1}});
    const auto pair = OperatorPair::create(a, b);
    CHECK((sandwich(pair.sqrt_A(), pair.inner()) - b).max_norm() < 1e-13);
    CHECK(pair.m() == doctest::Approx(pair.inner_spectrum().min_eigenvalue()));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(OperatorPair::create(SymMat::diagonal({1, 0}), a), NotPositiveDefinite);
    CHECK_THROWS_AS(OperatorPair::create(a, SymMat::diagonal({1, -1})), NotPositiveDefinite);
    CHECK_THROWS_AS(OperatorPair::create(a, a, 2.0, 1.0), BadParameter);
    CHECK_THROWS_AS(OperatorPair::create(a, a, 1.5, 2.0), SandwichViolated);
    CHECK_THROWS_AS(OperatorPair::create(a, SymMat::identity(3)), ShapeError);
  }
}

TEST_CASE("perspectives of commuting pairs are scalar perspectives") {
  const SymMat a = SymMat::diagonal({1, 2, 4});
  const SymMat b = SymMat::diagonal({3, 1, 2});
  const auto pair = OperatorPair::create(a, b);
  const auto f = parse_function("log");
  const SymMat p = perspective(pair, f);
  for (Index i = 0; i < 3; ++i) CHECK(p(i, i) == doctest::Approx(a(i, i) * std::log(b(i, i) / a(i, i))));
  CHECK((relative_operator_entropy(pair) - p).max_norm() < 1e-14);
  const SymMat t = tsallis_relative_operator_entropy(pair, 0.5);
  for (Index i = 0; i < 3; ++i)
    CHECK(t(i, i) == doctest::Approx((std::sqrt(a(i, i) * b(i, i)) - a(i, i)) / 0.5));
  CHECK_THROWS_AS(tsallis_relative_operator_entropy(pair, 0.0), BadParameter);
  CHECK_THROWS_AS(tsallis_relative_operator_entropy(pair, 1.5), BadParameter);
}

TEST_CASE("the sandwich spread is never positive") {
  SplitMix64 rng(17);
  for (int t = 0; t < 100; ++t) {
    const Index n = Index(rng.uniform_int(2, 6));
    const auto pair = random_sandwich_pair(rng.next(), n, 0.3, 4.0);
    CHECK(loewner_compare(sandwich_spread(pair), SymMat::zero(n)).less_or_equal());
    CHECK(loewner_compare(pair.m() * pair.A(), pair.B()).less_or_equal());
    CHECK(loewner_compare(pair.B(), pair.M() * pair.A()).less_or_equal());
  }
}

TEST_CASE("perspective bounds on random sandwich pairs") {
  SplitMix64 rng(18);
  for (int t = 0; t < 150; ++t) {
    const Index n = Index(rng.uniform_int(2, 6));
    const double m = rng.uniform(0.1, 1.5);
    const auto pair = random_sandwich_pair(rng.next(), n, m, m + rng.uniform(0.3, 5.0));
    for (const std::string spec : {"power:3", "power:-1", "log", "exp", "tsallis_f:0.5", "power:4"}) {
      for (const auto& r : proposition31_bounds(pair, parse_function(spec))) CHECK_MESSAGE(r.holds(), r.label);
    }
    for (double p : {-1.0, -0.5, 0.5, 1.0})
      for (const auto& r : tsallis_entropy_bounds(pair, p)) CHECK_MESSAGE(r.holds(), r.label << " p=" << p);
    for (const auto& r : relative_entropy_bounds(pair)) CHECK_MESSAGE(r.holds(), r.label);
    for (const char* tag : {"corner", "vecstate", "trace", "pinching", "mixture"}) {
      const auto phi = random_map(tag, rng, n);
      for (const auto& r : proposition32_bounds(pair, phi, parse_function("power:3")))
        CHECK_MESSAGE(r.holds(), r.label << " " << tag);
    }
  }
}

TEST_CASE("Tsallis bounds approach the relative-entropy bounds as p -> 0") {
  const auto pair = random_sandwich_pair(5, 4, 0.5, 3.0);
  const SymMat s = relative_operator_entropy(pair);
  for (double p : {1e-6, -1e-6}) {
    const auto ts = tsallis_entropy_bounds(pair, p);
    const auto rel = relative_entropy_bounds(pair);
    const double scale = 1 + s.max_norm();
    CHECK((tsallis_relative_operator_entropy(pair, p) - s).max_norm() < 1e-4 * scale);
    CHECK((ts[0].lhs - rel[0].lhs).max_norm() < 1e-4 * scale);
    CHECK((ts[1].rhs - rel[1].rhs).max_norm() < 1e-4 * scale);
  }
}

TEST_CASE("density operators") {
  const SymMat half = SymMat::diagonal({0.5, 0.5});
  const auto rho = DensityOperator::create(half);
  CHECK(von_neumann_entropy(rho) == doctest::Approx(std::log(2.0)));
  CHECK(quantum_tsallis_entropy(rho, 0.5) == doctest::Approx(2 * (std::sqrt(2.0) - 1)));
  CHECK(von_neumann_lower_bound(rho).bound == 0);
  CHECK(von_neumann_lower_bound(rho).holds());
  CHECK(corollary32_lower_bound(rho, 0.5).holds());

  CHECK_THROWS_AS(DensityOperator::create(SymMat::diagonal({0.6, 0.6})), InvalidMatrix);
  CHECK_THROWS_AS(DensityOperator::create(SymMat::diagonal({1.0, 0.0})), InvalidMatrix);
  CHECK_THROWS_AS(DensityOperator::create(SymMat::diagonal({1.5, -0.5})), InvalidMatrix);
  CHECK_THROWS_AS(DensityOperator::create(SymMat::diagonal({0.3, 0.7}), 0.4), SpectrumNotEnclosed);
  CHECK_THROWS_AS(DensityOperator::create(SymMat::diagonal({0.3, 0.7}), 0.2, 0.6), SpectrumNotEnclosed);
  CHECK_THROWS_AS(DensityOperator::create(SymMat::diagonal({0.3, 0.7}), 0.2, 1.2), SpectrumNotEnclosed);
  const auto widened = DensityOperator::create(SymMat::diagonal({0.3, 0.7}), 0.1, 0.9);
  CHECK(widened.m() == 0.1);
  CHECK(widened.M() == 0.9);

  SUBCASE("Tsallis entropies tend to the von Neumann entropy") {
    const auto r = random_density(3, 5);
    const double s = von_neumann_entropy(r);
    CHECK(std::abs(quantum_tsallis_entropy(r, 1e-6) - s) < 1e-4);
    CHECK(std::abs(quantum_tsallis_entropy(r, -1e-6) - s) < 1e-4);
    CHECK(corollary32_bound_value(0.1, 0.6, 1e-7) == doctest::Approx(von_neumann_bound_value(0.1, 0.6)).epsilon(1e-5));
  }
  SUBCASE("relative Tsallis entropy of a state against itself is zero") {
    const auto r = random_density(8, 4);
    CHECK(std::abs(tsallis_relative_quantum_entropy(r, r, 0.5)) < 1e-13);
  }
}

TEST_CASE("closed-form entropy bounds") {
  CHECK(von_neumann_bound_value(0.1, 0.9) == doctest::Approx(0.4));
  CHECK(corollary32_bound_value(0.1, 0.9, 0.5) ==
        doctest::Approx(0.5 * (std::pow(0.9, 1.5) - std::pow(0.1, 1.5)) * 0.1 * 0.9 /
                        (2 * std::pow(0.1, 1.5) * std::pow(0.9, 1.5))));
  // The von Neumann bound exceeds the entropy here: S = 0.325 < 0.4.
  const auto rho = DensityOperator::create(SymMat::diagonal({0.1, 0.9}));
  const auto vn = von_neumann_lower_bound(rho);
  CHECK(vn.entropy == doctest::Approx(-(0.1 * std::log(0.1) + 0.9 * std::log(0.9))));
  CHECK_FALSE(vn.entropy_vs_bound.holds());
  CHECK(vn.bound_nonnegative.holds());
}

TEST_CASE("trace-level bounds for the relative Tsallis entropy") {
  SplitMix64 rng(19);
  for (int t = 0; t < 200; ++t) {
    const Index n = Index(rng.uniform_int(2, 6));
    const auto rho = random_density(rng.next(), n);
    const auto sigma = random_density(rng.next(), n);
    for (double p : {-1.0, -0.5, 0.5, 1.0}) {
      const auto rep = remark32_trace_bounds(rho, sigma, p);
      CHECK_MESSAGE(rep.holds(), "p=" << p << " discrepancy " << rep.formula_discrepancy);
      const double scale = 1 + std::max({std::abs(rep.lower.lhs), std::abs(rep.upper.rhs), std::abs(rep.trace_Tp)});
      CHECK(rep.formula_discrepancy <= 1e-9 * scale);
      CHECK(rep.cited.has_value() == (p > 0));
      CHECK(rep.dp_bound.has_value() == (p > 0));
    }
  }
  const auto rho = random_density(1, 3);
  CHECK_THROWS_AS(remark32_trace_bounds(rho, rho, 0.5, 1.0, 1.0), DegenerateInterval);
  CHECK_THROWS_AS(remark32_trace_bounds(rho, random_density(2, 3), 0.0), BadParameter);
  CHECK_THROWS_AS(remark32_trace_bounds(rho, random_density(2, 4), 0.5), ShapeError);
}

TEST_CASE("scalar checks") {
  const auto c = make_scalar_check("c", 1.0, 1.0 - 1e-11);
  CHECK(c.holds());
  CHECK(c.slack == doctest::Approx(-1e-11));
  CHECK(c.tolerance == doctest::Approx(2e-10));
  CHECK_FALSE(make_scalar_check("d", 1.0, 0.9).holds());
}
