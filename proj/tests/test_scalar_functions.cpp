#include <doctest.h>

#include <cmath>

#include "opineq/random.hpp"
#include "opineq/scalar_function.hpp"

using namespace opineq;

namespace {

const std::vector<std::string> kCatalogSamples{"power:3",       "power:4",        "power:-1",     "power:2",
                                               "power:0.5",     "power:-0.5",     "power:1.5",    "inverse",
                                               "log",           "exp",            "tsallis_f:0.5", "tsallis_f:-0.5",
                                               "tsallis_f:1",   "tsallis_g:0.5",  "tsallis_g:-1"};

double brute_ratio_extreme(const ScalarFunction& f, double m, double M, bool want_max) {
  const ChordLine L = chord_line(f, m, M);
  double best = 1.0;
  const int n = 200000;
  for (int i = 0; i <= n; ++i) {
    const double t = m + (M - m) * i / n;
    const double v = L(t) / f(t);
    best = want_max ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

}  // namespace

TEST_CASE("catalog values") {
  CHECK(parse_function("power:3")(2.0) == 8);
  CHECK(parse_function("power:-1")(4.0) == 0.25);
  CHECK(parse_function("inverse")(4.0) == 0.25);
  CHECK(parse_function("log")(std::exp(1.0)) == doctest::Approx(1.0));
  CHECK(parse_function("exp")(0.0) == 1);
  CHECK(parse_function("tsallis_f:0.5")(4.0) == doctest::Approx((1 - 2.0) / 0.5));
  CHECK(parse_function("tsallis_g:0.5")(4.0) == doctest::Approx((4 - 2.0) / 0.5));
  CHECK(parse_function("power:0")(5.0) == 1);
  CHECK(parse_function("power:1")(5.0) == 5);
}

TEST_CASE("second derivatives match central differences") {
  for (const auto& spec : kCatalogSamples) {
    const auto f = parse_function(spec);
    for (double t : {0.3, 0.9, 1.7, 3.2}) {
      const double h = 1e-4 * t;
      const double fd = (f(t + h) - 2 * f(t) + f(t - h)) / (h * h);
      CHECK_MESSAGE(f.deriv2(t) == doctest::Approx(fd).epsilon(1e-5), spec << " at " << t);
    }
  }
}

TEST_CASE("domains") {
  CHECK(parse_function("power:3").domain.contains(-2.0));
  CHECK(parse_function("power:4").domain.contains(-2.0));
  CHECK_FALSE(parse_function("power:0.5").domain.contains(0.0));
  CHECK_FALSE(parse_function("power:-2").domain.contains(-1.0));
  CHECK(parse_function("exp").domain.contains(-50.0));
  CHECK_FALSE(parse_function("log").domain.contains(0.0));
  CHECK_FALSE(parse_function("tsallis_f:0.5").domain.contains(-1.0));
}

TEST_CASE("second-derivative shapes") {
  CHECK(parse_function("power:3").deriv2_shape == D2Shape::NondecreasingD2);
  CHECK(parse_function("power:2").deriv2_shape == D2Shape::ConstantD2);
  CHECK(parse_function("power:4").deriv2_shape == D2Shape::GeneralD2);
  CHECK(parse_function("power:5").deriv2_shape == D2Shape::NondecreasingD2);
  CHECK(parse_function("power:-1").deriv2_shape == D2Shape::NonincreasingD2);
  CHECK(parse_function("power:0.5").deriv2_shape == D2Shape::NondecreasingD2);
  CHECK(parse_function("power:1.5").deriv2_shape == D2Shape::NonincreasingD2);
  CHECK(parse_function("power:2.5").deriv2_shape == D2Shape::NondecreasingD2);
  CHECK(parse_function("log").deriv2_shape == D2Shape::NondecreasingD2);
  CHECK(parse_function("exp").deriv2_shape == D2Shape::NondecreasingD2);
  CHECK(parse_function("tsallis_f:0.5").deriv2_shape == D2Shape::NonincreasingD2);
  CHECK(std::string(to_string(D2Shape::GeneralD2)) == "GeneralD2");
}

TEST_CASE("parsing and labels") {
  CHECK_THROWS_AS(parse_function("sqrtish"), UnknownFunction);
  CHECK_THROWS_AS(parse_function("power"), BadParameter);
  CHECK_THROWS_AS(parse_function("power:1,2"), BadParameter);
  CHECK_THROWS_AS(parse_function("power:abc"), BadParameter);
  CHECK_THROWS_AS(parse_function("power:3x"), BadParameter);
  CHECK_THROWS_AS(parse_function("power:nan"), BadParameter);
  CHECK_THROWS_AS(parse_function("log:1"), BadParameter);
  CHECK_THROWS_AS(parse_function("tsallis_f:0"), BadParameter);
  CHECK_THROWS_AS(parse_function("tsallis_f:1.5"), BadParameter);
  CHECK_THROWS_AS(parse_function("tsallis_g:-2"), BadParameter);
  for (const auto& spec : kCatalogSamples) {
    const auto f = parse_function(spec);
    CHECK(parse_function(f.label()).label() == f.label());
  }
  CHECK(parse_function("log").label() == "log");
  CHECK(catalog_names().size() == 6);
}

TEST_CASE("second_derivative_range") {
  const auto cube = second_derivative_range(parse_function("power:3"), 0.25, 3.8);
  CHECK(cube.alpha == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(cube.beta == doctest::Approx(22.8).epsilon(1e-12));

  const auto quartic = second_derivative_range(parse_function("power:4"), -1.0, 2.0);
  CHECK(std::abs(quartic.alpha) < 1e-12);
  CHECK(quartic.beta == doctest::Approx(48.0).epsilon(1e-12));

  const auto inv = second_derivative_range(parse_function("power:-1"), 2.0, 8.0);
  CHECK(inv.alpha == doctest::Approx(2.0 / 512).epsilon(1e-12));
  CHECK(inv.beta == doctest::Approx(2.0 / 8).epsilon(1e-12));

  CHECK_THROWS_AS(second_derivative_range(parse_function("exp"), 1.0, 1.0), DegenerateInterval);
  CHECK_THROWS_AS(second_derivative_range(parse_function("exp"), 2.0, 1.0), DegenerateInterval);
  CHECK_THROWS_AS(second_derivative_range(parse_function("log"), 0.0, 1.0), DomainViolation);
  try {
    second_derivative_range(parse_function("log"), -1.0, 1.0);
    FAIL("expected DomainViolation");
  } catch (const DomainViolation& e) {
    CHECK(e.offending() == -1.0);
  }
}

TEST_CASE("chord line") {
  const auto f = parse_function("power:3");
  const auto L = chord_line(f, 0.25, 3.8);
  CHECK(L(0.25) == f(0.25));
  CHECK(L(3.8) == f(3.8));
  CHECK(L(2.025) == doctest::Approx((f(0.25) + f(3.8)) / 2));
  const SymMat x = SymMat::diagonal({0.5, 1.5, 3.0});
  const SymMat Lx = L(x);
  for (Index i = 0; i < 3; ++i) CHECK(Lx(i, i) == doctest::Approx(L(x(i, i))));
  CHECK(std::abs(Lx(0, 1)) < 1e-15);
}

TEST_CASE("scalar chord bounds hold on a dense grid") {
  SplitMix64 rng(2024);
  for (const auto& spec : kCatalogSamples) {
    const auto f = parse_function(spec);
    for (int trial = 0; trial < 20; ++trial) {
      const bool positive = f.domain.lo == 0;
      const double m = positive ? rng.uniform(0.1, 2.0) : rng.uniform(-2.0, 2.0);
      const double M = m + rng.uniform(0.2, 4.0);
      const auto b = second_derivative_range(f, m, M);
      const auto L = chord_line(f, m, M);
      for (int i = 0; i <= 1000; ++i) {
        const double t = m + (M - m) * i / 1000.0;
        const double q = (M - t) * (t - m) / 2;
        const double gap = L(t) - f(t);
        const double tol = 1e-10 * (1 + std::abs(f(t)) + std::abs(L(t)));
        CHECK_MESSAGE(b.alpha * q <= gap + tol, spec << " t=" << t);
        CHECK_MESSAGE(gap <= b.beta * q + tol, spec << " t=" << t);
      }
    }
  }
}

TEST_CASE("K and k agree with a brute-force grid") {
  SplitMix64 rng(77);
  for (const std::string spec : {"power:3", "power:4", "power:-1", "power:2", "power:0.5", "exp", "power:-2",
                                 "power:1.5", "inverse"}) {
    const auto f = parse_function(spec);
    for (int trial = 0; trial < 10; ++trial) {
      const double m = rng.uniform(0.1, 2.0);
      const double M = m + rng.uniform(0.2, 4.0);
      const double K = K_constant(f, m, M);
      const double k = k_constant(f, m, M);
      CHECK(K >= 1.0);
      CHECK(k <= 1.0);
      CHECK(K == doctest::Approx(brute_ratio_extreme(f, m, M, true)).epsilon(1e-8));
      CHECK(k == doctest::Approx(brute_ratio_extreme(f, m, M, false)).epsilon(1e-8));
    }
  }
  CHECK(K_constant(parse_function("power:1"), 1.0, 3.0) == 1.0);
  CHECK_THROWS_AS(K_constant(parse_function("log"), 0.5, 2.0), NonPositiveFunction);
  CHECK_THROWS_AS(k_constant(parse_function("power:3"), -1.0, 2.0), NonPositiveFunction);
  CHECK_THROWS_AS(K_constant(parse_function("power:3"), 2.0, 2.0), DegenerateInterval);
}

TEST_CASE("closed-form power constant") {
  SplitMix64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const double m = rng.uniform(0.1, 2.0);
    const double M = m + rng.uniform(0.2, 4.0);
    for (double r : {-2.0, -1.0, 1.5, 2.0, 3.0}) {
      const double closed = kantorovich_power_constant(m, M, r);
      CHECK(K_constant(parse_function("power:" + std::to_string(r)), m, M) ==
            doctest::Approx(closed).epsilon(1e-8));
    }
    for (double r : {0.25, 0.5, 0.75}) {
      // Concave powers: the closed form is the minimum of L / f.
      const double closed = kantorovich_power_constant(m, M, r);
      CHECK(k_constant(parse_function("power:" + std::to_string(r)), m, M) ==
            doctest::Approx(closed).epsilon(1e-8));
    }
  }
  CHECK(kantorovich_power_constant(2, 8, -1) == doctest::Approx(100.0 / 64));
  CHECK(kantorovich_power_constant(1, 2, 0) == 1);
  CHECK(kantorovich_power_constant(1, 2, 1) == 1);
  CHECK_THROWS_AS(kantorovich_power_constant(0, 2, 2), BadParameter);
  CHECK_THROWS_AS(kantorovich_power_constant(2, 2, 2), BadParameter);
  CHECK_THROWS_AS(kantorovich_power_constant(1, 2, INFINITY), BadParameter);
}

TEST_CASE("apply_scalar_function") {
  const SymMat a = SymMat::from_rows({{2, 1}, {1, 2}});
  const SymMat e = apply_scalar_function(a, parse_function("power:2"));
  CHECK((e - square(a)).max_norm() < 1e-13);
  const SymMat l = apply_scalar_function(a, parse_function("log"));
  CHECK(l.trace() == doctest::Approx(std::log(3.0)));
  try {
    apply_scalar_function(SymMat::diagonal({1, -0.5}), parse_function("log"));
    FAIL("expected DomainViolation");
  } catch (const DomainViolation& e) {
    CHECK(e.offending() == doctest::Approx(-0.5));
  }
  CHECK_NOTHROW(apply_scalar_function(SymMat::diagonal({1, -0.5}), parse_function("power:3")));
}
