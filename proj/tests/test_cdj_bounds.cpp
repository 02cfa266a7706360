#include <doctest.h>

#include <cmath>

#include "opineq/cdj_bounds.hpp"
#include "opineq/verifier.hpp"

using namespace opineq;

namespace {

const SymMat kCounterexample = SymMat::from_rows({{4, 1, -1}, {1, 2, 1}, {-1, 1, 2}});
const SymMat kJensen = SymMat::from_rows({{1, 0, -1}, {0, 3, 1}, {-1, 1, 2}});
const SymMat kKantorovich = SymMat::from_rows({{3, -2}, {-2, 7}});

PositiveUnitalMap uniform_state(Index n) {
  return PositiveUnitalMap::vector_state(Eigen::VectorXd::Constant(n, 1 / std::sqrt(double(n))));
}

}  // namespace

TEST_CASE("make_report orientation and tolerance") {
  const auto r = make_report("x", SymMat::diagonal({1, 2}), SymMat::diagonal({2, 2}));
  CHECK(r.holds());
  CHECK(r.tightness == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(r.verdict.tolerance_used == doctest::Approx(1e-8 * 3));
  const auto bad = make_report("y", SymMat::diagonal({2, 2}), SymMat::diagonal({1, 2}));
  CHECK_FALSE(bad.holds());
  CHECK(bad.tightness == doctest::Approx(-1.0));
  CHECK(bad.label == "y");
}

TEST_CASE("Jensen-gap example on [0.25, 3.8]") {
  const auto ctx = build_context(kJensen, uniform_state(3), parse_function("power:3"), 0.25, 3.8);
  CHECK(ctx.phi_A.value() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(ctx.f_phiA.value() == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(ctx.phi_fA.value() == doctest::Approx(24.0).epsilon(1e-13));
  CHECK(ctx.phi_A2.value() == doctest::Approx(20.0 / 3).epsilon(1e-14));
  CHECK(ctx.bounds.alpha == doctest::Approx(1.5));
  CHECK(ctx.bounds.beta == doctest::Approx(22.8));

  const auto upper = theorem1_upper(ctx);
  const auto converse = theorem1_converse(ctx);
  CHECK(upper.holds());
  CHECK(converse.holds());
  CHECK(std::abs(upper.rhs.value() - 27.14) < 0.01);
  CHECK(std::abs(converse.rhs.value() - 43.54) < 0.01);
  // Exact values with alpha = 3/2, beta = 114/5.
  const double spread = (4.05 * 2 - 0.95);
  CHECK(upper.rhs.value() == doctest::Approx(24 + 21.3 / 2 * spread + 0.5 * (1.5 * 4 - 22.8 * 20 / 3)));
  CHECK(converse.rhs.value() == doctest::Approx(8 + 21.3 / 2 * spread + 0.5 * (1.5 * 20 / 3 - 22.8 * 4)));
  for (const auto& r : lemma_chord_bounds(ctx)) CHECK_MESSAGE(r.holds(), r.label);
}

TEST_CASE("plain Jensen fails for t^4 under the corner map but Theorem 1 holds") {
  const auto ctx = build_context(kCounterexample, PositiveUnitalMap::corner(3, 2), parse_function("power:4"));
  const auto plain = cdj_plain(ctx);
  CHECK(plain.verdict.relation == LoewnerRelation::Incomparable);
  CHECK((ctx.f_phiA - SymMat::from_rows({{325, 132}, {132, 61}})).max_norm() < 1e-9);
  CHECK((ctx.phi_fA - SymMat::from_rows({{374, 105}, {105, 70}})).max_norm() < 1e-9);
  CHECK(theorem1_upper(ctx).holds());
  CHECK(theorem1_converse(ctx).holds());
  for (const auto& r : lemma_chord_bounds(ctx)) CHECK_MESSAGE(r.holds(), r.label);
}

TEST_CASE("operator convex t^2 satisfies the plain inequality") {
  SplitMix64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const SymMat a = random_symmetric_with_spectrum(rng.next(), 5, -2, 3);
    const auto phi = random_map("mixture", rng, 5);
    CHECK(cdj_plain(build_context(a, phi, parse_function("power:2"))).holds());
  }
}

TEST_CASE("chord bounds reduce to the scalar inequality under the identity map") {
  const SymMat a = SymMat::diagonal({0.5, 1.0, 2.0});
  const auto f = parse_function("exp");
  const auto ctx = build_context(a, PositiveUnitalMap::identity(3), f);
  const auto lemma = lemma_chord_bounds(ctx);
  const auto L = chord_line(f, 0.5, 2.0);
  const double want = L(1.0) - std::exp(1.0) - ctx.bounds.alpha / 2 * (2.0 - 1.0) * (1.0 - 0.5);
  CHECK(lemma[0].tightness == doctest::Approx(std::min(want, 0.0)).epsilon(1e-12));
}

TEST_CASE("build_context validation") {
  const auto phi = PositiveUnitalMap::identity(2);
  const auto f = parse_function("power:3");
  CHECK_THROWS_AS(build_context(SymMat::identity(2), phi, f), DegenerateInterval);
  CHECK_THROWS_AS(build_context(kKantorovich, phi, f, 3.0, 9.0), SpectrumNotEnclosed);
  CHECK_THROWS_AS(build_context(kKantorovich, phi, f, 1.0, 5.0), SpectrumNotEnclosed);
  CHECK_THROWS_AS(build_context(SymMat::diagonal({-1, 1}), phi, parse_function("log")), DomainViolation);
  CHECK_THROWS_AS(build_context(kKantorovich, PositiveUnitalMap::identity(3), f), ShapeError);
  const auto widened = build_context(kKantorovich, phi, f, 1.0, 9.0);
  CHECK(widened.m() == 1.0);
  CHECK(widened.M() == 9.0);
}

TEST_CASE("Theorem 2 and the refinement chain") {
  SUBCASE("non-positive f is rejected") {
    const auto ctx = build_context(SymMat::diagonal({-1, 2}), PositiveUnitalMap::identity(2), parse_function("power:3"));
    CHECK_THROWS_AS(theorem2_sandwich(ctx), NonPositiveFunction);
    CHECK_THROWS_AS(theorem2_k_version(ctx), NonPositiveFunction);
  }
  SUBCASE("alpha = 0 is not strictly convex") {
    const auto ctx =
        build_context(SymMat::diagonal({-1, 2}), PositiveUnitalMap::identity(2), parse_function("power:4"));
    CHECK_THROWS_AS(corollary1_chain(ctx), NotStrictlyConvex);
  }
  SUBCASE("exp under random maps") {
    SplitMix64 rng(12);
    for (int t = 0; t < 100; ++t) {
      const Index n = Index(rng.uniform_int(2, 6));
      const SymMat a = random_symmetric_with_spectrum(rng.next(), n, -1, 2.5, t % 2 == 0);
      for (const char* tag : {"corner", "vecstate", "trace", "pinching", "mixture"}) {
        const auto ctx = build_context(a, random_map(tag, rng, n), parse_function("exp"));
        for (const auto& r : theorem2_sandwich(ctx)) CHECK_MESSAGE(r.holds(), r.label);
        for (const auto& r : theorem2_k_version(ctx)) CHECK_MESSAGE(r.holds(), r.label);
        const auto chain = corollary1_chain(ctx);
        CHECK(chain.terms.size() == 5);
        CHECK(chain.links.size() == 4);
        CHECK(chain.prerequisite.has_value());
        CHECK(chain.holds());
        CHECK(chain.worst_tightness() >= -1e-8 * (1 + chain.terms.back().max_norm()));
      }
    }
  }
}

TEST_CASE("power classification") {
  CHECK(classify_power(-2) == PowerCase::OutsideOperatorConvex);
  CHECK(classify_power(3) == PowerCase::OutsideOperatorConvex);
  CHECK(classify_power(-1) == PowerCase::OperatorConvex);
  CHECK(classify_power(-0.5) == PowerCase::OperatorConvex);
  CHECK(classify_power(1.5) == PowerCase::OperatorConvex);
  CHECK(classify_power(2) == PowerCase::OperatorConvex);
  CHECK(classify_power(0.5) == PowerCase::OperatorConcave);
  CHECK(std::string(to_string(PowerCase::OperatorConcave)) == "operator_concave");
}

TEST_CASE("power chains hold on random instances") {
  SplitMix64 rng(13);
  for (int t = 0; t < 60; ++t) {
    const Index n = Index(rng.uniform_int(2, 6));
    const SymMat a = random_symmetric_with_spectrum(rng.next(), n, 0.2, 4.0, t % 3 == 0);
    const auto phi = random_map(t % 2 ? "corner" : "mixture", rng, n);
    for (double r : {-3.0, -2.0, -1.0, -0.5, 0.25, 0.5, 0.75, 1.5, 2.0, 2.5, 3.0}) {
      const auto rep = power_corollary(a, phi, r);
      CHECK_MESSAGE(rep.holds(), "r=" << r << " worst " << rep.chain.worst_tightness());
      const std::size_t terms = rep.power_case == PowerCase::OutsideOperatorConvex ? 5 : 4;
      CHECK(rep.chain.terms.size() == terms);
    }
  }
  CHECK_THROWS_AS(power_corollary(SymMat::diagonal({-1, 2}), PositiveUnitalMap::identity(2), 2.0), BadParameter);
  CHECK_THROWS_AS(power_corollary(SymMat::diagonal({1, 2}), PositiveUnitalMap::identity(2), NAN), BadParameter);
}

TEST_CASE("concave powers: the correction enters with a minus sign") {
  const SymMat a = SymMat::diagonal({1, 2, 4});
  const auto phi = PositiveUnitalMap::normalized_trace(3);
  const double r = 0.5;
  const auto rep = power_corollary(a, phi, r);
  CHECK(rep.power_case == PowerCase::OperatorConcave);
  CHECK(rep.gamma == doctest::Approx(r * (1 - r) / (2 * std::pow(4.0, 2 - r))));
  CHECK(rep.holds());

  // Spread (M+m)Phi(A) - Mm - Phi(A^2) = 2/3 > 0 here, so adding the
  // correction instead of subtracting it breaks the first comparison.
  const SymMat phi_Ar = apply(phi, SymMat::diagonal({1, std::sqrt(2.0), 2}));
  const SymMat spread = SymMat::scalar(5 * 7.0 / 3 - 4 - 7);
  CHECK(spread.value() == doctest::Approx(2.0 / 3));
  const auto plus_sign = make_report("plus", (phi_Ar + rep.gamma * spread) / rep.K, phi_Ar / rep.K);
  CHECK_FALSE(plus_sign.holds());
  CHECK(rep.chain.terms[2] == (phi_Ar - rep.gamma * spread) / rep.K);
}

TEST_CASE("sharpened Kantorovich inequality") {
  const auto k = improved_kantorovich(kKantorovich, PositiveUnitalMap::normalized_trace(2), 2.0, 8.0);
  CHECK(k.lhs.value() == doctest::Approx(5.0 / 17).epsilon(1e-14));
  CHECK(k.classical_rhs.value() - k.lhs.value() == doctest::Approx(5.0 / 272).epsilon(1e-12));
  CHECK(k.improved_rhs.value() - k.lhs.value() == doctest::Approx(143.0 / 8704).epsilon(1e-12));
  CHECK(k.improvement.value() == doctest::Approx(1.0 / 512).epsilon(1e-12));
  CHECK(k.holds());

  SplitMix64 rng(14);
  for (int t = 0; t < 100; ++t) {
    const Index n = Index(rng.uniform_int(2, 7));
    const SymMat a = random_symmetric_with_spectrum(rng.next(), n, 0.1, 5.0, t % 4 == 0);
    const auto rep = improved_kantorovich(a, random_map("pinching", rng, n));
    CHECK(rep.holds());
  }
  CHECK_THROWS_AS(improved_kantorovich(SymMat::diagonal({-1, 2}), PositiveUnitalMap::identity(2)),
                  NotPositiveDefinite);
  CHECK_THROWS_AS(improved_kantorovich(kKantorovich, PositiveUnitalMap::identity(2), 3.0, 8.0),
                  SpectrumNotEnclosed);
  CHECK_THROWS_AS(improved_kantorovich(kKantorovich, PositiveUnitalMap::identity(2), 8.0, 2.0), DegenerateInterval);
}
