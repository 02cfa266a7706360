#include "opineq/cdj_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace opineq {

InequalityReport make_report(std::string label, SymMat lhs, SymMat rhs, double rel_tol) {
  InequalityReport r;
  r.label = std::move(label);
  r.verdict = loewner_compare(lhs, rhs, rel_tol * scale_of(lhs, rhs));
  r.tightness = r.verdict.gap_min_eig;
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  return r;
}

bool ChainReport::holds() const {
  const bool links_ok = std::all_of(links.begin(), links.end(), [](const auto& l) { return l.holds(); });
  return links_ok && (!prerequisite || prerequisite->holds());
}

double ChainReport::worst_tightness() const {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& l : links) worst = std::min(worst, l.tightness);
  if (prerequisite) worst = std::min(worst, prerequisite->tightness);
  return worst;
}

SymMat CdjContext::spread_of_map() const { return (M() + m()) * phi_A - M() * m() - phi_A2; }
SymMat CdjContext::spread_of_image() const { return (M() + m()) * phi_A - M() * m() - phi_A_sq; }

CdjContext build_context(const SymMat& A, const PositiveUnitalMap& phi, const ScalarFunction& f,
                         std::optional<double> m, std::optional<double> M, double rel_tol) {
  const auto spectrum = eigendecompose(A);
  const double lo = spectrum.min_eigenvalue();
  const double hi = spectrum.max_eigenvalue();
  const double m_used = m.value_or(lo);
  const double M_used = M.value_or(hi);
  if (!(m_used < M_used))
    throw DegenerateInterval("build_context: need m < M (got [" + std::to_string(m_used) + ", " +
                             std::to_string(M_used) + "])");
  const double enclosure_tol = 1e-10 * (1.0 + A.max_norm());
  if (lo < m_used - enclosure_tol || hi > M_used + enclosure_tol)
    throw SpectrumNotEnclosed("build_context: Sp(A) = [" + std::to_string(lo) + ", " + std::to_string(hi) +
                              "] is not inside [m, M]");

  CdjContext ctx;
  ctx.A = A;
  ctx.phi = phi;
  ctx.f = f;
  ctx.rel_tol = rel_tol;
  ctx.bounds = second_derivative_range(f, m_used, M_used);
  ctx.chord = chord_line(f, m_used, M_used);

  ctx.phi_A = apply(phi, A);
  const auto image = eigendecompose(ctx.phi_A);
  if (image.min_eigenvalue() < m_used - enclosure_tol || image.max_eigenvalue() > M_used + enclosure_tol)
    throw SpectrumNotEnclosed("build_context: Sp(Phi(A)) escapes [m, M]; is the map unital?");

  ctx.phi_A2 = apply(phi, square(A));
  ctx.phi_A_sq = square(ctx.phi_A);
  ctx.phi_fA = apply(phi, apply_scalar_function(spectrum, f));
  ctx.f_phiA = apply_scalar_function(image, f);
  return ctx;
}

InequalityReport cdj_plain(const CdjContext& ctx) {
  return make_report("cdj.plain", ctx.f_phiA, ctx.phi_fA, ctx.rel_tol);
}

std::array<InequalityReport, 4> lemma_chord_bounds(const CdjContext& ctx) {
  const double a = ctx.bounds.alpha;
  const double b = ctx.bounds.beta;
  const SymMat chord = ctx.chord(ctx.phi_A);
  const SymMat map_spread = ctx.spread_of_map();
  const SymMat image_spread = ctx.spread_of_image();
  return {
      make_report("lemma.i", ctx.phi_fA, chord - (a / 2) * map_spread, ctx.rel_tol),
      make_report("lemma.ii", chord - (b / 2) * map_spread, ctx.phi_fA, ctx.rel_tol),
      make_report("lemma.iii", ctx.f_phiA, chord - (a / 2) * image_spread, ctx.rel_tol),
      make_report("lemma.iv", chord - (b / 2) * image_spread, ctx.f_phiA, ctx.rel_tol),
  };
}

namespace {

/// (beta - alpha)/2 {(M+m) Phi(A) - Mm}
SymMat jensen_spread_term(const CdjContext& ctx) {
  const double a = ctx.bounds.alpha;
  const double b = ctx.bounds.beta;
  return ((b - a) / 2) * ((ctx.M() + ctx.m()) * ctx.phi_A - ctx.M() * ctx.m());
}

}  // namespace

InequalityReport theorem1_upper(const CdjContext& ctx) {
  const SymMat rhs = ctx.phi_fA + jensen_spread_term(ctx) + theorem1_middle_term(ctx);
  return make_report("theorem1.upper", ctx.f_phiA, rhs, ctx.rel_tol);
}

SymMat theorem1_middle_term(const CdjContext& ctx) {
  return 0.5 * (ctx.bounds.alpha * ctx.phi_A_sq - ctx.bounds.beta * ctx.phi_A2);
}

InequalityReport theorem1_converse(const CdjContext& ctx) {
  const double a = ctx.bounds.alpha;
  const double b = ctx.bounds.beta;
  const SymMat rhs = ctx.f_phiA + jensen_spread_term(ctx) + 0.5 * (a * ctx.phi_A2 - b * ctx.phi_A_sq);
  return make_report("theorem1.converse", ctx.phi_fA, rhs, ctx.rel_tol);
}

std::array<InequalityReport, 2> theorem2_sandwich(const CdjContext& ctx) {
  const double K = K_constant(ctx.f, ctx.m(), ctx.M());
  const double a = ctx.bounds.alpha;
  const SymMat lower = (ctx.phi_fA + (a / 2) * ctx.spread_of_map()) / K;
  const SymMat upper = K * ctx.phi_fA - (a / 2) * ctx.spread_of_image();
  return {
      make_report("theorem2.lower", lower, ctx.f_phiA, ctx.rel_tol),
      make_report("theorem2.upper", ctx.f_phiA, upper, ctx.rel_tol),
  };
}

std::array<InequalityReport, 2> theorem2_k_version(const CdjContext& ctx) {
  const double k = k_constant(ctx.f, ctx.m(), ctx.M());
  if (!(k > 0)) throw NonPositiveConstant("theorem2_k_version: k(m, M, f) <= 0");
  const double b = ctx.bounds.beta;
  const SymMat lower = k * ctx.phi_fA - (b / 2) * ctx.spread_of_image();
  const SymMat upper = (ctx.phi_fA + (b / 2) * ctx.spread_of_map()) / k;
  return {
      make_report("theorem2k.lower", lower, ctx.f_phiA, ctx.rel_tol),
      make_report("theorem2k.upper", ctx.f_phiA, upper, ctx.rel_tol),
  };
}

namespace {

ChainReport ascending_chain(std::string label, std::vector<SymMat> terms, double rel_tol) {
  ChainReport chain;
  chain.label = label;
  for (std::size_t i = 0; i + 1 < terms.size(); ++i)
    chain.links.push_back(
        make_report(label + ".link" + std::to_string(i + 1), terms[i], terms[i + 1], rel_tol));
  chain.terms = std::move(terms);
  return chain;
}

}  // namespace

ChainReport corollary1_chain(const CdjContext& ctx) {
  const double a = ctx.bounds.alpha;
  if (!strictly_convex(ctx.bounds)) throw NotStrictlyConvex("corollary1_chain: needs min f'' > 0 on [m, M]");
  const double K = K_constant(ctx.f, ctx.m(), ctx.M());
  const SymMat map_spread = ctx.spread_of_map();
  auto chain = ascending_chain("corollary1",
                               {
                                   ctx.phi_fA / K,
                                   (ctx.phi_fA + (a / 2) * map_spread) / K,
                                   ctx.f_phiA,
                                   K * ctx.phi_fA - (a / 2) * ctx.spread_of_image(),
                                   K * ctx.phi_fA,
                               },
                               ctx.rel_tol);
  chain.prerequisite = make_report("corollary1.prerequisite", SymMat::zero(map_spread.dim()), map_spread, ctx.rel_tol);
  return chain;
}

const char* to_string(PowerCase c) {
  switch (c) {
    case PowerCase::OutsideOperatorConvex: return "outside_operator_convex";
    case PowerCase::OperatorConvex: return "operator_convex";
    case PowerCase::OperatorConcave: return "operator_concave";
  }
  return "?";
}

PowerCase classify_power(double r) {
  if (r < -1 || r > 2) return PowerCase::OutsideOperatorConvex;
  if (r > 0 && r < 1) return PowerCase::OperatorConcave;
  return PowerCase::OperatorConvex;
}

PowerChainReport power_corollary(const SymMat& A, const PositiveUnitalMap& phi, double r,
                                 std::optional<double> m, std::optional<double> M, double rel_tol) {
  if (!std::isfinite(r)) throw BadParameter("power_corollary: non-finite r");
  const auto spectrum = eigendecompose(A);
  const double m_used = m.value_or(spectrum.min_eigenvalue());
  const double M_used = M.value_or(spectrum.max_eigenvalue());
  if (!(m_used > 0) || !(m_used < M_used)) throw BadParameter("power_corollary: requires 0 < m < M");

  const auto ctx = build_context(A, phi, catalog_lookup("power", std::array{r}), m_used, M_used, rel_tol);

  PowerChainReport out;
  out.r = r;
  out.power_case = classify_power(r);
  out.K = kantorovich_power_constant(m_used, M_used, r);
  const double K = out.K;
  const SymMat map_spread = ctx.spread_of_map();
  const SymMat& phi_Ar = ctx.phi_fA;
  const SymMat& phiA_r = ctx.f_phiA;

  if (out.power_case == PowerCase::OperatorConcave) {
    // t^r is concave here: max f'' = -r(1-r) M^{r-2} enters the k-sandwich,
    // so the correction term is subtracted.
    out.gamma = r * (1 - r) / (2 * std::pow(M_used, 2 - r));
    out.chain = ascending_chain("power_corollary",
                                {phi_Ar, phiA_r, (phi_Ar - out.gamma * map_spread) / K, phi_Ar / K}, rel_tol);
  } else {
    out.gamma = r * (r - 1) * std::min(std::pow(m_used, r - 2), std::pow(M_used, r - 2));
    std::vector<SymMat> terms{phi_Ar / K, (phi_Ar + (out.gamma / 2) * map_spread) / K, phiA_r};
    if (out.power_case == PowerCase::OutsideOperatorConvex) {
      terms.push_back(K * phi_Ar - (out.gamma / 2) * ctx.spread_of_image());
      terms.push_back(K * phi_Ar);
    } else {
      terms.push_back(phi_Ar);
    }
    out.chain = ascending_chain("power_corollary", std::move(terms), rel_tol);
  }
  out.chain.prerequisite =
      make_report("power_corollary.prerequisite", SymMat::zero(map_spread.dim()), map_spread, rel_tol);
  return out;
}

KantorovichReport improved_kantorovich(const SymMat& A, const PositiveUnitalMap& phi, std::optional<double> m,
                                       std::optional<double> M, double rel_tol) {
  const auto spectrum = eigendecompose(A);
  require_strictly_positive(spectrum, A, "improved_kantorovich");
  const double lo = spectrum.min_eigenvalue();
  const double hi = spectrum.max_eigenvalue();
  const double m_used = m.value_or(lo);
  const double M_used = M.value_or(hi);
  if (!(m_used < M_used)) throw DegenerateInterval("improved_kantorovich: need m < M");
  if (!(m_used > 0)) throw BadParameter("improved_kantorovich: need m > 0");
  const double enclosure_tol = 1e-10 * (1.0 + A.max_norm());
  if (lo < m_used - enclosure_tol || hi > M_used + enclosure_tol)
    throw SpectrumNotEnclosed("improved_kantorovich: Sp(A) is not inside [m, M]");

  KantorovichReport out;
  out.m = m_used;
  out.M = M_used;
  const SymMat phi_A = apply(phi, A);
  const auto phi_A_spectrum = eigendecompose(phi_A);
  require_strictly_positive(phi_A_spectrum, phi_A, "improved_kantorovich (Phi(A))");

  out.lhs = apply(phi, spectrum.map([](double x) { return 1.0 / x; }));
  const double kantorovich = (M_used + m_used) * (M_used + m_used) / (4 * M_used * m_used);
  out.classical_rhs = kantorovich * phi_A_spectrum.map([](double x) { return 1.0 / x; });
  const SymMat spread = (M_used + m_used) * phi_A - M_used * m_used - apply(phi, square(A));
  out.improvement = spread / (M_used * M_used * M_used);
  out.improved_rhs = out.classical_rhs - out.improvement;
  out.improved = make_report("kantorovich.improved", out.lhs, out.improved_rhs, rel_tol);
  out.refinement = make_report("kantorovich.refinement", out.improved_rhs, out.classical_rhs, rel_tol);
  return out;
}

}  // namespace opineq
