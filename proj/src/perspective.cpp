#include "opineq/perspective.hpp"

#include <algorithm>
#include <cmath>

namespace opineq {

namespace {

void require_tsallis_parameter(double p, const char* who) {
  if (!(p >= -1.0 && p <= 1.0) || p == 0.0)
    throw BadParameter(std::string(who) + ": p must lie in [-1, 1] \\ {0}");
}

void require_proper_sandwich(const OperatorPair& pair, const char* who) {
  if (!(pair.m() < pair.M())) throw DegenerateInterval(std::string(who) + ": needs m < M (B is a multiple of A)");
}

/// Tr[XY] for symmetric X, Y.
double trace_product(const SymMat& x, const SymMat& y) { return x.dense().cwiseProduct(y.dense()).sum(); }

}  // namespace

OperatorPair OperatorPair::create(const SymMat& A, const SymMat& B, std::optional<double> m,
                                  std::optional<double> M) {
  if (A.dim() != B.dim()) throw ShapeError("OperatorPair: dimension mismatch");
  OperatorPair pair;
  auto [root, inv_root] = matrix_sqrt_inv_sqrt(A);
  pair.A_ = A;
  pair.B_ = B;
  pair.sqrt_A_ = std::move(root);
  pair.inv_sqrt_A_ = std::move(inv_root);
  pair.inner_ = sandwich(pair.inv_sqrt_A_, B);
  pair.inner_spectrum_ = eigendecompose(pair.inner_);

  const double lo = pair.inner_spectrum_.min_eigenvalue();
  const double hi = pair.inner_spectrum_.max_eigenvalue();
  const double tol = 1e-10 * (1.0 + pair.inner_.max_norm());
  if (lo < -tol) throw NotPositiveDefinite("OperatorPair: B is not positive");

  pair.m_ = m.value_or(std::max(lo, 0.0));
  pair.M_ = M.value_or(hi);
  if (pair.m_ > pair.M_) throw BadParameter("OperatorPair: m > M");
  if (lo < pair.m_ - tol || hi > pair.M_ + tol)
    throw SandwichViolated("OperatorPair: mA <= B <= MA fails (inner spectrum [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "])");
  return pair;
}

SymMat perspective(const OperatorPair& pair, const ScalarFunction& f) {
  return sandwich(pair.sqrt_A(), apply_scalar_function(pair.inner_spectrum(), f));
}

SymMat perspective_chord(const OperatorPair& pair, const ScalarFunction& f) {
  require_proper_sandwich(pair, "perspective_chord");
  const auto chord = chord_line(f, pair.m(), pair.M());
  const double m = pair.m();
  const double M = pair.M();
  return ((pair.B() - m * pair.A()) * chord.f_M + (M * pair.A() - pair.B()) * chord.f_m) / (M - m);
}

SymMat sandwich_spread(const OperatorPair& pair) {
  const double m = pair.m();
  const double M = pair.M();
  return natural_power(pair.A(), pair.B(), 2.0) + (M * m) * pair.A() - (M + m) * pair.B();
}

std::array<InequalityReport, 2> proposition31_bounds(const OperatorPair& pair, const ScalarFunction& f,
                                                     double rel_tol) {
  require_proper_sandwich(pair, "proposition31_bounds");
  const auto range = second_derivative_range(f, pair.m(), pair.M());
  const SymMat gap = perspective(pair, f) - perspective_chord(pair, f);
  const SymMat spread = sandwich_spread(pair);
  return {
      make_report("prop31.lower", (range.beta / 2) * spread, gap, rel_tol),
      make_report("prop31.upper", gap, (range.alpha / 2) * spread, rel_tol),
  };
}

SymMat tsallis_relative_operator_entropy(const OperatorPair& pair, double p) {
  require_tsallis_parameter(p, "tsallis_relative_operator_entropy");
  return (natural_power(pair.A(), pair.B(), p) - pair.A()) / p;
}

SymMat relative_operator_entropy(const OperatorPair& pair) { return perspective(pair, catalog_lookup("log")); }

std::array<InequalityReport, 2> tsallis_entropy_bounds(const OperatorPair& pair, double p, double rel_tol) {
  require_tsallis_parameter(p, "tsallis_entropy_bounds");
  require_proper_sandwich(pair, "tsallis_entropy_bounds");
  const double m = pair.m();
  const double M = pair.M();
  if (!(m > 0)) throw BadParameter("tsallis_entropy_bounds: needs m > 0");

  const double a_coef = M - m + M * m * (std::pow(M, p - 1) - std::pow(m, p - 1));
  const double b_coef = std::pow(M, p) - std::pow(m, p);
  const SymMat chord = (-1.0 / (p * (M - m))) * (a_coef * pair.A() - b_coef * pair.B());
  const SymMat spread = sandwich_spread(pair);
  const SymMat tp = tsallis_relative_operator_entropy(pair, p);
  return {
      make_report("tsallis_bounds.lower", chord - ((1 - p) / (2 * std::pow(M, 2 - p))) * spread, tp, rel_tol),
      make_report("tsallis_bounds.upper", tp, chord - ((1 - p) / (2 * std::pow(m, 2 - p))) * spread, rel_tol),
  };
}

std::array<InequalityReport, 2> relative_entropy_bounds(const OperatorPair& pair, double rel_tol) {
  require_proper_sandwich(pair, "relative_entropy_bounds");
  const double m = pair.m();
  const double M = pair.M();
  if (!(m > 0)) throw BadParameter("relative_entropy_bounds: needs m > 0");

  const SymMat chord =
      ((pair.B() - m * pair.A()) * std::log(M) + (M * pair.A() - pair.B()) * std::log(m)) / (M - m);
  const SymMat spread = sandwich_spread(pair);
  const SymMat s = relative_operator_entropy(pair);
  return {
      make_report("relative_entropy_bounds.lower", chord - spread / (2 * M * M), s, rel_tol),
      make_report("relative_entropy_bounds.upper", s, chord - spread / (2 * m * m), rel_tol),
  };
}

std::array<InequalityReport, 2> proposition32_bounds(const OperatorPair& pair, const PositiveUnitalMap& phi,
                                                     const ScalarFunction& f, double rel_tol) {
  require_proper_sandwich(pair, "proposition32_bounds");
  const double m = pair.m();
  const double M = pair.M();
  const auto range = second_derivative_range(f, m, M);
  const double a = range.alpha;
  const double b = range.beta;

  const SymMat phi_A = apply(phi, pair.A());
  const SymMat phi_B = apply(phi, pair.B());
  const auto image = OperatorPair::create(phi_A, phi_B, m, M);

  const SymMat middle = perspective(image, f) - apply(phi, perspective(pair, f));
  const SymMat common = (M + m) * phi_B - (M * m) * phi_A;
  const SymMat mean_of_images = natural_power(phi_A, phi_B, 2.0);
  const SymMat image_of_mean = apply(phi, natural_power(pair.A(), pair.B(), 2.0));

  const SymMat lower = ((a - b) / 2) * common + 0.5 * (b * mean_of_images - a * image_of_mean);
  const SymMat upper = ((b - a) / 2) * common + 0.5 * (a * mean_of_images - b * image_of_mean);
  return {
      make_report("prop32.lower", lower, middle, rel_tol),
      make_report("prop32.upper", middle, upper, rel_tol),
  };
}

// ---------------------------------------------------------------------------

DensityOperator DensityOperator::create(const SymMat& rho, std::optional<double> m, std::optional<double> M) {
  if (!(std::abs(rho.trace() - 1.0) <= 1e-12))
    throw InvalidMatrix("density operator must have unit trace (trace " + std::to_string(rho.trace()) + ")");
  DensityOperator d;
  d.rho_ = rho;
  d.spectrum_ = eigendecompose(rho);
  const double lo = d.spectrum_.min_eigenvalue();
  const double hi = std::min(d.spectrum_.max_eigenvalue(), 1.0);
  if (!(lo > 0)) throw InvalidMatrix("density operator must be strictly positive");

  d.m_ = m.value_or(lo);
  d.M_ = M.value_or(hi);
  const double tol = 1e-12;
  if (!(d.m_ > 0) || d.m_ > lo + tol || d.M_ < hi - tol || d.M_ > 1.0 || d.m_ > d.M_)
    throw SpectrumNotEnclosed("density operator: need 0 < m <= Sp(rho) <= M <= 1");
  return d;
}

double von_neumann_entropy(const DensityOperator& rho) {
  double s = 0;
  for (Index i = 0; i < rho.dim(); ++i) {
    const double x = rho.spectrum().eigenvalues(i);
    s -= x * std::log(x);
  }
  return s;
}

double quantum_tsallis_entropy(const DensityOperator& rho, double p) {
  require_tsallis_parameter(p, "quantum_tsallis_entropy");
  double s = 0;
  for (Index i = 0; i < rho.dim(); ++i) {
    const double x = rho.spectrum().eigenvalues(i);
    s += std::pow(x, 1 - p) - x;
  }
  return s / p;
}

double tsallis_relative_quantum_entropy(const DensityOperator& rho, const DensityOperator& sigma, double p) {
  require_tsallis_parameter(p, "tsallis_relative_quantum_entropy");
  if (rho.dim() != sigma.dim()) throw ShapeError("tsallis_relative_quantum_entropy: dimension mismatch");
  const SymMat rho_power = rho.spectrum().map([p](double x) { return std::pow(x, 1 - p); });
  const SymMat sigma_power = sigma.spectrum().map([p](double x) { return std::pow(x, p); });
  return (rho.rho().trace() - trace_product(rho_power, sigma_power)) / p;
}

ScalarCheck make_scalar_check(std::string label, double lhs, double rhs, double tolerance) {
  ScalarCheck c;
  c.label = std::move(label);
  c.lhs = lhs;
  c.rhs = rhs;
  c.slack = rhs - lhs;
  c.tolerance = tolerance * (1.0 + std::max(std::abs(lhs), std::abs(rhs)));
  return c;
}

bool TraceBoundsReport::holds() const {
  const double scale = 1.0 + std::max({std::abs(lower.lhs), std::abs(upper.rhs), std::abs(trace_Tp)});
  return lower.holds() && upper.holds() && (!cited || cited->holds()) && (!dp_bound || dp_bound->holds()) &&
         formula_discrepancy <= 1e-9 * scale;
}

TraceBoundsReport remark32_trace_bounds(const DensityOperator& rho, const DensityOperator& sigma, double p,
                                        std::optional<double> m, std::optional<double> M) {
  require_tsallis_parameter(p, "remark32_trace_bounds");
  if (rho.dim() != sigma.dim()) throw ShapeError("remark32_trace_bounds: dimension mismatch");
  const auto pair = OperatorPair::create(rho.rho(), sigma.rho(), m, M);
  require_proper_sandwich(pair, "remark32_trace_bounds");

  TraceBoundsReport out;
  out.p = p;
  out.m = pair.m();
  out.M = pair.M();
  const double mm = out.m;
  const double MM = out.M;
  if (!(mm > 0)) throw BadParameter("remark32_trace_bounds: needs m > 0");

  out.trace_Tp = tsallis_relative_operator_entropy(pair, p).trace();
  out.trace_sq = natural_power(rho.rho(), sigma.rho(), 2.0).trace();

  const double c = (1 - p) / 2;
  const double Mp = std::pow(MM, p - 2);
  const double mp = std::pow(mm, p - 2);
  const double spread = MM + mm - MM * mm;
  const double lower = c * (Mp - mp) * spread + c * (mp - Mp * out.trace_sq);
  const double upper = c * (mp - Mp) * spread + c * (Mp - mp * out.trace_sq);
  out.lower = make_scalar_check("remark32.lower", lower, out.trace_Tp);
  out.upper = make_scalar_check("remark32.upper", out.trace_Tp, upper);

  // Same bound from the generic two-map inequality with Phi = Tr, using the
  // measured traces and the extracted f'' range rather than the closed form.
  const auto f = catalog_lookup("tsallis_f", std::array{p});
  const auto range = second_derivative_range(f, mm, MM);
  const double tr_a = rho.rho().trace();
  const double tr_b = sigma.rho().trace();
  const double image_perspective = tr_a * f(tr_b / tr_a);
  const double commons = (MM + mm) * tr_b - MM * mm * tr_a;
  const double mean_of_images = tr_b * tr_b / tr_a;
  const double generic_lower = (range.alpha - range.beta) / 2 * commons +
                               0.5 * (range.beta * mean_of_images - range.alpha * out.trace_sq) - image_perspective;
  const double generic_upper = (range.beta - range.alpha) / 2 * commons +
                               0.5 * (range.alpha * mean_of_images - range.beta * out.trace_sq) - image_perspective;
  out.formula_discrepancy = std::max(std::abs(generic_lower - lower), std::abs(generic_upper - upper));

  if (p > 0) {
    out.D_p = tsallis_relative_quantum_entropy(rho, sigma, p);
    out.cited = make_scalar_check("remark32.dp_cited", *out.D_p, -out.trace_Tp);
    const double dp_bound = c * (mp - Mp) * spread + c * (Mp * out.trace_sq - mp);
    out.dp_bound = make_scalar_check("remark32.dp_bound", *out.D_p, dp_bound);
  }
  return out;
}

double corollary32_bound_value(double m, double M, double p) {
  return (1 - p) * (std::pow(M, p + 1) - std::pow(m, p + 1)) * (1 - M) * (1 - m) /
         (2 * std::pow(m, p + 1) * std::pow(M, p + 1));
}

double von_neumann_bound_value(double m, double M) { return (M - m) * (1 - M) * (1 - m) / (2 * m * M); }

EntropyBoundReport corollary32_lower_bound(const DensityOperator& rho, double p) {
  require_tsallis_parameter(p, "corollary32_lower_bound");
  EntropyBoundReport out;
  out.entropy = quantum_tsallis_entropy(rho, p);
  out.bound = corollary32_bound_value(rho.m(), rho.M(), p);
  out.entropy_vs_bound = make_scalar_check("corollary32.entropy", out.bound, out.entropy);
  out.bound_nonnegative = make_scalar_check("corollary32.nonnegative", 0.0, out.bound, 1e-12);
  return out;
}

EntropyBoundReport von_neumann_lower_bound(const DensityOperator& rho) {
  EntropyBoundReport out;
  out.entropy = von_neumann_entropy(rho);
  out.bound = von_neumann_bound_value(rho.m(), rho.M());
  out.entropy_vs_bound = make_scalar_check("von_neumann.entropy", out.bound, out.entropy);
  out.bound_nonnegative = make_scalar_check("von_neumann.nonnegative", 0.0, out.bound, 1e-12);
  return out;
}

}  // namespace opineq
