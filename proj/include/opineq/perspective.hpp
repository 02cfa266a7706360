#pragma once

// Non-commutative perspectives and the entropies built from them: chord
// bounds for P_f(A|B) under a sandwich mA <= B <= MA, Tsallis and relative
// operator entropies, and trace-level bounds on quantum entropies.

#include <array>
#include <optional>

#include "opineq/cdj_bounds.hpp"

namespace opineq {

/// Strictly positive A and positive B with mA <= B <= MA.
class OperatorPair {
 public:
  /// m, M default to the spectral hull of A^{-1/2} B A^{-1/2}.
  static OperatorPair create(const SymMat& A, const SymMat& B, std::optional<double> m = std::nullopt,
                             std::optional<double> M = std::nullopt);

  const SymMat& A() const { return A_; }
  const SymMat& B() const { return B_; }
  double m() const { return m_; }
  double M() const { return M_; }
  const SymMat& sqrt_A() const { return sqrt_A_; }
  const SymMat& inv_sqrt_A() const { return inv_sqrt_A_; }
  /// A^{-1/2} B A^{-1/2}
  const SymMat& inner() const { return inner_; }
  const SpectralDecomposition<double>& inner_spectrum() const { return inner_spectrum_; }

 private:
  OperatorPair() = default;
  SymMat A_, B_, sqrt_A_, inv_sqrt_A_, inner_;
  SpectralDecomposition<double> inner_spectrum_;
  double m_ = 0, M_ = 0;
};

/// A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}
SymMat perspective(const OperatorPair& pair, const ScalarFunction& f);
/// ((B - mA) f(M) + (MA - B) f(m)) / (M - m)
SymMat perspective_chord(const OperatorPair& pair, const ScalarFunction& f);
/// A #_2 B + Mm A - (M+m) B; never positive on the sandwich.
SymMat sandwich_spread(const OperatorPair& pair);

std::array<InequalityReport, 2> proposition31_bounds(const OperatorPair& pair, const ScalarFunction& f,
                                                     double rel_tol = kDefaultRelativeTolerance);

/// (A #_p B - A) / p, p in [-1, 1] \ {0}
SymMat tsallis_relative_operator_entropy(const OperatorPair& pair, double p);
/// A^{1/2} log(A^{-1/2} B A^{-1/2}) A^{1/2}
SymMat relative_operator_entropy(const OperatorPair& pair);

std::array<InequalityReport, 2> tsallis_entropy_bounds(const OperatorPair& pair, double p,
                                                       double rel_tol = kDefaultRelativeTolerance);
std::array<InequalityReport, 2> relative_entropy_bounds(const OperatorPair& pair,
                                                        double rel_tol = kDefaultRelativeTolerance);

/// Bounds on P_f(Phi(A)|Phi(B)) - Phi(P_f(A|B)).
std::array<InequalityReport, 2> proposition32_bounds(const OperatorPair& pair, const PositiveUnitalMap& phi,
                                                     const ScalarFunction& f,
                                                     double rel_tol = kDefaultRelativeTolerance);

// ---------------------------------------------------------------------------
// Density operators

class DensityOperator {
 public:
  /// Unit trace (1e-12) and strictly positive. m, M default to the spectral
  /// hull and otherwise must satisfy 0 < m <= lambda_min, lambda_max <= M <= 1.
  static DensityOperator create(const SymMat& rho, std::optional<double> m = std::nullopt,
                                std::optional<double> M = std::nullopt);

  const SymMat& rho() const { return rho_; }
  const SpectralDecomposition<double>& spectrum() const { return spectrum_; }
  double m() const { return m_; }
  double M() const { return M_; }
  Index dim() const { return rho_.dim(); }

 private:
  DensityOperator() = default;
  SymMat rho_;
  SpectralDecomposition<double> spectrum_;
  double m_ = 0, M_ = 1;
};

double von_neumann_entropy(const DensityOperator& rho);
double quantum_tsallis_entropy(const DensityOperator& rho, double p);
/// Tr[rho - rho^{1-p} sigma^p] / p
double tsallis_relative_quantum_entropy(const DensityOperator& rho, const DensityOperator& sigma, double p);

/// A scalar claim lhs <= rhs.
struct ScalarCheck {
  std::string label;
  double lhs = 0;
  double rhs = 0;
  double slack = 0;  // rhs - lhs
  double tolerance = 0;

  bool holds() const { return slack >= -tolerance; }
  friend bool operator==(const ScalarCheck&, const ScalarCheck&) = default;
};

ScalarCheck make_scalar_check(std::string label, double lhs, double rhs, double tolerance = 1e-10);

struct TraceBoundsReport {
  double p = 0;
  double m = 0;
  double M = 0;
  double trace_Tp = 0;       // Tr[T_p(rho|sigma)]
  double trace_sq = 0;       // Tr[rho (rho^{-1/2} sigma rho^{-1/2})^2]
  ScalarCheck lower;         // lower bound <= Tr[T_p]
  ScalarCheck upper;         // Tr[T_p] <= upper bound
  /// Printed closed form against the generic two-map bound evaluated with Tr.
  double formula_discrepancy = 0;
  std::optional<double> D_p;
  std::optional<ScalarCheck> cited;      // D_p <= -Tr[T_p]   (0 < p <= 1)
  std::optional<ScalarCheck> dp_bound;   // D_p <= closed-form bound

  bool holds() const;
};

/// m, M default to the spectral hull of rho^{-1/2} sigma rho^{-1/2}.
TraceBoundsReport remark32_trace_bounds(const DensityOperator& rho, const DensityOperator& sigma, double p,
                                        std::optional<double> m = std::nullopt,
                                        std::optional<double> M = std::nullopt);

struct EntropyBoundReport {
  double entropy = 0;
  double bound = 0;
  ScalarCheck entropy_vs_bound;   // bound <= entropy
  ScalarCheck bound_nonnegative;  // 0 <= bound

  bool holds() const { return entropy_vs_bound.holds() && bound_nonnegative.holds(); }
};

/// S_p(rho) >= (1-p)(M^{p+1} - m^{p+1})(1-M)(1-m) / (2 m^{p+1} M^{p+1}) >= 0
EntropyBoundReport corollary32_lower_bound(const DensityOperator& rho, double p);
double corollary32_bound_value(double m, double M, double p);

/// S(rho) >= (M-m)(1-M)(1-m) / (2mM) >= 0
EntropyBoundReport von_neumann_lower_bound(const DensityOperator& rho);
double von_neumann_bound_value(double m, double M);

}  // namespace opineq
