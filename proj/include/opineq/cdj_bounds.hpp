#pragma once

// Choi-Davis-Jensen type bounds for functions with a bounded second
// derivative: the four chord bounds, the two-sided Jensen gap, the K/k
// sandwiches, the strictly convex refinement chain, the power-function
// chains, and the sharpened Kantorovich inequality.
//
// Every claim is stored oriented as lhs <= rhs in the Loewner order.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "opineq/positive_map.hpp"
#include "opineq/scalar_function.hpp"
#include "opineq/spectral.hpp"

namespace opineq {

inline constexpr double kDefaultRelativeTolerance = 1e-8;

struct InequalityReport {
  std::string label;
  SymMat lhs;
  SymMat rhs;
  LoewnerVerdict verdict;
  double tightness = 0;  // min eig(rhs - lhs), signed

  bool holds() const { return verdict.less_or_equal(); }
};

/// Checks lhs <= rhs with tolerance rel_tol * (1 + max(|lhs|, |rhs|)).
InequalityReport make_report(std::string label, SymMat lhs, SymMat rhs,
                             double rel_tol = kDefaultRelativeTolerance);

struct ChainReport {
  std::string label;
  std::vector<SymMat> terms;
  std::vector<InequalityReport> links;
  std::optional<InequalityReport> prerequisite;

  bool holds() const;
  /// Smallest tightness over links and prerequisite.
  double worst_tightness() const;
};

struct CdjContext {
  SymMat A;
  PositiveUnitalMap phi = PositiveUnitalMap::identity(1);
  ScalarFunction f;
  IntervalBounds bounds;
  ChordLine chord;
  double rel_tol = kDefaultRelativeTolerance;

  SymMat phi_A;        // Phi(A)
  SymMat phi_A2;       // Phi(A^2)
  SymMat phi_A_sq;     // Phi(A)^2
  SymMat phi_fA;       // Phi(f(A))
  SymMat f_phiA;       // f(Phi(A))

  double m() const { return bounds.m; }
  double M() const { return bounds.M; }
  /// (M+m) Phi(A) - Mm - Phi(A^2)
  SymMat spread_of_map() const;
  /// (M+m) Phi(A) - Mm - Phi(A)^2
  SymMat spread_of_image() const;
};

/// m, M default to the spectral hull of A; explicit values must enclose it.
CdjContext build_context(const SymMat& A, const PositiveUnitalMap& phi, const ScalarFunction& f,
                         std::optional<double> m = std::nullopt, std::optional<double> M = std::nullopt,
                         double rel_tol = kDefaultRelativeTolerance);

/// f(Phi(A)) <= Phi(f(A)); fails for non-operator-convex f in general.
InequalityReport cdj_plain(const CdjContext& ctx);

std::array<InequalityReport, 4> lemma_chord_bounds(const CdjContext& ctx);
InequalityReport theorem1_upper(const CdjContext& ctx);
InequalityReport theorem1_converse(const CdjContext& ctx);
/// (alpha Phi(A)^2 - beta Phi(A^2)) / 2. Its sign is not determined in
/// general; callers observe its spectrum without asserting anything.
SymMat theorem1_middle_term(const CdjContext& ctx);

/// Lower and upper halves of the K(m, M, f) sandwich around f(Phi(A)).
std::array<InequalityReport, 2> theorem2_sandwich(const CdjContext& ctx);
/// The same with k(m, M, f) and beta.
std::array<InequalityReport, 2> theorem2_k_version(const CdjContext& ctx);

/// Five-term chain for strictly convex f, plus the nonnegativity of
/// (M+m) Phi(A) - Mm - Phi(A^2).
ChainReport corollary1_chain(const CdjContext& ctx);

enum class PowerCase { OutsideOperatorConvex, OperatorConvex, OperatorConcave };
const char* to_string(PowerCase c);
PowerCase classify_power(double r);

struct PowerChainReport {
  PowerCase power_case = PowerCase::OperatorConvex;
  double r = 1;
  double K = 1;       // K(m, M, r)
  double gamma = 0;   // coefficient of the correction term
  ChainReport chain;

  bool holds() const { return chain.holds(); }
};

PowerChainReport power_corollary(const SymMat& A, const PositiveUnitalMap& phi, double r,
                                 std::optional<double> m = std::nullopt, std::optional<double> M = std::nullopt,
                                 double rel_tol = kDefaultRelativeTolerance);

struct KantorovichReport {
  double m = 0;
  double M = 0;
  SymMat lhs;            // Phi(A^{-1})
  SymMat classical_rhs;  // (M+m)^2/(4Mm) Phi(A)^{-1}
  SymMat improvement;    // ((M+m)Phi(A) - Mm - Phi(A^2)) / M^3
  SymMat improved_rhs;   // classical_rhs - improvement
  InequalityReport improved;    // lhs <= improved_rhs
  InequalityReport refinement;  // improved_rhs <= classical_rhs

  bool holds() const { return improved.holds() && refinement.holds(); }
};

KantorovichReport improved_kantorovich(const SymMat& A, const PositiveUnitalMap& phi,
                                       std::optional<double> m = std::nullopt,
                                       std::optional<double> M = std::nullopt,
                                       double rel_tol = kDefaultRelativeTolerance);

}  // namespace opineq
