#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "opineq/spectral.hpp"

namespace opineq {

/// Monotonicity of f'' over the whole domain, when known in closed form.
enum class D2Shape { NondecreasingD2, NonincreasingD2, ConstantD2, GeneralD2 };

const char* to_string(D2Shape shape);

/// Open interval (lo, hi).
struct Domain {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double t) const { return t > lo && t < hi; }
};

struct ScalarFunction {
  std::string name;
  std::vector<double> params;
  std::function<double(double)> eval;
  std::function<double(double)> deriv2;
  Domain domain;
  D2Shape deriv2_shape = D2Shape::GeneralD2;

  double operator()(double t) const { return eval(t); }

  /// "name" or "name:p1,p2" - the form accepted by parse_function.
  std::string label() const;
};

/// Catalog entries:
///   power [r]       t^r  (domain R for integer r >= 0, else (0, inf))
///   inverse         1/t
///   log, exp
///   tsallis_f [p]   (1 - t^p) / p,     p in [-1, 1] \ {0}
///   tsallis_g [p]   (t - t^{1-p}) / p, p in [-1, 1] \ {0}
ScalarFunction catalog_lookup(std::string_view name, std::span<const double> params = {});

/// Parses "name" or "name:p1,p2,...".
ScalarFunction parse_function(std::string_view spec);

std::vector<std::string> catalog_names();

struct IntervalBounds {
  double m = 0;
  double M = 1;
  double alpha = 0;  // min f'' on [m, M]
  double beta = 0;   // max f'' on [m, M]
};

/// Affine interpolant of f through (m, f(m)) and (M, f(M)).
struct ChordLine {
  double m = 0;
  double M = 1;
  double f_m = 0;
  double f_M = 0;

  double operator()(double t) const {
    if (t == m) return f_m;
    if (t == M) return f_M;
    return ((M - t) * f_m + (t - m) * f_M) / (M - m);
  }

  /// L(X) = ((M - X) f(m) + (X - m) f(M)) / (M - m)
  SymMat operator()(const SymMat& x) const {
    return ((M - x) * f_m + (x - m) * f_M) / (M - m);
  }
};

/// alpha > 0 beyond the resolution of the numerical minimization.
inline bool strictly_convex(const IntervalBounds& b) { return b.alpha > 1e-12 * (1 + std::abs(b.beta)); }

IntervalBounds second_derivative_range(const ScalarFunction& f, double m, double M);
ChordLine chord_line(const ScalarFunction& f, double m, double M);

/// max over [m, M] of L(t) / f(t); requires f > 0 there.
double K_constant(const ScalarFunction& f, double m, double M);
/// min over [m, M] of L(t) / f(t); requires f > 0 there.
double k_constant(const ScalarFunction& f, double m, double M);

/// Closed-form generalized Kantorovich constant K(m, M, r); 1 at r = 0, 1.
double kantorovich_power_constant(double m, double M, double r);

/// f(A) through the spectral decomposition; every eigenvalue must lie in the
/// domain of f.
SymMat apply_scalar_function(const SymMat& a, const ScalarFunction& f);
SymMat apply_scalar_function(const SpectralDecomposition<double>& d, const ScalarFunction& f);

}  // namespace opineq
