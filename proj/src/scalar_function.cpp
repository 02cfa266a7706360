#include "opineq/scalar_function.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace opineq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kGridPoints = 4097;
constexpr double kRefineWidth = 1e-12;

Domain positive_axis() { return {0.0, kInf}; }

D2Shape shape_from_sign(double third_derivative_coefficient) {
  if (third_derivative_coefficient > 0) return D2Shape::NondecreasingD2;
  if (third_derivative_coefficient < 0) return D2Shape::NonincreasingD2;
  return D2Shape::ConstantD2;
}

void expect_params(std::string_view name, std::span<const double> params, std::size_t n) {
  if (params.size() != n)
    throw BadParameter(std::string(name) + " expects " + std::to_string(n) + " parameter(s), got " +
                       std::to_string(params.size()));
  for (double p : params)
    if (!std::isfinite(p)) throw BadParameter(std::string(name) + ": non-finite parameter");
}

void expect_tsallis_parameter(std::string_view name, double p) {
  if (!(p >= -1.0 && p <= 1.0) || p == 0.0)
    throw BadParameter(std::string(name) + ": parameter must lie in [-1, 1] \\ {0}");
}

ScalarFunction make_power(double r) {
  ScalarFunction f;
  f.name = "power";
  f.params = {r};
  const bool nonneg_integer = r >= 0 && r == std::round(r);
  f.domain = nonneg_integer ? Domain{} : positive_axis();
  if (r == 0) {
    f.eval = [](double) { return 1.0; };
  } else if (r == 1) {
    f.eval = [](double t) { return t; };
  } else {
    f.eval = [r](double t) { return std::pow(t, r); };
  }
  const double c2 = r * (r - 1);
  if (c2 == 0) {
    f.deriv2 = [](double) { return 0.0; };
  } else {
    f.deriv2 = [r, c2](double t) { return c2 * std::pow(t, r - 2); };
  }
  // f''' = r(r-1)(r-2) t^{r-3}; its sign is fixed on (0, inf) and, for the
  // integer cases living on R, only when r - 3 is even or f''' is constant.
  const double c3 = c2 * (r - 2);
  if (!nonneg_integer || c3 == 0 || r == 3) {
    f.deriv2_shape = shape_from_sign(c3);
  } else {
    const auto k = static_cast<long long>(r);
    f.deriv2_shape = (k - 3) % 2 == 0 ? shape_from_sign(c3) : D2Shape::GeneralD2;
  }
  return f;
}

}  // namespace

const char* to_string(D2Shape shape) {
  switch (shape) {
    case D2Shape::NondecreasingD2: return "NondecreasingD2";
    case D2Shape::NonincreasingD2: return "NonincreasingD2";
    case D2Shape::ConstantD2: return "ConstantD2";
    case D2Shape::GeneralD2: return "GeneralD2";
  }
  return "?";
}

std::string ScalarFunction::label() const {
  std::ostringstream out;
  out << name;
  for (std::size_t i = 0; i < params.size(); ++i) {
    out << (i == 0 ? ':' : ',');
    out.precision(17);
    out << params[i];
  }
  return out.str();
}

ScalarFunction catalog_lookup(std::string_view name, std::span<const double> params) {
  if (name == "power") {
    expect_params(name, params, 1);
    return make_power(params[0]);
  }
  if (name == "inverse") {
    expect_params(name, params, 0);
    auto f = make_power(-1.0);
    f.name = "inverse";
    f.params.clear();
    f.eval = [](double t) { return 1.0 / t; };
    f.deriv2 = [](double t) { return 2.0 / (t * t * t); };
    return f;
  }
  if (name == "log") {
    expect_params(name, params, 0);
    ScalarFunction f;
    f.name = "log";
    f.eval = [](double t) { return std::log(t); };
    f.deriv2 = [](double t) { return -1.0 / (t * t); };
    f.domain = positive_axis();
    f.deriv2_shape = D2Shape::NondecreasingD2;
    return f;
  }
  if (name == "exp") {
    expect_params(name, params, 0);
    ScalarFunction f;
    f.name = "exp";
    f.eval = [](double t) { return std::exp(t); };
    f.deriv2 = [](double t) { return std::exp(t); };
    f.deriv2_shape = D2Shape::NondecreasingD2;
    return f;
  }
  if (name == "tsallis_f") {
    expect_params(name, params, 1);
    const double p = params[0];
    expect_tsallis_parameter(name, p);
    ScalarFunction f;
    f.name = "tsallis_f";
    f.params = {p};
    f.eval = [p](double t) { return (1.0 - std::pow(t, p)) / p; };
    f.deriv2 = [p](double t) { return (1.0 - p) * std::pow(t, p - 2); };
    f.domain = positive_axis();
    f.deriv2_shape = shape_from_sign((1.0 - p) * (p - 2));
    return f;
  }
  if (name == "tsallis_g") {
    expect_params(name, params, 1);
    const double p = params[0];
    expect_tsallis_parameter(name, p);
    ScalarFunction f;
    f.name = "tsallis_g";
    f.params = {p};
    f.eval = [p](double t) { return (t - std::pow(t, 1.0 - p)) / p; };
    f.deriv2 = [p](double t) { return (1.0 - p) * std::pow(t, -p - 1); };
    f.domain = positive_axis();
    f.deriv2_shape = shape_from_sign((1.0 - p) * (-p - 1));
    return f;
  }
  throw UnknownFunction("unknown function '" + std::string(name) + "'");
}

ScalarFunction parse_function(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  std::vector<double> params;
  if (colon != std::string_view::npos) {
    std::string_view rest = spec.substr(colon + 1);
    while (true) {
      const auto comma = rest.find(',');
      const std::string token(rest.substr(0, comma));
      std::size_t used = 0;
      double value = 0;
      try {
        value = std::stod(token, &used);
      } catch (const std::exception&) {
        throw BadParameter("cannot parse parameter '" + token + "'");
      }
      if (used != token.size()) throw BadParameter("cannot parse parameter '" + token + "'");
      params.push_back(value);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  return catalog_lookup(name, params);
}

std::vector<std::string> catalog_names() {
  return {"power", "inverse", "log", "exp", "tsallis_f", "tsallis_g"};
}

// ---------------------------------------------------------------------------

namespace {

void require_interval(const ScalarFunction& f, double m, double M, const char* who) {
  if (!(m < M)) throw DegenerateInterval(std::string(who) + ": requires m < M");
  if (!f.domain.contains(m)) throw DomainViolation(std::string(who) + ": m outside domain of " + f.label(), m);
  if (!f.domain.contains(M)) throw DomainViolation(std::string(who) + ": M outside domain of " + f.label(), M);
}

double golden_minimize(const std::function<double(double)>& g, double a, double b, double& best_t) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = g(c);
  double gd = g(d);
  while (b - a > kRefineWidth) {
    if (gc < gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  best_t = gc < gd ? c : d;
  return std::min(gc, gd);
}

/// Minimum of g over [m, M]: equispaced grid, then golden-section refinement
/// in the brackets around the three best grid points.
double grid_minimum(const std::function<double(double)>& g, double m, double M) {
  std::vector<double> t(kGridPoints);
  std::vector<double> v(kGridPoints);
  for (int i = 0; i < kGridPoints; ++i) {
    t[i] = i + 1 == kGridPoints ? M : m + (M - m) * double(i) / double(kGridPoints - 1);
    v[i] = g(t[i]);
  }
  std::vector<int> order(kGridPoints);
  for (int i = 0; i < kGridPoints; ++i) order[i] = i;
  std::partial_sort(order.begin(), order.begin() + 3, order.end(),
                    [&](int a, int b) { return v[a] < v[b] || (v[a] == v[b] && a < b); });
  double best = v[order[0]];
  for (int k = 0; k < 3; ++k) {
    const int i = order[k];
    const double lo = t[std::max(0, i - 1)];
    const double hi = t[std::min(kGridPoints - 1, i + 1)];
    double where = 0;
    best = std::min(best, golden_minimize(g, lo, hi, where));
  }
  return best;
}

double grid_maximum(const std::function<double(double)>& g, double m, double M) {
  return -grid_minimum([&](double t) { return -g(t); }, m, M);
}

void require_positive_on(const ScalarFunction& f, double m, double M, const char* who) {
  double lowest = kInf;
  double scale = 0;
  for (int i = 0; i < kGridPoints; ++i) {
    const double t = i + 1 == kGridPoints ? M : m + (M - m) * double(i) / double(kGridPoints - 1);
    const double v = f(t);
    lowest = std::min(lowest, v);
    scale = std::max(scale, std::abs(v));
  }
  if (!(lowest >= 1e-13 * scale) || lowest <= 0)
    throw NonPositiveFunction(std::string(who) + ": " + f.label() + " is not positive on [m, M]");
}

}  // namespace

IntervalBounds second_derivative_range(const ScalarFunction& f, double m, double M) {
  require_interval(f, m, M, "second_derivative_range");
  IntervalBounds out{m, M, 0, 0};
  switch (f.deriv2_shape) {
    case D2Shape::ConstantD2:
      out.alpha = out.beta = f.deriv2(m);
      break;
    case D2Shape::NondecreasingD2:
      out.alpha = f.deriv2(m);
      out.beta = f.deriv2(M);
      break;
    case D2Shape::NonincreasingD2:
      out.alpha = f.deriv2(M);
      out.beta = f.deriv2(m);
      break;
    case D2Shape::GeneralD2:
      out.alpha = grid_minimum(f.deriv2, m, M);
      out.beta = grid_maximum(f.deriv2, m, M);
      break;
  }
  if (out.alpha > out.beta) std::swap(out.alpha, out.beta);
  return out;
}

ChordLine chord_line(const ScalarFunction& f, double m, double M) {
  require_interval(f, m, M, "chord_line");
  return {m, M, f(m), f(M)};
}

double K_constant(const ScalarFunction& f, double m, double M) {
  const auto chord = chord_line(f, m, M);
  require_positive_on(f, m, M, "K_constant");
  const double interior = grid_maximum([&](double t) { return chord(t) / f(t); }, m, M);
  // L = f at both endpoints, so the maximum is at least 1 exactly.
  return std::max({interior, chord(m) / f(m), chord(M) / f(M)});
}

double k_constant(const ScalarFunction& f, double m, double M) {
  const auto chord = chord_line(f, m, M);
  require_positive_on(f, m, M, "k_constant");
  const double interior = grid_minimum([&](double t) { return chord(t) / f(t); }, m, M);
  return std::min({interior, chord(m) / f(m), chord(M) / f(M)});
}

double kantorovich_power_constant(double m, double M, double r) {
  if (!(m > 0) || !(m < M)) throw BadParameter("kantorovich_power_constant: requires 0 < m < M");
  if (!std::isfinite(r)) throw BadParameter("kantorovich_power_constant: non-finite r");
  if (std::abs(r) < 1e-12 || std::abs(r - 1) < 1e-12) return 1.0;
  const double mr = std::pow(m, r);
  const double Mr = std::pow(M, r);
  const double cross = m * Mr - M * mr;
  const double prefactor = cross / ((r - 1) * (M - m));
  const double base = (r - 1) / r * (Mr - mr) / cross;
  return prefactor * std::pow(base, r);
}

SymMat apply_scalar_function(const SpectralDecomposition<double>& d, const ScalarFunction& f) {
  for (Index i = 0; i < d.dim(); ++i) {
    if (!f.domain.contains(d.eigenvalues(i)))
      throw DomainViolation("eigenvalue outside the domain of " + f.label(), d.eigenvalues(i));
  }
  return d.map([&](double x) { return f(x); });
}

SymMat apply_scalar_function(const SymMat& a, const ScalarFunction& f) {
  return apply_scalar_function(eigendecompose(a), f);
}

}  // namespace opineq
