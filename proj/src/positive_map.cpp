#include "opineq/positive_map.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "opineq/random.hpp"

namespace opineq {

namespace {

constexpr double kUnitalTol = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

PositiveUnitalMap PositiveUnitalMap::corner(Index in_dim, Index out_dim) {
  if (out_dim < 1 || out_dim > in_dim) throw ShapeError("corner: need 1 <= out_dim <= in_dim");
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(in_dim, out_dim);
  v.topRows(out_dim).setIdentity();
  return PositiveUnitalMap(Compression{std::move(v)});
}

PositiveUnitalMap PositiveUnitalMap::identity(Index dim) { return corner(dim, dim); }

PositiveUnitalMap PositiveUnitalMap::compression(Eigen::MatrixXd v) {
  if (v.cols() < 1 || v.cols() > v.rows()) throw ShapeError("compression: V must be in_dim x out_dim, out <= in");
  const double err = (v.transpose() * v - Eigen::MatrixXd::Identity(v.cols(), v.cols())).cwiseAbs().maxCoeff();
  if (!(err <= kUnitalTol)) throw BadParameter("compression: V^T V != I");
  return PositiveUnitalMap(Compression{std::move(v)});
}

PositiveUnitalMap PositiveUnitalMap::compression_unchecked(Eigen::MatrixXd v) {
  if (v.cols() < 1) throw ShapeError("compression: empty V");
  return PositiveUnitalMap(Compression{std::move(v)});
}

PositiveUnitalMap PositiveUnitalMap::vector_state(Eigen::VectorXd x) {
  if (x.size() < 1) throw ShapeError("vector_state: empty vector");
  if (!x.allFinite() || !(std::abs(x.norm() - 1.0) <= kUnitalTol))
    throw BadParameter("vector_state: x must be a unit vector");
  return PositiveUnitalMap(VectorState{std::move(x)});
}

PositiveUnitalMap PositiveUnitalMap::normalized_trace(Index dim) {
  if (dim < 1) throw ShapeError("normalized_trace: dim must be >= 1");
  return PositiveUnitalMap(NormalizedTrace{dim});
}

PositiveUnitalMap PositiveUnitalMap::pinching(Index dim, std::vector<std::vector<Index>> blocks) {
  std::vector<int> seen(static_cast<std::size_t>(std::max<Index>(dim, 0)), 0);
  for (const auto& block : blocks) {
    if (block.empty()) throw BadParameter("pinching: empty block");
    for (Index i : block) {
      if (i < 0 || i >= dim) throw ShapeError("pinching: index out of range");
      ++seen[std::size_t(i)];
    }
  }
  if (dim < 1 || std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; }))
    throw BadParameter("pinching: blocks must partition 0..dim-1");
  return PositiveUnitalMap(Pinching{dim, std::move(blocks)});
}

PositiveUnitalMap PositiveUnitalMap::mixture(std::vector<double> weights, std::vector<Eigen::MatrixXd> unitaries) {
  if (weights.empty() || weights.size() != unitaries.size())
    throw BadParameter("mixture: need one weight per orthogonal matrix");
  const Index n = unitaries.front().rows();
  double total = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0)) throw BadParameter("mixture: weights must be positive");
    total += weights[i];
    const auto& u = unitaries[i];
    if (u.rows() != n || u.cols() != n) throw ShapeError("mixture: orthogonal matrices must share one size");
    const double err = (u.transpose() * u - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!(err <= kUnitalTol)) throw BadParameter("mixture: matrix is not orthogonal");
  }
  if (!(std::abs(total - 1.0) <= kUnitalTol)) throw BadParameter("mixture: weights must sum to 1");
  return PositiveUnitalMap(CongruenceMixture{std::move(weights), std::move(unitaries)});
}

Index PositiveUnitalMap::in_dim() const {
  return std::visit(overloaded{
                        [](const Compression& c) { return Index(c.V.rows()); },
                        [](const VectorState& v) { return Index(v.x.size()); },
                        [](const NormalizedTrace& t) { return t.dim; },
                        [](const Pinching& p) { return p.dim; },
                        [](const CongruenceMixture& m) { return Index(m.unitaries.front().rows()); },
                    },
                    variant_);
}

Index PositiveUnitalMap::out_dim() const {
  return std::visit(overloaded{
                        [](const Compression& c) { return Index(c.V.cols()); },
                        [](const VectorState&) { return Index(1); },
                        [](const NormalizedTrace&) { return Index(1); },
                        [](const Pinching& p) { return p.dim; },
                        [](const CongruenceMixture& m) { return Index(m.unitaries.front().rows()); },
                    },
                    variant_);
}

std::string PositiveUnitalMap::tag() const {
  return std::visit(overloaded{
                        [](const Compression& c) -> std::string {
                          const bool is_corner =
                              c.V.topRows(c.V.cols()).isIdentity(0.0) &&
                              (c.V.rows() == c.V.cols() || c.V.bottomRows(c.V.rows() - c.V.cols()).isZero(0.0));
                          return is_corner ? "corner" : "compression";
                        },
                        [](const VectorState&) -> std::string { return "vecstate"; },
                        [](const NormalizedTrace&) -> std::string { return "trace"; },
                        [](const Pinching&) -> std::string { return "pinching"; },
                        [](const CongruenceMixture&) -> std::string { return "mixture"; },
                    },
                    variant_);
}

SymMat apply(const PositiveUnitalMap& phi, const SymMat& a) {
  if (a.dim() != phi.in_dim())
    throw ShapeError("apply: map expects dim " + std::to_string(phi.in_dim()) + ", got " + std::to_string(a.dim()));
  return std::visit(overloaded{
                        [&](const Compression& c) { return congruence(c.V, a); },
                        [&](const VectorState& v) { return SymMat::scalar(v.x.dot(a.dense() * v.x)); },
                        [&](const NormalizedTrace& t) { return SymMat::scalar(a.trace() / double(t.dim)); },
                        [&](const Pinching& p) {
                          Eigen::MatrixXd out = Eigen::MatrixXd::Zero(p.dim, p.dim);
                          for (const auto& block : p.blocks)
                            for (Index i : block)
                              for (Index j : block) out(i, j) = a(i, j);
                          return SymMat(out);
                        },
                        [&](const CongruenceMixture& m) {
                          Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.dim(), a.dim());
                          for (std::size_t i = 0; i < m.weights.size(); ++i)
                            out += m.weights[i] * (m.unitaries[i].transpose() * a.dense() * m.unitaries[i]);
                          return SymMat(out);
                        },
                    },
                    phi.variant());
}

MapVerification verify_map(const PositiveUnitalMap& phi, int trials, std::uint64_t seed) {
  if (trials < 1) throw BadParameter("verify_map: trials must be >= 1");
  MapVerification report;
  report.trials = trials;

  const Index n = phi.in_dim();
  const auto image = apply(phi, SymMat::identity(n));
  report.unitality_error = (image.dense() - Eigen::MatrixXd::Identity(image.dim(), image.dim())).cwiseAbs().maxCoeff();
  report.unital = report.unitality_error <= kUnitalTol;

  SplitMix64 rng(seed);
  report.worst_positivity = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    Eigen::MatrixXd g(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) g(i, j) = rng.uniform(-1.0, 1.0);
    // Rank-deficient inputs every few trials probe the boundary of the cone.
    if (t % 3 == 2 && n > 1) g.col(n - 1).setZero();
    const SymMat x(Eigen::MatrixXd(g * g.transpose()));
    const SymMat y = apply(phi, x);
    const double scale = 1.0 + x.max_norm();
    report.worst_positivity = std::min(report.worst_positivity, eigendecompose(y).min_eigenvalue() / scale);
  }
  report.positive = report.worst_positivity >= -1e-10;
  return report;
}

}  // namespace opineq
