#pragma once

// Dense symmetric matrices, a deterministic cyclic-Jacobi eigensolver, the
// spectral functional calculus built on it, and Loewner-order comparison.
// Everything is templated on the scalar type; the rest of the library uses
// the double instantiation through the SymMat alias.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "opineq/errors.hpp"

namespace opineq {

using Index = Eigen::Index;

template <typename Scalar>
class SymmetricMatrix {
 public:
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  SymmetricMatrix() : entries_(Dense::Zero(1, 1)) {}

  /// Validates and symmetrizes. Entries must be finite and the input may not
  /// be asymmetric by more than 1e-8 * (1 + max|a_ij|).
  template <typename Derived>
  explicit SymmetricMatrix(const Eigen::MatrixBase<Derived>& entries) {
    if (entries.rows() != entries.cols() || entries.rows() < 1)
      throw ShapeError("symmetric matrix must be square with dim >= 1");
    if (!entries.allFinite()) throw InvalidMatrix("matrix has non-finite entries");
    const Scalar scale = Scalar(1) + entries.cwiseAbs().maxCoeff();
    const Scalar asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
    if (asym > Scalar(1e-8) * scale)
      throw InvalidMatrix("matrix is not symmetric (asymmetry " + std::to_string(double(asym)) + ")");
    entries_ = (entries + entries.transpose()) / Scalar(2);
  }

  static SymmetricMatrix identity(Index n) { return SymmetricMatrix(Dense::Identity(n, n)); }
  static SymmetricMatrix zero(Index n) { return SymmetricMatrix(Dense::Zero(n, n)); }
  static SymmetricMatrix scalar(Scalar value) { return SymmetricMatrix(Dense::Constant(1, 1, value)); }

  static SymmetricMatrix diagonal(const std::vector<Scalar>& values) {
    Dense d = Dense::Zero(Index(values.size()), Index(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) d(Index(i), Index(i)) = values[i];
    return SymmetricMatrix(d);
  }

  static SymmetricMatrix from_rows(std::initializer_list<std::initializer_list<Scalar>> rows) {
    const auto n = Index(rows.size());
    Dense d(n, n);
    Index i = 0;
    for (const auto& row : rows) {
      if (Index(row.size()) != n) throw ShapeError("from_rows: ragged input");
      Index j = 0;
      for (Scalar v : row) d(i, j++) = v;
      ++i;
    }
    return SymmetricMatrix(d);
  }

  Index dim() const { return entries_.rows(); }
  const Dense& dense() const { return entries_; }
  Scalar operator()(Index i, Index j) const { return entries_(i, j); }

  Scalar max_norm() const { return entries_.cwiseAbs().maxCoeff(); }
  Scalar trace() const { return entries_.trace(); }

  /// Value of a 1x1 matrix; scalar-valued maps produce these.
  Scalar value() const {
    if (dim() != 1) throw ShapeError("value() requires a 1x1 matrix");
    return entries_(0, 0);
  }

  friend SymmetricMatrix operator+(const SymmetricMatrix& a, const SymmetricMatrix& b) {
    check_same_dim(a, b);
    return SymmetricMatrix(Dense(a.entries_ + b.entries_));
  }
  friend SymmetricMatrix operator-(const SymmetricMatrix& a, const SymmetricMatrix& b) {
    check_same_dim(a, b);
    return SymmetricMatrix(Dense(a.entries_ - b.entries_));
  }
  friend SymmetricMatrix operator-(const SymmetricMatrix& a) { return SymmetricMatrix(Dense(-a.entries_)); }
  friend SymmetricMatrix operator*(Scalar s, const SymmetricMatrix& a) {
    return SymmetricMatrix(Dense(s * a.entries_));
  }
  friend SymmetricMatrix operator*(const SymmetricMatrix& a, Scalar s) { return s * a; }
  friend SymmetricMatrix operator/(const SymmetricMatrix& a, Scalar s) {
    return SymmetricMatrix(Dense(a.entries_ / s));
  }

  /// a + s*I
  friend SymmetricMatrix operator+(const SymmetricMatrix& a, Scalar s) {
    return SymmetricMatrix(Dense(a.entries_ + s * Dense::Identity(a.dim(), a.dim())));
  }
  friend SymmetricMatrix operator-(const SymmetricMatrix& a, Scalar s) { return a + (-s); }
  friend SymmetricMatrix operator-(Scalar s, const SymmetricMatrix& a) { return (-a) + s; }

  friend bool operator==(const SymmetricMatrix& a, const SymmetricMatrix& b) {
    return a.dim() == b.dim() && a.entries_ == b.entries_;
  }

 private:
  static void check_same_dim(const SymmetricMatrix& a, const SymmetricMatrix& b) {
    if (a.dim() != b.dim()) throw ShapeError("dimension mismatch");
  }

  Dense entries_;
};

using SymMat = SymmetricMatrix<double>;

template <typename Scalar>
Scalar max_norm(const SymmetricMatrix<Scalar>& a) {
  return a.max_norm();
}

/// 1 + max(|X|_max, |Y|_max), the reference scale for relative tolerances.
template <typename Scalar>
Scalar scale_of(const SymmetricMatrix<Scalar>& x, const SymmetricMatrix<Scalar>& y) {
  return Scalar(1) + std::max(x.max_norm(), y.max_norm());
}

template <typename Scalar>
SymmetricMatrix<Scalar> square(const SymmetricMatrix<Scalar>& x) {
  using Dense = typename SymmetricMatrix<Scalar>::Dense;
  return SymmetricMatrix<Scalar>(Dense(x.dense() * x.dense()));
}

/// S X S for symmetric S.
template <typename Scalar>
SymmetricMatrix<Scalar> sandwich(const SymmetricMatrix<Scalar>& s, const SymmetricMatrix<Scalar>& x) {
  using Dense = typename SymmetricMatrix<Scalar>::Dense;
  if (s.dim() != x.dim()) throw ShapeError("sandwich: dimension mismatch");
  return SymmetricMatrix<Scalar>(Dense(s.dense() * x.dense() * s.dense()));
}

/// V^T X V for an arbitrary in_dim x out_dim matrix V.
template <typename Scalar, typename Derived>
SymmetricMatrix<Scalar> congruence(const Eigen::MatrixBase<Derived>& v, const SymmetricMatrix<Scalar>& x) {
  using Dense = typename SymmetricMatrix<Scalar>::Dense;
  if (v.rows() != x.dim()) throw ShapeError("congruence: dimension mismatch");
  return SymmetricMatrix<Scalar>(Dense(v.transpose() * x.dense() * v));
}

// ---------------------------------------------------------------------------
// Eigendecomposition

template <typename Scalar>
struct SpectralDecomposition {
  using Dense = typename SymmetricMatrix<Scalar>::Dense;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vector eigenvalues;  // ascending
  Dense eigenvectors;  // columns are unit eigenvectors
  int sweeps = 0;
  bool converged = true;

  Index dim() const { return eigenvalues.size(); }
  Scalar min_eigenvalue() const { return eigenvalues(0); }
  Scalar max_eigenvalue() const { return eigenvalues(eigenvalues.size() - 1); }

  /// Q diag(fn(lambda_i)) Q^T.
  template <typename Fn>
  SymmetricMatrix<Scalar> map(Fn&& fn) const {
    Vector mapped(eigenvalues.size());
    for (Index i = 0; i < eigenvalues.size(); ++i) mapped(i) = fn(eigenvalues(i));
    return with_eigenvalues(mapped);
  }

  /// Q diag(values) Q^T, same eigenvectors.
  SymmetricMatrix<Scalar> with_eigenvalues(const Vector& values) const {
    return SymmetricMatrix<Scalar>(Dense(eigenvectors * values.asDiagonal() * eigenvectors.transpose()));
  }

  SymmetricMatrix<Scalar> reconstruct() const {
    return map([](Scalar x) { return x; });
  }
};

struct JacobiOptions {
  double relative_offdiag_tol = 1e-14;
  int max_sweeps = 100;
};

/// Cyclic Jacobi with a fixed row-major (p, q) sweep order. Iterates until the
/// off-diagonal Frobenius mass drops below tol * |A|_F or the sweep cap is
/// hit; the result is fully determined by the input bits.
template <typename Scalar>
SpectralDecomposition<Scalar> eigendecompose(const SymmetricMatrix<Scalar>& matrix,
                                             const JacobiOptions& options = {}) {
  using Dense = typename SymmetricMatrix<Scalar>::Dense;
  using std::abs;
  using std::sqrt;

  const Index n = matrix.dim();
  Dense a = matrix.dense();
  if (!a.allFinite()) throw InvalidMatrix("eigendecompose: non-finite entries");
  Dense v = Dense::Identity(n, n);

  const Scalar frobenius = a.norm();
  const Scalar threshold = Scalar(options.relative_offdiag_tol) * frobenius;

  auto offdiag_mass = [&]() {
    Scalar sum = 0;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (i != j) sum += a(i, j) * a(i, j);
    return sqrt(sum);
  };

  SpectralDecomposition<Scalar> out;
  out.converged = false;
  int sweep = 0;
  for (; sweep <= options.max_sweeps; ++sweep) {
    if (offdiag_mass() <= threshold) {
      out.converged = true;
      break;
    }
    if (sweep == options.max_sweeps) break;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (apq == Scalar(0)) continue;
        const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
        Scalar t;
        if (abs(theta) > Scalar(1e150)) {
          t = Scalar(1) / (Scalar(2) * theta);
        } else {
          t = Scalar(1) / (abs(theta) + sqrt(theta * theta + Scalar(1)));
          if (theta < Scalar(0)) t = -t;
        }
        const Scalar c = Scalar(1) / sqrt(t * t + Scalar(1));
        const Scalar s = t * c;

        for (Index r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const Scalar arp = a(r, p);
          const Scalar arq = a(r, q);
          a(r, p) = a(p, r) = c * arp - s * arq;
          a(r, q) = a(q, r) = s * arp + c * arq;
        }
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = Scalar(0);

        for (Index r = 0; r < n; ++r) {
          const Scalar vrp = v(r, p);
          const Scalar vrq = v(r, q);
          v(r, p) = c * vrp - s * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
      }
    }
  }
  out.sweeps = sweep;

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return a(i, i) < a(j, j); });

  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = a(order[std::size_t(k)], order[std::size_t(k)]);
    out.eigenvectors.col(k) = v.col(order[std::size_t(k)]);
  }
  return out;
}

/// Q diag(fn(lambda)) Q^T for a plain callable; no domain checking.
template <typename Scalar, typename Fn>
SymmetricMatrix<Scalar> apply_function(const SymmetricMatrix<Scalar>& a, Fn&& fn) {
  return eigendecompose(a).map(std::forward<Fn>(fn));
}

// ---------------------------------------------------------------------------
// Loewner order

enum class LoewnerRelation { LessOrEqual, GreaterOrEqual, Equal, Incomparable };

inline const char* to_string(LoewnerRelation r) {
  switch (r) {
    case LoewnerRelation::LessOrEqual: return "LessOrEqual";
    case LoewnerRelation::GreaterOrEqual: return "GreaterOrEqual";
    case LoewnerRelation::Equal: return "Equal";
    case LoewnerRelation::Incomparable: return "Incomparable";
  }
  return "?";
}

struct LoewnerVerdict {
  LoewnerRelation relation = LoewnerRelation::Equal;
  double gap_min_eig = 0;  // min eigenvalue of Y - X
  double gap_max_eig = 0;
  double tolerance_used = 0;

  /// X <= Y holds (Equal included).
  bool less_or_equal() const {
    return relation == LoewnerRelation::LessOrEqual || relation == LoewnerRelation::Equal;
  }
  bool greater_or_equal() const {
    return relation == LoewnerRelation::GreaterOrEqual || relation == LoewnerRelation::Equal;
  }

  friend bool operator==(const LoewnerVerdict&, const LoewnerVerdict&) = default;
};

template <typename Scalar>
Scalar default_loewner_tolerance(const SymmetricMatrix<Scalar>& x, const SymmetricMatrix<Scalar>& y) {
  return Scalar(1e-8) * scale_of(x, y);
}

/// Compares X and Y through the spectrum of Y - X.
template <typename Scalar>
LoewnerVerdict loewner_compare(const SymmetricMatrix<Scalar>& x, const SymmetricMatrix<Scalar>& y,
                               std::optional<std::type_identity_t<Scalar>> tol = std::nullopt) {
  if (x.dim() != y.dim()) throw ShapeError("loewner_compare: dimension mismatch");
  const Scalar used = tol ? *tol : default_loewner_tolerance(x, y);
  if (used < Scalar(0)) throw BadParameter("loewner_compare: negative tolerance");
  const auto gap = eigendecompose(y - x);

  LoewnerVerdict v;
  v.gap_min_eig = double(gap.min_eigenvalue());
  v.gap_max_eig = double(gap.max_eigenvalue());
  v.tolerance_used = double(used);
  const bool le = gap.min_eigenvalue() >= -used;
  const bool ge = gap.max_eigenvalue() <= used;
  if (le && ge)
    v.relation = LoewnerRelation::Equal;
  else if (le)
    v.relation = LoewnerRelation::LessOrEqual;
  else if (ge)
    v.relation = LoewnerRelation::GreaterOrEqual;
  else
    v.relation = LoewnerRelation::Incomparable;
  return v;
}

// ---------------------------------------------------------------------------
// Positive-definite calculus

template <typename Scalar>
Scalar strict_positivity_tolerance(const SymmetricMatrix<Scalar>& a) {
  return Scalar(1e-12) * (Scalar(1) + a.max_norm());
}

template <typename Scalar>
void require_strictly_positive(const SpectralDecomposition<Scalar>& d, const SymmetricMatrix<Scalar>& a,
                               const char* who) {
  if (!(d.min_eigenvalue() > strict_positivity_tolerance(a)))
    throw NotPositiveDefinite(std::string(who) + ": matrix is not strictly positive (min eigenvalue " +
                              std::to_string(double(d.min_eigenvalue())) + ")");
}

template <typename Scalar>
std::pair<SymmetricMatrix<Scalar>, SymmetricMatrix<Scalar>> matrix_sqrt_inv_sqrt(const SymmetricMatrix<Scalar>& a) {
  const auto d = eigendecompose(a);
  require_strictly_positive(d, a, "matrix_sqrt_inv_sqrt");
  using std::sqrt;
  return {d.map([](Scalar x) { return sqrt(x); }), d.map([](Scalar x) { return Scalar(1) / sqrt(x); })};
}

template <typename Scalar>
struct NaturalPowerResult {
  SymmetricMatrix<Scalar> value;
  /// Inner eigenvalues in [-tol, 0) were clamped to zero before a fractional power.
  bool clamped = false;
};

/// A^{1/2} (A^{-1/2} B A^{-1/2})^p A^{1/2}.
template <typename Scalar>
NaturalPowerResult<Scalar> natural_power_ex(const SymmetricMatrix<Scalar>& a, const SymmetricMatrix<Scalar>& b,
                                            Scalar p) {
  using std::pow;
  if (a.dim() != b.dim()) throw ShapeError("natural_power: dimension mismatch");
  if (!std::isfinite(double(p))) throw BadParameter("natural_power: non-finite exponent");
  const auto [root, inv_root] = matrix_sqrt_inv_sqrt(a);
  const auto inner = sandwich(inv_root, b);
  const auto d = eigendecompose(inner);

  const bool integral = p == std::round(p);
  const Scalar tol = Scalar(1e-10) * (Scalar(1) + inner.max_norm());
  bool clamped = false;
  typename SpectralDecomposition<Scalar>::Vector lambda(d.dim());
  for (Index i = 0; i < d.dim(); ++i) {
    Scalar x = d.eigenvalues(i);
    if (!integral && x < Scalar(0)) {
      if (x < -tol) throw DomainViolation("natural_power: inner matrix is not positive semidefinite", double(x));
      x = 0;
      clamped = true;
    }
    if (p < Scalar(0) && x == Scalar(0))
      throw DomainViolation("natural_power: singular inner matrix with negative exponent", double(x));
    lambda(i) = pow(x, p);
  }
  return {sandwich(root, d.with_eigenvalues(lambda)), clamped};
}

template <typename Scalar>
SymmetricMatrix<Scalar> natural_power(const SymmetricMatrix<Scalar>& a, const SymmetricMatrix<Scalar>& b, Scalar p) {
  return natural_power_ex(a, b, p).value;
}

}  // namespace opineq
