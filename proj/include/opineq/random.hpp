#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include <Eigen/Dense>

namespace opineq {

/// SplitMix64 (Steele, Lea & Flood). State advances by the golden-gamma
/// constant 0x9E3779B97F4A7C15; output is the standard 30/27/31 xor-shift
/// multiply finalizer. Doubles take the top 53 bits. Fully specified so the
/// same seed reproduces campaigns in any language.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = std::uint64_t(hi - lo) + 1;
    return lo + std::int64_t(next() % span);
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

/// Per-trial seed, independent of execution order.
inline std::uint64_t derive_seed(std::uint64_t campaign_seed, std::uint64_t index) {
  return SplitMix64::mix(campaign_seed ^ SplitMix64::mix(index + 0x632BE59BD9B4E019ULL));
}

/// Random orthogonal matrix as a product of Givens rotations over every (i, j)
/// pair, two passes, with uniformly drawn angles.
inline Eigen::MatrixXd random_orthogonal(SplitMix64& rng, Eigen::Index n) {
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n);
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        for (Eigen::Index r = 0; r < n; ++r) {
          const double qi = q(r, i);
          const double qj = q(r, j);
          q(r, i) = c * qi - s * qj;
          q(r, j) = s * qi + c * qj;
        }
      }
    }
  }
  return q;
}

}  // namespace opineq
