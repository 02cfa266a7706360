#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "opineq/spectral.hpp"

namespace opineq {

/// X -> V^T X V with V^T V = I (in_dim x out_dim).
struct Compression {
  Eigen::MatrixXd V;
};

/// X -> <X x, x> as a 1x1 matrix.
struct VectorState {
  Eigen::VectorXd x;
};

/// X -> Tr[X] / n as a 1x1 matrix.
struct NormalizedTrace {
  Index dim = 1;
};

/// Keeps the diagonal blocks of an index partition, zeroes the rest.
struct Pinching {
  Index dim = 1;
  std::vector<std::vector<Index>> blocks;
};

/// X -> sum_i w_i U_i^T X U_i with orthogonal U_i and weights summing to 1.
struct CongruenceMixture {
  std::vector<double> weights;
  std::vector<Eigen::MatrixXd> unitaries;
};

class PositiveUnitalMap {
 public:
  using Variant = std::variant<Compression, VectorState, NormalizedTrace, Pinching, CongruenceMixture>;

  /// Leading out_dim x out_dim principal submatrix.
  static PositiveUnitalMap corner(Index in_dim, Index out_dim);
  static PositiveUnitalMap identity(Index dim);
  static PositiveUnitalMap compression(Eigen::MatrixXd v);
  /// Skips the isometry check; for exercising verify_map on bad input.
  static PositiveUnitalMap compression_unchecked(Eigen::MatrixXd v);
  static PositiveUnitalMap vector_state(Eigen::VectorXd x);
  static PositiveUnitalMap normalized_trace(Index dim);
  static PositiveUnitalMap pinching(Index dim, std::vector<std::vector<Index>> blocks);
  static PositiveUnitalMap mixture(std::vector<double> weights, std::vector<Eigen::MatrixXd> unitaries);

  Index in_dim() const;
  Index out_dim() const;
  /// corner / compression / vecstate / trace / pinching / mixture
  std::string tag() const;

  const Variant& variant() const { return variant_; }

 private:
  explicit PositiveUnitalMap(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

SymMat apply(const PositiveUnitalMap& phi, const SymMat& a);

struct MapVerification {
  int trials = 0;
  double unitality_error = 0;     // max |Phi(I) - I|
  double worst_positivity = 0;    // min over trials of min eig(Phi(X)) / scale
  bool unital = false;
  bool positive = false;

  bool passed() const { return unital && positive; }
};

/// Unitality to 1e-12 and positivity on `trials` random PSD inputs.
MapVerification verify_map(const PositiveUnitalMap& phi, int trials, std::uint64_t seed = 0x5EEDULL);

}  // namespace opineq
