#pragma once

// Command-line front end. run_cli takes the arguments after the program
// name and returns the process exit code: 0 all verdicts hold, 1 some
// verdict failed, 2 usage or input error.

#include <iosfwd>
#include <string>
#include <vector>

#include "opineq/positive_map.hpp"
#include "opineq/spectral.hpp"

namespace opineq {

inline constexpr int kExitPass = 0;
inline constexpr int kExitVerdictFailure = 1;
inline constexpr int kExitUsage = 2;

/// corner[:k] (default k = n-1), vecstate:uniform, vecstate:<vector file>,
/// trace, identity.
PositiveUnitalMap parse_map_spec(const std::string& spec, Index dim);

enum class WorkedExample { Counterexample, JensenGap, Kantorovich };

/// The three worked-example matrices shipped under fixtures/.
SymMat worked_example_matrix(WorkedExample which);
/// The state vector (1, 1, 1)/sqrt(3) of the Jensen-gap example.
Eigen::VectorXd worked_example_vector();

struct ExampleCheck {
  std::string label;
  double computed = 0;
  double expected = 0;
  double tolerance = 0;
  std::string exact;  // expected value as an exact rational, when it is one

  bool pass() const;
};

std::vector<ExampleCheck> worked_example_checks();

/// "lo..hi" with 2 <= lo <= hi.
std::pair<Index, Index> parse_dim_range(const std::string& text);

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace opineq
