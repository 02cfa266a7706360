#pragma once

// Seeded fuzz campaigns over every inequality in the library. Each trial
// draws its own seed from (campaign seed, trial index), so serial and
// threaded runs aggregate to identical reports.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "opineq/perspective.hpp"
#include "opineq/random.hpp"

namespace opineq {

/// Eigenvalues uniform in [m, M], conjugated by a random orthogonal matrix.
/// With force_endpoints the first two eigenvalues are exactly m and M.
SymMat random_symmetric_with_spectrum(std::uint64_t seed, Index dim, double m, double M,
                                      bool force_endpoints = false);

/// Unit trace, eigenvalues >= 1e-3.
DensityOperator random_density(std::uint64_t seed, Index dim);

/// B = A^{1/2} C A^{1/2} with Sp(C) in [m, M]; m and M of the returned pair
/// are the exact hull of C.
OperatorPair random_sandwich_pair(std::uint64_t seed, Index dim, double m, double M);

/// Builds one of the map tags (corner, vecstate, trace, pinching, mixture,
/// identity) with random parameters where the tag has any.
PositiveUnitalMap random_map(const std::string& tag, SplitMix64& rng, Index dim);

inline constexpr const char* kSuiteCdj = "cdj";
inline constexpr const char* kSuitePower = "power";
inline constexpr const char* kSuiteKantorovich = "kantorovich";
inline constexpr const char* kSuitePerspective = "perspective";
inline constexpr const char* kSuiteEntropy = "entropy";

struct TrialSpec {
  std::uint64_t seed = 42;
  Index dim_lo = 2;
  Index dim_hi = 8;
  int trials = 1000;
  std::vector<std::string> functions{"power:3", "power:4", "power:-1", "log", "tsallis_f:0.5",
                                     "tsallis_f:-0.5", "exp", "power:2"};
  std::vector<std::string> maps{"corner", "vecstate", "trace", "pinching", "mixture"};
  std::vector<double> powers{-2.0, -1.0, -0.5, 0.5, 1.5, 2.0, 3.0};
  std::vector<double> tsallis_ps{-1.0, -0.5, 0.5, 1.0};
  std::vector<std::string> suites{kSuiteCdj, kSuitePower, kSuiteKantorovich, kSuitePerspective, kSuiteEntropy};
  std::vector<std::string> skip;
  /// Draw every cdj interval inside (0, inf) instead of letting functions
  /// defined on R straddle zero.
  bool positive_intervals = false;
  double tolerance = kDefaultRelativeTolerance;
  int threads = 1;
  bool record_rows = false;

  friend bool operator==(const TrialSpec&, const TrialSpec&) = default;
};

/// Throws BadParameter on an invalid spec.
void validate(const TrialSpec& spec);

struct InequalityStats {
  std::string name;
  int trials = 0;
  int pass = 0;
  int fail = 0;
  double worst_slack = 0;     // most negative signed slack
  double tightest_slack = 0;  // slack of smallest magnitude
  double mean_slack = 0;

  friend bool operator==(const InequalityStats&, const InequalityStats&) = default;
};

/// Spectrum of a term whose sign is observed rather than asserted.
struct TermObservation {
  std::string name;
  int trials = 0;
  double min_eigenvalue = 0;
  double max_eigenvalue = 0;
  int positive_semidefinite = 0;
  int negative_semidefinite = 0;
  int indefinite = 0;

  friend bool operator==(const TermObservation&, const TermObservation&) = default;
};

struct Reproducer {
  std::string inequality;
  int trial = 0;
  std::uint64_t seed = 0;
  Index dim = 0;
  std::string function;
  std::string map;
  double parameter = 0;  // r or p when the inequality has one
  double m = 0;
  double M = 0;
  double slack = 0;
  double tolerance = 0;
  std::map<std::string, SymMat> inputs;

  friend bool operator==(const Reproducer&, const Reproducer&) = default;
};

struct SlackRow {
  std::string inequality;
  int trial = 0;
  Index dim = 0;
  double slack = 0;
  bool pass = true;

  friend bool operator==(const SlackRow&, const SlackRow&) = default;
};

struct CampaignReport {
  TrialSpec spec;
  std::vector<InequalityStats> stats;
  std::vector<TermObservation> observations;
  std::vector<Reproducer> failures;
  std::vector<SlackRow> rows;

  int total_failures() const;
  const InequalityStats* find(const std::string& name) const;

  friend bool operator==(const CampaignReport&, const CampaignReport&) = default;
};

/// One checked inequality inside a trial.
struct TrialOutcome {
  std::string inequality;
  double slack = 0;
  double tolerance = 0;
  bool pass = true;
  double parameter = 0;
  double m = 0;
  double M = 0;
  std::string input_group;  // key into TrialResult::inputs groups
};

struct TermSample {
  std::string name;
  double min_eigenvalue = 0;
  double max_eigenvalue = 0;
  double tolerance = 0;
};

struct TrialResult {
  int index = 0;
  std::uint64_t seed = 0;
  Index dim = 0;
  std::string function;
  std::string map;
  std::vector<TrialOutcome> outcomes;
  std::vector<TermSample> samples;
  std::map<std::string, std::map<std::string, SymMat>> inputs;
};

/// Inequality names the spec's campaign checks, in report order.
std::vector<std::string> inequality_registry(const TrialSpec& spec);

/// Regenerates trial `index` of the campaign bit-for-bit.
TrialResult run_trial(const TrialSpec& spec, int index);

CampaignReport run_campaign(const TrialSpec& spec);

}  // namespace opineq
