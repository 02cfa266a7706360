#include "opineq/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

namespace opineq {

SymMat random_symmetric_with_spectrum(std::uint64_t seed, Index dim, double m, double M, bool force_endpoints) {
  if (dim < 2) throw BadParameter("random_symmetric_with_spectrum: dim must be >= 2");
  if (!(m < M) || !std::isfinite(m) || !std::isfinite(M))
    throw BadParameter("random_symmetric_with_spectrum: need finite m < M");
  SplitMix64 rng(seed);
  Eigen::VectorXd lambda(dim);
  for (Index i = 0; i < dim; ++i) lambda(i) = rng.uniform(m, M);
  if (force_endpoints) {
    lambda(0) = m;
    lambda(1) = M;
  }
  const Eigen::MatrixXd q = random_orthogonal(rng, dim);
  return SymMat(Eigen::MatrixXd(q * lambda.asDiagonal() * q.transpose()));
}

DensityOperator random_density(std::uint64_t seed, Index dim) {
  if (dim < 2) throw BadParameter("random_density: dim must be >= 2");
  constexpr double kFloor = 1e-3;
  SplitMix64 rng(seed);
  // Raising uniforms to a random power spreads the draws from near-uniform
  // spectra toward nearly pure states.
  const int sharpness = int(rng.uniform_int(0, 3));
  Eigen::VectorXd w(dim);
  for (Index i = 0; i < dim; ++i) w(i) = std::pow(rng.uniform(), double(1 << sharpness)) + 1e-12;
  const Eigen::VectorXd lambda = (kFloor + (1.0 - double(dim) * kFloor) * (w / w.sum()).array()).matrix();
  const Eigen::MatrixXd q = random_orthogonal(rng, dim);
  SymMat rho(Eigen::MatrixXd(q * lambda.asDiagonal() * q.transpose()));
  // Re-normalize away the rounding of the conjugation.
  rho = rho / rho.trace();
  return DensityOperator::create(rho);
}

OperatorPair random_sandwich_pair(std::uint64_t seed, Index dim, double m, double M) {
  if (!(m > 0) || !(m < M)) throw BadParameter("random_sandwich_pair: need 0 < m < M");
  SplitMix64 rng(seed);
  const SymMat a = random_symmetric_with_spectrum(rng.next(), dim, 0.2, 3.0);
  const SymMat c = random_symmetric_with_spectrum(rng.next(), dim, m, M);
  const auto [root, inv_root] = matrix_sqrt_inv_sqrt(a);
  return OperatorPair::create(a, sandwich(root, c));
}

PositiveUnitalMap random_map(const std::string& tag, SplitMix64& rng, Index dim) {
  if (tag == "identity") return PositiveUnitalMap::identity(dim);
  if (tag == "corner") return PositiveUnitalMap::corner(dim, Index(rng.uniform_int(1, std::max<Index>(1, dim - 1))));
  if (tag == "trace") return PositiveUnitalMap::normalized_trace(dim);
  if (tag == "vecstate") {
    Eigen::VectorXd x(dim);
    do {
      for (Index i = 0; i < dim; ++i) x(i) = rng.uniform(-1.0, 1.0);
    } while (x.norm() < 1e-3);
    return PositiveUnitalMap::vector_state(x / x.norm());
  }
  if (tag == "pinching") {
    std::vector<std::vector<Index>> blocks{{0}};
    for (Index i = 1; i < dim; ++i) {
      if (rng.uniform() < 0.5) blocks.emplace_back();
      blocks.back().push_back(i);
    }
    return PositiveUnitalMap::pinching(dim, std::move(blocks));
  }
  if (tag == "mixture") {
    const auto count = std::size_t(rng.uniform_int(2, 3));
    std::vector<double> weights(count);
    std::vector<Eigen::MatrixXd> unitaries;
    double total = 0;
    for (auto& w : weights) total += (w = rng.uniform(0.1, 1.0));
    for (auto& w : weights) w /= total;
    for (std::size_t i = 0; i < count; ++i) unitaries.push_back(random_orthogonal(rng, dim));
    return PositiveUnitalMap::mixture(std::move(weights), std::move(unitaries));
  }
  throw BadParameter("unknown map tag '" + tag + "'");
}

// ---------------------------------------------------------------------------

namespace {

const std::set<std::string>& known_maps() {
  static const std::set<std::string> tags{"identity", "corner", "trace", "vecstate", "pinching", "mixture"};
  return tags;
}

const std::set<std::string>& known_suites() {
  static const std::set<std::string> suites{kSuiteCdj, kSuitePower, kSuiteKantorovich, kSuitePerspective,
                                            kSuiteEntropy};
  return suites;
}

std::string power_name(double r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "power_corollary.r=%g", r);
  return buf;
}

bool has_suite(const TrialSpec& spec, const char* suite) {
  return std::find(spec.suites.begin(), spec.suites.end(), suite) != spec.suites.end();
}

std::vector<std::string> registry_names(const TrialSpec& spec) {
  std::vector<std::string> names;
  if (has_suite(spec, kSuiteCdj))
    names.insert(names.end(), {"lemma.i", "lemma.ii", "lemma.iii", "lemma.iv", "theorem1.upper", "theorem1.converse",
                               "theorem2.lower", "theorem2.upper", "theorem2k.lower", "theorem2k.upper",
                               "corollary1.chain"});
  if (has_suite(spec, kSuitePower)) {
    std::vector<std::string> seen;
    for (double r : spec.powers) {
      const auto name = power_name(r);
      if (std::find(seen.begin(), seen.end(), name) == seen.end()) seen.push_back(name);
    }
    names.insert(names.end(), seen.begin(), seen.end());
  }
  if (has_suite(spec, kSuiteKantorovich)) names.insert(names.end(), {"kantorovich.improved", "kantorovich.refinement"});
  if (has_suite(spec, kSuitePerspective))
    names.insert(names.end(), {"prop31.lower", "prop31.upper", "prop32.lower", "prop32.upper", "tsallis_bounds.lower",
                               "tsallis_bounds.upper", "relative_entropy_bounds.lower",
                               "relative_entropy_bounds.upper"});
  if (has_suite(spec, kSuiteEntropy))
    names.insert(names.end(), {"remark32.lower", "remark32.upper", "remark32.dp_cited", "remark32.dp_bound",
                               "corollary32", "von_neumann_bound"});
  return names;
}

class TrialRecorder {
 public:
  TrialRecorder(const TrialSpec& spec, TrialResult& result) : spec_(spec), result_(result) {}

  bool wants(const std::string& name) const {
    return std::find(spec_.skip.begin(), spec_.skip.end(), name) == spec_.skip.end();
  }

  void add(const std::string& name, double slack, double tolerance, bool pass, const std::string& group,
           double parameter, double m, double M) {
    if (!wants(name)) return;
    result_.outcomes.push_back({name, slack, tolerance, pass, parameter, m, M, group});
  }

  void add(const InequalityReport& r, const std::string& group, double parameter, double m, double M) {
    add(r.label, r.tightness, r.verdict.tolerance_used, r.holds(), group, parameter, m, M);
  }

  void add(const std::string& name, const ChainReport& chain, const std::string& group, double parameter, double m,
           double M) {
    double slack = std::numeric_limits<double>::infinity();
    double tol = 0;
    auto consider = [&](const InequalityReport& r) {
      if (r.tightness < slack) {
        slack = r.tightness;
        tol = r.verdict.tolerance_used;
      }
    };
    for (const auto& l : chain.links) consider(l);
    if (chain.prerequisite) consider(*chain.prerequisite);
    add(name, slack, tol, chain.holds(), group, parameter, m, M);
  }

  void add(const std::string& name, const ScalarCheck& c, const std::string& group, double parameter, double m,
           double M) {
    add(name, c.slack, c.tolerance, c.holds(), group, parameter, m, M);
  }

 private:
  const TrialSpec& spec_;
  TrialResult& result_;
};

void run_cdj_suite(const TrialSpec& spec, TrialRecorder& rec, TrialResult& result, const ScalarFunction& f,
                   const PositiveUnitalMap& phi, SplitMix64& rng, std::uint64_t seed_a, bool widened,
                   bool force_endpoints) {
  const bool on_line = f.domain.lo == -std::numeric_limits<double>::infinity() && !spec.positive_intervals;
  const double m = on_line ? rng.uniform(-2.0, 2.0) : rng.uniform(0.1, 2.0);
  const double M = m + rng.uniform(0.2, 4.0);
  const SymMat A = random_symmetric_with_spectrum(seed_a, result.dim, m, M, force_endpoints);
  result.inputs["cdj"] = {{"A", A}};

  const auto ctx = widened ? build_context(A, phi, f, m, M, spec.tolerance)
                           : build_context(A, phi, f, std::nullopt, std::nullopt, spec.tolerance);
  const double cm = ctx.m();
  const double cM = ctx.M();
  for (const auto& r : lemma_chord_bounds(ctx)) rec.add(r, "cdj", 0, cm, cM);
  rec.add(theorem1_upper(ctx), "cdj", 0, cm, cM);
  rec.add(theorem1_converse(ctx), "cdj", 0, cm, cM);
  {
    const auto d = eigendecompose(theorem1_middle_term(ctx));
    const double scale = 1 + std::max(std::abs(d.min_eigenvalue()), std::abs(d.max_eigenvalue()));
    result.samples.push_back({"theorem1.middle_term", d.min_eigenvalue(), d.max_eigenvalue(), spec.tolerance * scale});
  }
  try {
    for (const auto& r : theorem2_sandwich(ctx)) rec.add(r, "cdj", 0, cm, cM);
    for (const auto& r : theorem2_k_version(ctx)) rec.add(r, "cdj", 0, cm, cM);
    if (strictly_convex(ctx.bounds)) rec.add("corollary1.chain", corollary1_chain(ctx), "cdj", 0, cm, cM);
  } catch (const NonPositiveFunction&) {
    // f changes sign on [m, M]: the K/k sandwiches do not apply.
  }
}

}  // namespace

void validate(const TrialSpec& spec) {
  if (spec.trials < 1) throw BadParameter("trials must be >= 1");
  if (spec.dim_lo < 2 || spec.dim_hi < spec.dim_lo) throw BadParameter("dimension range must satisfy 2 <= lo <= hi");
  if (spec.dim_hi > 64) throw BadParameter("dimension range is capped at 64");
  if (!(spec.tolerance > 0) || !std::isfinite(spec.tolerance)) throw BadParameter("tolerance must be > 0");
  if (spec.threads < 1) throw BadParameter("threads must be >= 1");
  if (spec.functions.empty() || spec.maps.empty() || spec.powers.empty() || spec.tsallis_ps.empty())
    throw BadParameter("function, map, power and p lists must be non-empty");
  for (const auto& f : spec.functions) parse_function(f);
  for (const auto& m : spec.maps)
    if (!known_maps().count(m)) throw BadParameter("unknown map tag '" + m + "'");
  for (const auto& s : spec.suites)
    if (!known_suites().count(s)) throw BadParameter("unknown suite '" + s + "'");
  for (double p : spec.tsallis_ps)
    if (!(p >= -1 && p <= 1) || p == 0) throw BadParameter("tsallis p must lie in [-1, 1] \\ {0}");
  for (double r : spec.powers)
    if (!std::isfinite(r)) throw BadParameter("powers must be finite");
}

std::vector<std::string> inequality_registry(const TrialSpec& spec) {
  auto names = registry_names(spec);
  std::erase_if(names, [&](const std::string& n) {
    return std::find(spec.skip.begin(), spec.skip.end(), n) != spec.skip.end();
  });
  return names;
}

TrialResult run_trial(const TrialSpec& spec, int index) {
  TrialResult result;
  result.index = index;
  result.seed = derive_seed(spec.seed, std::uint64_t(index));
  SplitMix64 rng(result.seed);
  result.dim = Index(rng.uniform_int(spec.dim_lo, spec.dim_hi));
  const auto nf = spec.functions.size();
  result.function = spec.functions[std::size_t(index) % nf];
  result.map = spec.maps[(std::size_t(index) / nf) % spec.maps.size()];

  const auto f = parse_function(result.function);
  const auto phi = random_map(result.map, rng, result.dim);
  const std::uint64_t seed_a = rng.next();
  const std::uint64_t seed_power = rng.next();
  const std::uint64_t seed_pair = rng.next();
  const std::uint64_t seed_rho = rng.next();
  const std::uint64_t seed_sigma = rng.next();
  SplitMix64 interval_rng(rng.next());
  const bool widened = index % 2 == 1;
  const bool force_endpoints = index % 4 == 0;
  const double r = spec.powers[std::size_t(index) % spec.powers.size()];
  const double p = spec.tsallis_ps[std::size_t(index) % spec.tsallis_ps.size()];

  TrialRecorder rec(spec, result);

  if (has_suite(spec, kSuiteCdj)) run_cdj_suite(spec, rec, result, f, phi, interval_rng, seed_a, widened, force_endpoints);

  if (has_suite(spec, kSuitePower) || has_suite(spec, kSuiteKantorovich)) {
    SplitMix64 local(seed_power);
    const double m = local.uniform(0.1, 2.0);
    const double M = m + local.uniform(0.2, 4.0);
    const SymMat A = random_symmetric_with_spectrum(local.next(), result.dim, m, M, force_endpoints);
    result.inputs["power"] = {{"A", A}};
    const std::optional<double> mo = widened ? std::optional<double>(m) : std::nullopt;
    const std::optional<double> Mo = widened ? std::optional<double>(M) : std::nullopt;
    if (has_suite(spec, kSuitePower)) {
      const auto chain = power_corollary(A, phi, r, mo, Mo, spec.tolerance);
      rec.add(power_name(r), chain.chain, "power", r, m, M);
    }
    if (has_suite(spec, kSuiteKantorovich)) {
      const auto k = improved_kantorovich(A, phi, mo, Mo, spec.tolerance);
      rec.add(k.improved, "power", -1, k.m, k.M);
      rec.add(k.refinement, "power", -1, k.m, k.M);
    }
  }

  if (has_suite(spec, kSuitePerspective)) {
    SplitMix64 local(seed_pair);
    const double m = local.uniform(0.1, 1.5);
    const double M = m + local.uniform(0.3, 5.0);
    const auto pair = random_sandwich_pair(local.next(), result.dim, m, M);
    result.inputs["perspective"] = {{"A", pair.A()}, {"B", pair.B()}};
    const double pm = pair.m();
    const double pM = pair.M();
    for (const auto& rep : proposition31_bounds(pair, f, spec.tolerance)) rec.add(rep, "perspective", 0, pm, pM);
    for (const auto& rep : proposition32_bounds(pair, phi, f, spec.tolerance)) rec.add(rep, "perspective", 0, pm, pM);
    for (const auto& rep : tsallis_entropy_bounds(pair, p, spec.tolerance)) rec.add(rep, "perspective", p, pm, pM);
    for (const auto& rep : relative_entropy_bounds(pair, spec.tolerance)) rec.add(rep, "perspective", 0, pm, pM);
  }

  if (has_suite(spec, kSuiteEntropy)) {
    const auto rho = random_density(seed_rho, result.dim);
    const auto sigma = random_density(seed_sigma, result.dim);
    result.inputs["entropy"] = {{"rho", rho.rho()}, {"sigma", sigma.rho()}};
    const auto trace = remark32_trace_bounds(rho, sigma, p);
    rec.add("remark32.lower", trace.lower, "entropy", p, trace.m, trace.M);
    rec.add("remark32.upper", trace.upper, "entropy", p, trace.m, trace.M);
    if (trace.cited) rec.add("remark32.dp_cited", *trace.cited, "entropy", p, trace.m, trace.M);
    if (trace.dp_bound) rec.add("remark32.dp_bound", *trace.dp_bound, "entropy", p, trace.m, trace.M);

    const auto tsallis = corollary32_lower_bound(rho, p);
    rec.add("corollary32", std::min(tsallis.entropy_vs_bound.slack, tsallis.bound_nonnegative.slack),
            tsallis.entropy_vs_bound.tolerance, tsallis.holds(), "entropy", p, rho.m(), rho.M());
    const auto vn = von_neumann_lower_bound(rho);
    rec.add("von_neumann_bound", std::min(vn.entropy_vs_bound.slack, vn.bound_nonnegative.slack),
            vn.entropy_vs_bound.tolerance, vn.holds(), "entropy", 0, rho.m(), rho.M());
  }
  return result;
}

int CampaignReport::total_failures() const {
  int n = 0;
  for (const auto& s : stats) n += s.fail;
  return n;
}

const InequalityStats* CampaignReport::find(const std::string& name) const {
  for (const auto& s : stats)
    if (s.name == name) return &s;
  return nullptr;
}

CampaignReport run_campaign(const TrialSpec& spec) {
  validate(spec);
  std::vector<TrialResult> results(std::size_t(spec.trials));

  const int workers = std::min(spec.threads, spec.trials);
  if (workers <= 1) {
    for (int i = 0; i < spec.trials; ++i) results[std::size_t(i)] = run_trial(spec, i);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next++; i < spec.trials; i = next++) {
          try {
            results[std::size_t(i)] = run_trial(spec, i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  CampaignReport report;
  report.spec = spec;
  for (const auto& name : inequality_registry(spec)) report.stats.push_back({name});
  auto stats_for = [&](const std::string& name) -> InequalityStats& {
    for (auto& s : report.stats)
      if (s.name == name) return s;
    report.stats.push_back({name});
    return report.stats.back();
  };

  std::vector<double> sums(report.stats.size(), 0.0);
  for (const auto& trial : results) {
    for (const auto& o : trial.outcomes) {
      auto& s = stats_for(o.inequality);
      if (s.trials == 0) {
        s.worst_slack = s.tightest_slack = o.slack;
      } else {
        s.worst_slack = std::min(s.worst_slack, o.slack);
        if (std::abs(o.slack) < std::abs(s.tightest_slack)) s.tightest_slack = o.slack;
      }
      ++s.trials;
      s.mean_slack += o.slack;
      (o.pass ? s.pass : s.fail) += 1;
      if (!o.pass) {
        Reproducer rep;
        rep.inequality = o.inequality;
        rep.trial = trial.index;
        rep.seed = trial.seed;
        rep.dim = trial.dim;
        rep.function = trial.function;
        rep.map = trial.map;
        rep.parameter = o.parameter;
        rep.m = o.m;
        rep.M = o.M;
        rep.slack = o.slack;
        rep.tolerance = o.tolerance;
        if (auto it = trial.inputs.find(o.input_group); it != trial.inputs.end()) rep.inputs = it->second;
        report.failures.push_back(std::move(rep));
      }
      if (spec.record_rows) report.rows.push_back({o.inequality, trial.index, trial.dim, o.slack, o.pass});
    }
  }
  for (auto& s : report.stats)
    if (s.trials > 0) s.mean_slack /= s.trials;

  for (const auto& trial : results) {
    for (const auto& t : trial.samples) {
      auto it = std::find_if(report.observations.begin(), report.observations.end(),
                             [&](const TermObservation& o) { return o.name == t.name; });
      if (it == report.observations.end()) {
        report.observations.push_back({t.name, 0, t.min_eigenvalue, t.max_eigenvalue});
        it = std::prev(report.observations.end());
      }
      ++it->trials;
      it->min_eigenvalue = std::min(it->min_eigenvalue, t.min_eigenvalue);
      it->max_eigenvalue = std::max(it->max_eigenvalue, t.max_eigenvalue);
      if (t.min_eigenvalue >= -t.tolerance)
        ++it->positive_semidefinite;
      else if (t.max_eigenvalue <= t.tolerance)
        ++it->negative_semidefinite;
      else
        ++it->indefinite;
    }
  }
  return report;
}

}  // namespace opineq
