#include "opineq/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "opineq/cdj_bounds.hpp"
#include "opineq/report_json.hpp"
#include "opineq/verifier.hpp"

namespace opineq {

namespace {

std::string g6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string pass_fail(bool ok) { return ok ? "PASS" : "FAIL"; }

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::uint64_t parse_seed(const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text.front() == '-')
    throw BadParameter("invalid seed '" + text + "'");
  return v;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("OPINEQ_SEED"); env && *env) return parse_seed(env);
  return 42;
}

void print_matrix(std::ostream& out, const SymMat& a, const std::string& indent) {
  for (Index r = 0; r < a.dim(); ++r) {
    out << indent << "[";
    for (Index c = 0; c < a.dim(); ++c) out << (c ? ", " : "") << g6(a(r, c));
    out << "]\n";
  }
}

void print_report(std::ostream& out, const InequalityReport& r) {
  out << "  " << pad(r.label, 26) << pad(pass_fail(r.holds()), 6);
  if (r.lhs.dim() == 1) out << g6(r.lhs.value()) << " <= " << g6(r.rhs.value()) << "  ";
  out << "slack " << g6(r.tightness) << "  tol " << g6(r.verdict.tolerance_used) << "\n";
}

// ---------------------------------------------------------------------------
// check / kantorovich

struct CheckArgs {
  std::string matrix;
  std::string map = "corner";
  std::string function;
  double m = 0;
  double M = 0;
  CLI::Option* m_opt = nullptr;
  CLI::Option* M_opt = nullptr;
  double tol = kDefaultRelativeTolerance;
  bool json = false;
};

void add_check_options(CLI::App* cmd, CheckArgs& a, bool with_function) {
  cmd->add_option("--matrix", a.matrix, "Matrix file {\"dim\": n, \"data\": [...]}")->required();
  cmd->add_option("--map", a.map, "corner[:k] | vecstate:<path>|vecstate:uniform | trace | identity")
      ->capture_default_str();
  if (with_function) cmd->add_option("--function", a.function, "Catalog function name[:params]")->required();
  a.m_opt = cmd->add_option("--m", a.m, "Lower spectral bound (default: min eigenvalue)");
  a.M_opt = cmd->add_option("--M", a.M, "Upper spectral bound (default: max eigenvalue)");
  cmd->add_option("--tol", a.tol, "Relative Loewner tolerance")->capture_default_str();
  cmd->add_flag("--json", a.json, "Print a JSON report");
}

int cmd_check(const CheckArgs& a, bool kantorovich, std::ostream& out) {
  if (!(a.tol > 0)) throw BadParameter("--tol must be > 0");
  const SymMat A = read_matrix_file(a.matrix);
  const auto phi = parse_map_spec(a.map, A.dim());
  const auto f = parse_function(kantorovich ? "power:-1" : a.function);
  const std::optional<double> m = a.m_opt->count() ? std::optional<double>(a.m) : std::nullopt;
  const std::optional<double> M = a.M_opt->count() ? std::optional<double>(a.M) : std::nullopt;
  const auto ctx = build_context(A, phi, f, m, M, a.tol);

  const auto plain = cdj_plain(ctx);
  const auto middle = eigendecompose(theorem1_middle_term(ctx));
  std::vector<InequalityReport> reports;
  for (const auto& r : lemma_chord_bounds(ctx)) reports.push_back(r);
  reports.push_back(theorem1_upper(ctx));
  reports.push_back(theorem1_converse(ctx));
  std::vector<std::string> skipped;
  try {
    for (const auto& r : theorem2_sandwich(ctx)) reports.push_back(r);
    for (const auto& r : theorem2_k_version(ctx)) reports.push_back(r);
  } catch (const NonPositiveFunction&) {
    skipped.push_back("theorem2: f is not positive on [m, M]");
  } catch (const NonPositiveConstant&) {
    skipped.push_back("theorem2k: k(m, M, f) <= 0");
  }
  if (kantorovich) {
    const auto k = improved_kantorovich(A, phi, m, M, a.tol);
    reports.push_back(k.improved);
    reports.push_back(k.refinement);
  }
  bool all = true;
  for (const auto& r : reports) all = all && r.holds();

  if (a.json) {
    Json j{{"command", kantorovich ? "kantorovich" : "check"},
           {"function", f.label()},
           {"map", phi.tag()},
           {"m", ctx.m()},
           {"M", ctx.M()},
           {"alpha", ctx.bounds.alpha},
           {"beta", ctx.bounds.beta},
           {"matrix", matrix_to_json(A)},
           {"plain_cdj", {{"relation", to_string(plain.verdict.relation)}, {"holds", plain.holds()}}},
           {"theorem1_middle_term",
            {{"min_eigenvalue", middle.min_eigenvalue()}, {"max_eigenvalue", middle.max_eigenvalue()}}},
           {"reports", reports},
           {"skipped", skipped},
           {"all_hold", all}};
    out << dump(j);
  } else {
    out << (kantorovich ? "kantorovich" : "check") << ": " << f.label() << " on " << A.dim() << "x" << A.dim()
        << " matrix, map " << phi.tag() << "\n";
    out << "  [m, M] = [" << g6(ctx.m()) << ", " << g6(ctx.M()) << "], alpha = " << g6(ctx.bounds.alpha)
        << ", beta = " << g6(ctx.bounds.beta) << "\n";
    out << "  plain C-D-J f(Phi(A)) vs Phi(f(A)): " << to_string(plain.verdict.relation)
        << (plain.holds() ? "" : " (no convexity assumed, informational)") << "\n";
    out << "  (alpha Phi(A)^2 - beta Phi(A^2))/2 spectrum: [" << g6(middle.min_eigenvalue()) << ", "
        << g6(middle.max_eigenvalue()) << "] (sign not asserted)\n";
    for (const auto& r : reports) print_report(out, r);
    for (const auto& s : skipped) out << "  skipped " << s << "\n";
    out << (all ? "all verdicts hold\n" : "some verdicts FAILED\n");
  }
  return all ? kExitPass : kExitVerdictFailure;
}

// ---------------------------------------------------------------------------
// fuzz

struct FuzzArgs {
  std::string seed;
  int trials = 1000;
  std::string dims = "2..8";
  std::string out_path;
  std::string csv_path;
  double tol = kDefaultRelativeTolerance;
  int threads = 1;
  std::vector<std::string> skip;
  std::vector<std::string> suites;
  std::vector<std::string> functions;
  std::vector<std::string> maps;
  bool positive_intervals = false;
};

int cmd_fuzz(const FuzzArgs& a, std::ostream& out) {
  TrialSpec spec;
  spec.seed = a.seed.empty() ? default_seed() : parse_seed(a.seed);
  spec.trials = a.trials;
  std::tie(spec.dim_lo, spec.dim_hi) = parse_dim_range(a.dims);
  spec.tolerance = a.tol;
  spec.threads = a.threads;
  spec.skip = a.skip;
  if (!a.suites.empty()) spec.suites = a.suites;
  if (!a.functions.empty()) spec.functions = a.functions;
  if (!a.maps.empty()) spec.maps = a.maps;
  spec.positive_intervals = a.positive_intervals;
  spec.record_rows = !a.csv_path.empty();
  validate(spec);

  std::ofstream json_file;
  std::ofstream csv_file;
  if (!a.out_path.empty()) {
    json_file.open(a.out_path);
    if (!json_file) throw BadParameter("cannot write '" + a.out_path + "'");
  }
  if (!a.csv_path.empty()) {
    csv_file.open(a.csv_path);
    if (!csv_file) throw BadParameter("cannot write '" + a.csv_path + "'");
  }

  const auto report = run_campaign(spec);
  const std::string text = dump(Json(report));
  if (!a.csv_path.empty()) write_slack_csv(csv_file, report);
  if (a.out_path.empty()) {
    out << text;
  } else {
    json_file << text;
    out << "fuzz: seed " << spec.seed << ", " << spec.trials << " trials, dims " << spec.dim_lo << ".."
        << spec.dim_hi << "\n";
    out << "  " << pad("inequality", 30) << pad("trials", 8) << pad("fail", 6) << "worst slack\n";
    for (const auto& s : report.stats)
      out << "  " << pad(s.name, 30) << pad(std::to_string(s.trials), 8) << pad(std::to_string(s.fail), 6)
          << g6(s.worst_slack) << "\n";
    for (const auto& o : report.observations)
      out << "  observed " << o.name << ": spectrum in [" << g6(o.min_eigenvalue) << ", " << g6(o.max_eigenvalue)
          << "], psd " << o.positive_semidefinite << ", nsd " << o.negative_semidefinite << ", indefinite "
          << o.indefinite << " (not asserted)\n";
    out << "  total failures: " << report.total_failures() << "\n";
  }
  return report.total_failures() == 0 ? kExitPass : kExitVerdictFailure;
}

// ---------------------------------------------------------------------------
// paper-examples

int cmd_examples(bool json, std::ostream& out) {
  const auto checks = worked_example_checks();
  bool all = true;
  for (const auto& c : checks) all = all && c.pass();
  if (json) {
    Json arr = Json::array();
    for (const auto& c : checks)
      arr.push_back({{"label", c.label},
                     {"computed", c.computed},
                     {"expected", c.expected},
                     {"exact", c.exact},
                     {"tolerance", c.tolerance},
                     {"pass", c.pass()}});
    out << dump(Json{{"checks", arr}, {"all_pass", all}});
  } else {
    for (const auto& c : checks) {
      out << pad(c.label, 34) << pad(pass_fail(c.pass()), 6) << "computed " << pad(g6(c.computed), 12)
          << "expected " << pad(c.exact.empty() ? g6(c.expected) : c.exact, 12) << "tol " << g6(c.tolerance)
          << "\n";
    }
    out << (all ? "all worked examples match\n" : "worked examples MISMATCH\n");
  }
  return all ? kExitPass : kExitVerdictFailure;
}

// ---------------------------------------------------------------------------
// entropy

struct EntropyArgs {
  std::string rho;
  int random = 0;
  double p = 0.5;
  std::string seed;
  bool json = false;
};

struct EntropyRow {
  Index dim = 0;
  double S = 0;
  double S_p = 0;
  EntropyBoundReport von_neumann;
  EntropyBoundReport tsallis;
  double m = 0;
  double M = 0;

  bool holds() const { return von_neumann.holds() && tsallis.holds(); }
};

EntropyRow entropy_row(const DensityOperator& rho, double p) {
  EntropyRow row;
  row.dim = rho.dim();
  row.S = von_neumann_entropy(rho);
  row.S_p = quantum_tsallis_entropy(rho, p);
  row.von_neumann = von_neumann_lower_bound(rho);
  row.tsallis = corollary32_lower_bound(rho, p);
  row.m = rho.m();
  row.M = rho.M();
  return row;
}

int cmd_entropy(const EntropyArgs& a, std::ostream& out) {
  if (!(std::abs(a.p) <= 1) || a.p == 0) throw BadParameter("--p must lie in [-1, 1] \\ {0}");
  if (a.rho.empty() == (a.random == 0)) throw BadParameter("give exactly one of --rho or --random");
  if (a.random < 0) throw BadParameter("--random must be positive");

  std::vector<EntropyRow> rows;
  if (!a.rho.empty()) {
    rows.push_back(entropy_row(DensityOperator::create(read_matrix_file(a.rho)), a.p));
  } else {
    const std::uint64_t seed = a.seed.empty() ? default_seed() : parse_seed(a.seed);
    for (int i = 0; i < a.random; ++i) {
      SplitMix64 rng(derive_seed(seed, std::uint64_t(i)));
      const Index dim = Index(rng.uniform_int(2, 6));
      rows.push_back(entropy_row(random_density(rng.next(), dim), a.p));
    }
  }
  bool all = true;
  for (const auto& r : rows) all = all && r.holds();

  if (a.json) {
    Json arr = Json::array();
    for (const auto& r : rows)
      arr.push_back({{"dim", r.dim},
                     {"m", r.m},
                     {"M", r.M},
                     {"S", r.S},
                     {"S_p", r.S_p},
                     {"von_neumann", {{"bound", r.von_neumann.bound},
                                      {"entropy_vs_bound", r.von_neumann.entropy_vs_bound},
                                      {"bound_nonnegative", r.von_neumann.bound_nonnegative}}},
                     {"tsallis", {{"bound", r.tsallis.bound},
                                  {"entropy_vs_bound", r.tsallis.entropy_vs_bound},
                                  {"bound_nonnegative", r.tsallis.bound_nonnegative}}},
                     {"holds", r.holds()}});
    out << dump(Json{{"p", a.p}, {"rows", arr}, {"all_hold", all}});
  } else {
    out << pad("#", 5) << pad("dim", 5) << pad("S", 12) << pad("vN bound", 12) << pad("slack", 13) << pad("S_p", 12)
        << pad("S_p bound", 12) << pad("slack", 13) << "verdict\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      out << pad(std::to_string(i), 5) << pad(std::to_string(r.dim), 5) << pad(g6(r.S), 12)
          << pad(g6(r.von_neumann.bound), 12) << pad(g6(r.von_neumann.entropy_vs_bound.slack), 13)
          << pad(g6(r.S_p), 12) << pad(g6(r.tsallis.bound), 12) << pad(g6(r.tsallis.entropy_vs_bound.slack), 13)
          << pass_fail(r.holds()) << "\n";
    }
    out << (all ? "all entropy bounds hold\n" : "some entropy bounds FAILED\n");
  }
  return all ? kExitPass : kExitVerdictFailure;
}

}  // namespace

// ---------------------------------------------------------------------------

PositiveUnitalMap parse_map_spec(const std::string& spec, Index dim) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "identity" && arg.empty()) return PositiveUnitalMap::identity(dim);
  if (head == "trace" && arg.empty()) return PositiveUnitalMap::normalized_trace(dim);
  if (head == "corner") {
    Index k = dim - 1;
    if (colon != std::string::npos) {
      std::size_t used = 0;
      try {
        k = Index(std::stol(arg, &used));
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != arg.size()) throw BadParameter("invalid corner size '" + arg + "'");
    }
    if (k < 1 || k > dim) throw BadParameter("corner size must lie in [1, dim]");
    return PositiveUnitalMap::corner(dim, k);
  }
  if (head == "vecstate") {
    if (arg.empty()) throw BadParameter("vecstate needs ':uniform' or ':<vector file>'");
    Eigen::VectorXd x = arg == "uniform" ? Eigen::VectorXd::Constant(dim, 1.0 / std::sqrt(double(dim)))
                                         : read_vector_file(arg);
    if (x.size() != dim) throw ShapeError("vecstate vector has the wrong length");
    return PositiveUnitalMap::vector_state(std::move(x));
  }
  throw BadParameter("unknown map '" + spec + "'");
}

SymMat worked_example_matrix(WorkedExample which) {
  switch (which) {
    case WorkedExample::Counterexample:
      return SymMat::from_rows({{4, 1, -1}, {1, 2, 1}, {-1, 1, 2}});
    case WorkedExample::JensenGap:
      return SymMat::from_rows({{1, 0, -1}, {0, 3, 1}, {-1, 1, 2}});
    case WorkedExample::Kantorovich:
      return SymMat::from_rows({{3, -2}, {-2, 7}});
  }
  throw BadParameter("unknown worked example");
}

Eigen::VectorXd worked_example_vector() { return Eigen::VectorXd::Constant(3, 1.0 / std::sqrt(3.0)); }

bool ExampleCheck::pass() const { return std::abs(computed - expected) <= tolerance; }

std::vector<ExampleCheck> worked_example_checks() {
  std::vector<ExampleCheck> checks;
  auto add = [&](std::string label, double computed, double expected, double tol, std::string exact = "") {
    checks.push_back({std::move(label), computed, expected, tol, std::move(exact)});
  };

  {
    const SymMat A = worked_example_matrix(WorkedExample::Counterexample);
    const auto phi = PositiveUnitalMap::corner(3, 2);
    const SymMat P = apply(phi, A);
    const SymMat P4 = square(square(P));
    const SymMat PA4 = apply(phi, square(square(A)));
    add("counterexample Phi(A)^4 [1,1]", P4(0, 0), 325, 1e-9, "325");
    add("counterexample Phi(A)^4 [1,2]", P4(0, 1), 132, 1e-9, "132");
    add("counterexample Phi(A)^4 [2,2]", P4(1, 1), 61, 1e-9, "61");
    add("counterexample Phi(A^4) [1,1]", PA4(0, 0), 374, 1e-9, "374");
    add("counterexample Phi(A^4) [1,2]", PA4(0, 1), 105, 1e-9, "105");
    add("counterexample Phi(A^4) [2,2]", PA4(1, 1), 70, 1e-9, "70");
    const bool incomparable = loewner_compare(P4, PA4).relation == LoewnerRelation::Incomparable;
    add("counterexample incomparable", incomparable ? 1 : 0, 1, 0, "1");
  }
  {
    const SymMat A = worked_example_matrix(WorkedExample::JensenGap);
    const auto phi = PositiveUnitalMap::vector_state(worked_example_vector());
    const auto ctx = build_context(A, phi, parse_function("power:3"), 0.25, 3.8);
    const auto upper = theorem1_upper(ctx);
    const auto converse = theorem1_converse(ctx);
    add("jensen f(Phi(A))", ctx.f_phiA.value(), 8, 1e-9, "8");
    add("jensen Phi(f(A))", ctx.phi_fA.value(), 24, 1e-9, "24");
    add("jensen alpha", ctx.bounds.alpha, 1.5, 1e-9, "3/2");
    add("jensen beta", ctx.bounds.beta, 22.8, 1e-9, "114/5");
    add("jensen upper bound", upper.rhs.value(), 27.14, 0.01);
    add("jensen converse bound", converse.rhs.value(), 43.54, 0.01);
    add("jensen upper holds", upper.holds() ? 1 : 0, 1, 0, "1");
    add("jensen converse holds", converse.holds() ? 1 : 0, 1, 0, "1");
  }
  {
    const SymMat A = worked_example_matrix(WorkedExample::Kantorovich);
    const auto phi = PositiveUnitalMap::normalized_trace(2);
    const auto k = improved_kantorovich(A, phi, 2.0, 8.0);
    const double classical_gap = k.classical_rhs.value() - k.lhs.value();
    const double improved_gap = k.improved_rhs.value() - k.lhs.value();
    add("kantorovich classical gap", classical_gap, 5.0 / 272, 1e-12, "5/272");
    add("kantorovich improved gap", improved_gap, 143.0 / 8704, 1e-12, "143/8704");
    add("kantorovich gap difference", classical_gap - improved_gap, 1.0 / 512, 1e-12, "1/512");
    add("kantorovich improved holds", k.improved.holds() ? 1 : 0, 1, 0, "1");
    add("kantorovich refinement holds", k.refinement.holds() ? 1 : 0, 1, 0, "1");
  }
  return checks;
}

std::pair<Index, Index> parse_dim_range(const std::string& text) {
  const auto dots = text.find("..");
  auto parse = [&](const std::string& part) {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size()) throw BadParameter("invalid dimension range '" + text + "'");
    return Index(v);
  };
  const Index lo = parse(dots == std::string::npos ? text : text.substr(0, dots));
  const Index hi = dots == std::string::npos ? lo : parse(text.substr(dots + 2));
  if (lo < 2 || hi < lo) throw BadParameter("dimension range must satisfy 2 <= lo <= hi");
  return {lo, hi};
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Choi-Davis-Jensen inequalities without convexity: checks, fuzzing and entropy bounds", "opineq"};
  app.require_subcommand(1);

  CheckArgs check_args;
  auto* check = app.add_subcommand("check", "Check the chord, Jensen-gap and K/k bounds on one instance");
  add_check_options(check, check_args, true);

  CheckArgs kant_args;
  auto* kant = app.add_subcommand("kantorovich", "check with f(t) = 1/t plus the sharpened Kantorovich bound");
  add_check_options(kant, kant_args, false);

  FuzzArgs fuzz_args;
  auto* fuzz = app.add_subcommand("fuzz", "Run a seeded random campaign over every inequality");
  fuzz->add_option("--seed", fuzz_args.seed, "Campaign seed (default: $OPINEQ_SEED or 42)");
  fuzz->add_option("--trials", fuzz_args.trials, "Number of trials")->capture_default_str();
  fuzz->add_option("--dims", fuzz_args.dims, "Dimension range lo..hi")->capture_default_str();
  fuzz->add_option("--out", fuzz_args.out_path, "Write the JSON report here (default: stdout)");
  fuzz->add_option("--csv", fuzz_args.csv_path, "Write the per-trial slack table here");
  fuzz->add_option("--tol", fuzz_args.tol, "Relative Loewner tolerance")->capture_default_str();
  fuzz->add_option("--threads", fuzz_args.threads, "Worker threads")->capture_default_str();
  fuzz->add_option("--skip", fuzz_args.skip, "Inequality names to leave out");
  fuzz->add_option("--suite", fuzz_args.suites, "Suites to run: cdj, power, kantorovich, perspective, entropy");
  fuzz->add_option("--function", fuzz_args.functions, "Catalog functions to cycle through");
  fuzz->add_option("--map", fuzz_args.maps, "Map tags to cycle through");
  fuzz->add_flag("--positive-intervals", fuzz_args.positive_intervals, "Keep every interval inside (0, inf)");

  bool examples_json = false;
  auto* examples = app.add_subcommand("paper-examples", "Reproduce the three worked examples");
  examples->add_flag("--json", examples_json, "Print a JSON report");

  EntropyArgs entropy_args;
  auto* entropy = app.add_subcommand("entropy", "Lower bounds on von Neumann and Tsallis entropies");
  entropy->add_option("--rho", entropy_args.rho, "Density matrix file");
  entropy->add_option("--random", entropy_args.random, "Number of random density matrices");
  entropy->add_option("--p", entropy_args.p, "Tsallis parameter in [-1, 1] \\ {0}")->capture_default_str();
  entropy->add_option("--seed", entropy_args.seed, "Seed for --random (default: $OPINEQ_SEED or 42)");
  entropy->add_flag("--json", entropy_args.json, "Print a JSON report");

  std::vector<std::string> storage{"opineq"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(check_args, false, out);
    if (kant->parsed()) return cmd_check(kant_args, true, out);
    if (fuzz->parsed()) return cmd_fuzz(fuzz_args, out);
    if (examples->parsed()) return cmd_examples(examples_json, out);
    if (entropy->parsed()) return cmd_entropy(entropy_args, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace opineq
