#include "opineq/report_json.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace opineq {

namespace {

Eigen::VectorXd numbers_from_json(const Json& j, Index expected, const char* what) {
  if (!j.is_object()) throw InvalidMatrix(std::string(what) + ": expected a JSON object");
  if (!j.contains("dim") || !j.at("dim").is_number_integer())
    throw InvalidMatrix(std::string(what) + ": 'dim' must be an integer");
  if (!j.contains("data") || !j.at("data").is_array())
    throw InvalidMatrix(std::string(what) + ": 'data' must be an array");
  const auto& data = j.at("data");
  if (Index(data.size()) != expected)
    throw InvalidMatrix(std::string(what) + ": 'data' has " + std::to_string(data.size()) + " entries, expected " +
                        std::to_string(expected));
  Eigen::VectorXd out(expected);
  for (Index i = 0; i < expected; ++i) {
    const auto& x = data[std::size_t(i)];
    if (!x.is_number()) throw InvalidMatrix(std::string(what) + ": non-numeric entry");
    out(i) = x.get<double>();
  }
  return out;
}

Index dim_from_json(const Json& j, const char* what) {
  if (!j.is_object() || !j.contains("dim") || !j.at("dim").is_number_integer())
    throw InvalidMatrix(std::string(what) + ": 'dim' must be an integer");
  const auto n = j.at("dim").get<std::int64_t>();
  if (n < 1 || n > 4096) throw InvalidMatrix(std::string(what) + ": 'dim' out of range");
  return Index(n);
}

Json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidMatrix("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InvalidMatrix("'" + path + "' is not valid JSON: " + e.what());
  }
}

Json matrix_map_to_json(const std::map<std::string, SymMat>& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[k] = matrix_to_json(v);
  return j;
}

}  // namespace

SymMat matrix_from_json(const Json& j) {
  const Index n = dim_from_json(j, "matrix");
  const Eigen::VectorXd flat = numbers_from_json(j, n * n, "matrix");
  Eigen::MatrixXd a(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) a(r, c) = flat(r * n + c);
  return SymMat(a);
}

Json matrix_to_json(const SymMat& a) {
  Json data = Json::array();
  for (Index r = 0; r < a.dim(); ++r)
    for (Index c = 0; c < a.dim(); ++c) data.push_back(a(r, c));
  return Json{{"dim", a.dim()}, {"data", std::move(data)}};
}

SymMat read_matrix_file(const std::string& path) { return matrix_from_json(parse_file(path)); }

Eigen::VectorXd read_vector_file(const std::string& path) {
  const Json j = parse_file(path);
  return numbers_from_json(j, dim_from_json(j, "vector"), "vector");
}

LoewnerRelation loewner_relation_from_string(const std::string& s) {
  for (auto r : {LoewnerRelation::LessOrEqual, LoewnerRelation::GreaterOrEqual, LoewnerRelation::Equal,
                 LoewnerRelation::Incomparable})
    if (s == to_string(r)) return r;
  throw BadParameter("unknown Loewner relation '" + s + "'");
}

void to_json(Json& j, const LoewnerVerdict& v) {
  j = Json{{"relation", to_string(v.relation)},
           {"gap_min_eig", v.gap_min_eig},
           {"gap_max_eig", v.gap_max_eig},
           {"tolerance", v.tolerance_used}};
}

void from_json(const Json& j, LoewnerVerdict& v) {
  v.relation = loewner_relation_from_string(j.at("relation").get<std::string>());
  j.at("gap_min_eig").get_to(v.gap_min_eig);
  j.at("gap_max_eig").get_to(v.gap_max_eig);
  j.at("tolerance").get_to(v.tolerance_used);
}

void to_json(Json& j, const InequalityReport& r) {
  j = Json{{"label", r.label},
           {"holds", r.holds()},
           {"tightness", r.tightness},
           {"verdict", r.verdict},
           {"lhs", matrix_to_json(r.lhs)},
           {"rhs", matrix_to_json(r.rhs)}};
}

void from_json(const Json& j, InequalityReport& r) {
  j.at("label").get_to(r.label);
  j.at("tightness").get_to(r.tightness);
  j.at("verdict").get_to(r.verdict);
  r.lhs = matrix_from_json(j.at("lhs"));
  r.rhs = matrix_from_json(j.at("rhs"));
}

void to_json(Json& j, const ScalarCheck& c) {
  j = Json{{"label", c.label},   {"holds", c.holds()},         {"lhs", c.lhs},
           {"rhs", c.rhs},       {"slack", c.slack},           {"tolerance", c.tolerance}};
}

void from_json(const Json& j, ScalarCheck& c) {
  j.at("label").get_to(c.label);
  j.at("lhs").get_to(c.lhs);
  j.at("rhs").get_to(c.rhs);
  j.at("slack").get_to(c.slack);
  j.at("tolerance").get_to(c.tolerance);
}

void to_json(Json& j, const TrialSpec& s) {
  j = Json{{"seed", s.seed},
           {"dim_lo", s.dim_lo},
           {"dim_hi", s.dim_hi},
           {"trials", s.trials},
           {"functions", s.functions},
           {"maps", s.maps},
           {"powers", s.powers},
           {"tsallis_ps", s.tsallis_ps},
           {"suites", s.suites},
           {"skip", s.skip},
           {"positive_intervals", s.positive_intervals},
           {"tolerance", s.tolerance},
           {"threads", s.threads},
           {"record_rows", s.record_rows}};
}

void from_json(const Json& j, TrialSpec& s) {
  j.at("seed").get_to(s.seed);
  j.at("dim_lo").get_to(s.dim_lo);
  j.at("dim_hi").get_to(s.dim_hi);
  j.at("trials").get_to(s.trials);
  j.at("functions").get_to(s.functions);
  j.at("maps").get_to(s.maps);
  j.at("powers").get_to(s.powers);
  j.at("tsallis_ps").get_to(s.tsallis_ps);
  j.at("suites").get_to(s.suites);
  j.at("skip").get_to(s.skip);
  j.at("positive_intervals").get_to(s.positive_intervals);
  j.at("tolerance").get_to(s.tolerance);
  j.at("threads").get_to(s.threads);
  j.at("record_rows").get_to(s.record_rows);
}

void to_json(Json& j, const InequalityStats& s) {
  j = Json{{"name", s.name},
           {"trials", s.trials},
           {"pass", s.pass},
           {"fail", s.fail},
           {"worst_slack", s.worst_slack},
           {"tightest_slack", s.tightest_slack},
           {"mean_slack", s.mean_slack}};
}

void from_json(const Json& j, InequalityStats& s) {
  j.at("name").get_to(s.name);
  j.at("trials").get_to(s.trials);
  j.at("pass").get_to(s.pass);
  j.at("fail").get_to(s.fail);
  j.at("worst_slack").get_to(s.worst_slack);
  j.at("tightest_slack").get_to(s.tightest_slack);
  j.at("mean_slack").get_to(s.mean_slack);
}

void to_json(Json& j, const TermObservation& o) {
  j = Json{{"name", o.name},
           {"trials", o.trials},
           {"min_eigenvalue", o.min_eigenvalue},
           {"max_eigenvalue", o.max_eigenvalue},
           {"positive_semidefinite", o.positive_semidefinite},
           {"negative_semidefinite", o.negative_semidefinite},
           {"indefinite", o.indefinite}};
}

void from_json(const Json& j, TermObservation& o) {
  j.at("name").get_to(o.name);
  j.at("trials").get_to(o.trials);
  j.at("min_eigenvalue").get_to(o.min_eigenvalue);
  j.at("max_eigenvalue").get_to(o.max_eigenvalue);
  j.at("positive_semidefinite").get_to(o.positive_semidefinite);
  j.at("negative_semidefinite").get_to(o.negative_semidefinite);
  j.at("indefinite").get_to(o.indefinite);
}

void to_json(Json& j, const Reproducer& r) {
  j = Json{{"inequality", r.inequality},
           {"trial", r.trial},
           {"seed", r.seed},
           {"dim", r.dim},
           {"function", r.function},
           {"map", r.map},
           {"parameter", r.parameter},
           {"m", r.m},
           {"M", r.M},
           {"slack", r.slack},
           {"tolerance", r.tolerance},
           {"inputs", matrix_map_to_json(r.inputs)}};
}

void from_json(const Json& j, Reproducer& r) {
  j.at("inequality").get_to(r.inequality);
  j.at("trial").get_to(r.trial);
  j.at("seed").get_to(r.seed);
  j.at("dim").get_to(r.dim);
  j.at("function").get_to(r.function);
  j.at("map").get_to(r.map);
  j.at("parameter").get_to(r.parameter);
  j.at("m").get_to(r.m);
  j.at("M").get_to(r.M);
  j.at("slack").get_to(r.slack);
  j.at("tolerance").get_to(r.tolerance);
  r.inputs.clear();
  for (const auto& [k, v] : j.at("inputs").items()) r.inputs.emplace(k, matrix_from_json(v));
}

void to_json(Json& j, const SlackRow& r) {
  j = Json{{"inequality", r.inequality}, {"trial", r.trial}, {"dim", r.dim}, {"slack", r.slack}, {"pass", r.pass}};
}

void from_json(const Json& j, SlackRow& r) {
  j.at("inequality").get_to(r.inequality);
  j.at("trial").get_to(r.trial);
  j.at("dim").get_to(r.dim);
  j.at("slack").get_to(r.slack);
  j.at("pass").get_to(r.pass);
}

void to_json(Json& j, const CampaignReport& r) {
  j = Json{{"spec", r.spec},
           {"total_failures", r.total_failures()},
           {"stats", r.stats},
           {"observations", r.observations},
           {"failures", r.failures},
           {"rows", r.rows}};
}

void from_json(const Json& j, CampaignReport& r) {
  j.at("spec").get_to(r.spec);
  j.at("stats").get_to(r.stats);
  j.at("observations").get_to(r.observations);
  j.at("failures").get_to(r.failures);
  j.at("rows").get_to(r.rows);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_slack_csv(std::ostream& out, const CampaignReport& report) {
  out << "inequality,trial,dim,slack,pass\n";
  char slack[40];
  for (const auto& row : report.rows) {
    std::snprintf(slack, sizeof slack, "%.17g", row.slack);
    out << row.inequality << ',' << row.trial << ',' << row.dim << ',' << slack << ',' << (row.pass ? 1 : 0) << '\n';
  }
}

}  // namespace opineq
