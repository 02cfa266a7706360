#pragma once

// JSON and CSV serialization: matrix files, inequality reports and campaign
// reports. Doubles are written in shortest round-trip form, so
// parse(print(x)) == x bit for bit.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "opineq/verifier.hpp"

namespace opineq {

using Json = nlohmann::json;

/// {"dim": n, "data": [row-major n*n reals]}; strict about length and types.
SymMat matrix_from_json(const Json& j);
Json matrix_to_json(const SymMat& a);
/// Throws InvalidMatrix on unreadable or malformed files.
SymMat read_matrix_file(const std::string& path);
/// {"dim": n, "data": [n reals]} for vectors.
Eigen::VectorXd read_vector_file(const std::string& path);

LoewnerRelation loewner_relation_from_string(const std::string& s);

void to_json(Json& j, const LoewnerVerdict& v);
void from_json(const Json& j, LoewnerVerdict& v);
void to_json(Json& j, const InequalityReport& r);
void from_json(const Json& j, InequalityReport& r);
void to_json(Json& j, const ScalarCheck& c);
void from_json(const Json& j, ScalarCheck& c);
void to_json(Json& j, const TrialSpec& s);
void from_json(const Json& j, TrialSpec& s);
void to_json(Json& j, const InequalityStats& s);
void from_json(const Json& j, InequalityStats& s);
void to_json(Json& j, const Reproducer& r);
void from_json(const Json& j, Reproducer& r);
void to_json(Json& j, const SlackRow& r);
void from_json(const Json& j, SlackRow& r);
void to_json(Json& j, const TermObservation& o);
void from_json(const Json& j, TermObservation& o);
void to_json(Json& j, const CampaignReport& r);
void from_json(const Json& j, CampaignReport& r);

/// Pretty-printed with two-space indentation and a trailing newline.
std::string dump(const Json& j);

/// Header "inequality,trial,dim,slack,pass" then one line per row.
void write_slack_csv(std::ostream& out, const CampaignReport& report);

}  // namespace opineq
