#include "report_io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "secomp/error.hpp"

namespace secomp {

using nlohmann::json;

Verdict verdict_from_string(const std::string& s) {
  for (Verdict v : {Verdict::kSecurelyComputable, Verdict::kNotSecurelyComputable,
                    Verdict::kBoundary, Verdict::kBoundOnly}) {
    if (to_string(v) == s) return v;
  }
  throw Error(ErrorCode::kParseError, "unknown verdict '" + s + "'");
}

CaseTag case_from_string(const std::string& s) {
  if (s == "1") return CaseTag::kCase1;
  if (s == "2") return CaseTag::kCase2;
  if (s == "3") return CaseTag::kCase3;
  throw Error(ErrorCode::kParseError, "unknown case '" + s + "'");
}

namespace {

std::string case_string(CaseTag t) { return std::to_string(static_cast<int>(t)); }

}  // namespace

void to_json(json& j, const ConstraintSet& cs) {
  json rows = json::array();
  for (const auto& c : cs.constraints) {
    json names = json::array();
    for (int v : c.vars) names.push_back(cs.variables.at(v));
    rows.push_back({{"family", c.family}, {"vars", names}, {"bound", c.bound}});
  }
  j = {{"case", case_string(cs.case_tag)},
       {"variables", cs.variables},
       {"objective", cs.objective},
       {"fixed_offset", cs.fixed_offset},
       {"constraints", rows}};
}

void from_json(const json& j, ConstraintSet& cs) {
  cs.case_tag = case_from_string(j.at("case").get<std::string>());
  cs.variables = j.at("variables").get<std::vector<std::string>>();
  cs.objective = j.at("objective").get<std::vector<double>>();
  cs.fixed_offset = j.at("fixed_offset").get<double>();
  cs.constraints.clear();
  for (const auto& row : j.at("constraints")) {
    RateConstraint c;
    c.family = row.at("family").get<std::string>();
    c.bound = row.at("bound").get<double>();
    for (const auto& name : row.at("vars")) {
      const int v = cs.index_of(name.get<std::string>());
      if (v < 0) throw Error(ErrorCode::kParseError, "constraint names unknown variable");
      c.vars.push_back(v);
    }
    cs.constraints.push_back(std::move(c));
  }
}

void to_json(json& j, const AnalysisReport& rep) {
  j = {{"case", case_string(rep.case_tag)},
       {"h_given_g0", rep.h_given_g0},
       {"r_value", rep.r_value},
       {"verdict", std::string(to_string(rep.verdict))},
       {"proven", rep.proven},
       {"assumption_note", rep.assumption_note},
       {"certified", rep.certified},
       {"argmin", rep.argmin.values},
       {"constraints", rep.constraints}};
  j["case2_value"] = rep.has_case2_value ? json(rep.case2_value) : json(nullptr);
}

void from_json(const json& j, AnalysisReport& rep) {
  rep.case_tag = case_from_string(j.at("case").get<std::string>());
  rep.h_given_g0 = j.at("h_given_g0").get<double>();
  rep.r_value = j.at("r_value").get<double>();
  rep.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  rep.proven = j.at("proven").get<bool>();
  rep.assumption_note = j.at("assumption_note").get<std::string>();
  rep.certified = j.at("certified").get<std::string>();
  rep.argmin.values = j.at("argmin").get<std::vector<double>>();
  rep.constraints = j.at("constraints").get<ConstraintSet>();
  rep.has_case2_value = !j.at("case2_value").is_null();
  rep.case2_value = rep.has_case2_value ? j.at("case2_value").get<double>() : 0.0;
}

void to_json(json& j, const Example1Table& table) {
  json rows = json::array();
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    const auto& r = table.rows[k];
    rows.push_back({{"row", k + 1},
                    {"g0", r.g0},
                    {"g1", r.g1},
                    {"g2", r.g2},
                    {"tau", r.tau},
                    {"verdict", std::string(to_string(r.verdict))},
                    {"from_pipeline", r.from_pipeline},
                    {"h_given_g0", r.h_given_g0},
                    {"r_value", r.r_value}});
  }
  j = {{"delta", table.delta}, {"h_delta", table.h_delta}, {"rows", rows}};
}

void from_json(const json& j, Example1Table& table) {
  table.delta = j.at("delta").get<double>();
  table.h_delta = j.at("h_delta").get<double>();
  table.rows.clear();
  for (const auto& row : j.at("rows")) {
    TableRow r;
    r.g0 = row.at("g0").get<std::string>();
    r.g1 = row.at("g1").get<std::string>();
    r.g2 = row.at("g2").get<std::string>();
    r.tau = row.at("tau").get<double>();
    r.verdict = verdict_from_string(row.at("verdict").get<std::string>());
    r.from_pipeline = row.at("from_pipeline").get<bool>();
    r.h_given_g0 = row.at("h_given_g0").get<double>();
    r.r_value = row.at("r_value").get<double>();
    table.rows.push_back(std::move(r));
  }
}

void to_json(json& j, const RunReport& rep) {
  json rates = json::array();
  for (std::size_t k = 0; k < rep.rates.size(); ++k) {
    rates.push_back({{"name", rep.rate_names[k]}, {"value", rep.rates[k]}});
  }
  json messages = json::array();
  for (std::size_t k = 0; k < rep.message_names.size(); ++k) {
    messages.push_back({{"name", rep.message_names[k]}, {"cardinality", rep.message_sizes[k]}});
  }
  json terminals = json::array();
  for (const auto& t : rep.terminals) {
    terminals.push_back({{"terminal", t.terminal},
                         {"error_freq", t.error_freq},
                         {"error_exact", t.error_exact},
                         {"omniscience_error", t.omniscience_error}});
  }
  json keys = json::array();
  for (const auto& k : rep.keys) {
    keys.push_back({{"terminal", k.terminal},
                    {"size", k.size},
                    {"rate", k.rate},
                    {"uniformity_deficit", k.uniformity_deficit},
                    {"independence_leakage", k.independence_leakage}});
  }
  j = {{"case", case_string(rep.case_tag)},
       {"n", rep.n},
       {"seed", rep.seed},
       {"slack", rep.slack},
       {"trials", rep.trials},
       {"encrypt", rep.encrypt},
       {"rates", rates},
       {"messages", messages},
       {"terminals", terminals},
       {"mean_error_freq", rep.mean_error_freq},
       {"mean_error_exact", rep.mean_error_exact},
       {"leakage_per_symbol", rep.leakage_per_symbol},
       {"keys", keys},
       {"transcript_rate", rep.transcript_rate}};
  j["interactive_slack"] =
      rep.has_interactive_check ? json(rep.interactive_slack) : json(nullptr);
}

void from_json(const json& j, RunReport& rep) {
  rep = RunReport{};
  rep.case_tag = case_from_string(j.at("case").get<std::string>());
  rep.n = j.at("n").get<int>();
  rep.seed = j.at("seed").get<std::uint64_t>();
  rep.slack = j.at("slack").get<double>();
  rep.trials = j.at("trials").get<int>();
  rep.encrypt = j.at("encrypt").get<bool>();
  for (const auto& r : j.at("rates")) {
    rep.rate_names.push_back(r.at("name").get<std::string>());
    rep.rates.push_back(r.at("value").get<double>());
  }
  for (const auto& msg : j.at("messages")) {
    rep.message_names.push_back(msg.at("name").get<std::string>());
    rep.message_sizes.push_back(msg.at("cardinality").get<std::uint32_t>());
  }
  for (const auto& t : j.at("terminals")) {
    rep.terminals.push_back({t.at("terminal").get<int>(), t.at("error_freq").get<double>(),
                             t.at("error_exact").get<double>(),
                             t.at("omniscience_error").get<double>()});
  }
  rep.mean_error_freq = j.at("mean_error_freq").get<double>();
  rep.mean_error_exact = j.at("mean_error_exact").get<double>();
  rep.leakage_per_symbol = j.at("leakage_per_symbol").get<double>();
  for (const auto& k : j.at("keys")) {
    rep.keys.push_back({k.at("terminal").get<int>(), k.at("size").get<std::uint32_t>(),
                        k.at("rate").get<double>(), k.at("uniformity_deficit").get<double>(),
                        k.at("independence_leakage").get<double>()});
  }
  rep.transcript_rate = j.at("transcript_rate").get<double>();
  rep.has_interactive_check = !j.at("interactive_slack").is_null();
  if (rep.has_interactive_check) rep.interactive_slack = j.at("interactive_slack").get<double>();
}

namespace coloring {

void to_json(json& j, const HypothesisReport& rep) {
  j = {{"mass_u0", rep.mass_u0},
       {"mass_pass", rep.mass_pass},
       {"matching_pass", rep.matching_pass},
       {"matching_failures", rep.matching_failures},
       {"heavy_mass", rep.heavy_mass},
       {"heavy_pass", rep.heavy_pass}};
}

void from_json(const json& j, HypothesisReport& rep) {
  rep.mass_u0 = j.at("mass_u0").get<double>();
  rep.mass_pass = j.at("mass_pass").get<bool>();
  rep.matching_pass = j.at("matching_pass").get<bool>();
  rep.matching_failures = j.at("matching_failures").get<std::size_t>();
  rep.heavy_mass = j.at("heavy_mass").get<double>();
  rep.heavy_pass = j.at("heavy_pass").get<bool>();
}

void to_json(json& j, const FailureExperiment& ex) {
  j = {{"u_size", ex.u_size},
       {"r", ex.r},
       {"r_prime", ex.r_prime},
       {"v_size", ex.v_size},
       {"d", ex.d},
       {"lambda", ex.lambda},
       {"trials", ex.trials},
       {"threshold", ex.threshold},
       {"failures", ex.failures},
       {"fraction", ex.fraction},
       {"svar_mean", ex.svar_mean},
       {"svar_max", ex.svar_max},
       {"gap_max", ex.gap_max},
       {"bound_checked", ex.bound_checked},
       {"bound_violations", ex.bound_violations},
       {"worst_bound_excess", ex.worst_bound_excess},
       {"prefactor", ex.prefactor},
       {"exponent_per_c", ex.exponent_per_c},
       {"d_over_rr", ex.d_over_rr},
       {"svars", ex.svars}};
}

void from_json(const json& j, FailureExperiment& ex) {
  ex.u_size = j.at("u_size").get<std::size_t>();
  ex.r = j.at("r").get<std::uint32_t>();
  ex.r_prime = j.at("r_prime").get<std::uint32_t>();
  ex.v_size = j.at("v_size").get<std::size_t>();
  ex.d = j.at("d").get<double>();
  ex.lambda = j.at("lambda").get<double>();
  ex.trials = j.at("trials").get<int>();
  ex.threshold = j.at("threshold").get<double>();
  ex.failures = j.at("failures").get<int>();
  ex.fraction = j.at("fraction").get<double>();
  ex.svar_mean = j.at("svar_mean").get<double>();
  ex.svar_max = j.at("svar_max").get<double>();
  ex.gap_max = j.at("gap_max").get<double>();
  ex.bound_checked = j.at("bound_checked").get<int>();
  ex.bound_violations = j.at("bound_violations").get<int>();
  ex.worst_bound_excess = j.at("worst_bound_excess").get<double>();
  ex.prefactor = j.at("prefactor").get<double>();
  ex.exponent_per_c = j.at("exponent_per_c").get<double>();
  ex.d_over_rr = j.at("d_over_rr").get<double>();
  ex.svars = j.at("svars").get<std::vector<double>>();
}

}  // namespace coloring

namespace cli {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json envelope(const std::string& command, std::uint64_t seed, json report) {
  json doc;
  doc["tool"] = kToolName;
  doc["version"] = kToolVersion;
  doc["command"] = command;
  doc["seed"] = seed;
  doc["timestamp"] = utc_timestamp();
  doc["report"] = std::move(report);
  return doc;
}

json strip_timestamp(json doc) {
  doc.erase("timestamp");
  return doc;
}

namespace {

std::string scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "null";
  return v.dump();
}

void flatten(const json& v, const std::string& path, std::ostringstream& out) {
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) {
      flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
    }
  } else if (v.is_array()) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      flatten(v[k], path + "[" + std::to_string(k) + "]", out);
    }
  } else {
    out << path << '\t' << scalar(v) << '\n';
  }
}

}  // namespace

std::string to_tsv(const json& doc) {
  std::ostringstream out;
  out << "metric\tvalue\n";
  flatten(doc, "", out);
  return out.str();
}

}  // namespace cli
}  // namespace secomp
