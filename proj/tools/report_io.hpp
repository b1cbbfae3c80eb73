#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "secomp/coloring.hpp"
#include "secomp/protocol.hpp"
#include "secomp/rate_region.hpp"

namespace secomp {

// Lossless JSON forms of the library reports; nlohmann finds these by ADL.
void to_json(nlohmann::json& j, const ConstraintSet& cs);
void from_json(const nlohmann::json& j, ConstraintSet& cs);
void to_json(nlohmann::json& j, const AnalysisReport& rep);
void from_json(const nlohmann::json& j, AnalysisReport& rep);
void to_json(nlohmann::json& j, const Example1Table& table);
void from_json(const nlohmann::json& j, Example1Table& table);
void to_json(nlohmann::json& j, const RunReport& rep);
void from_json(const nlohmann::json& j, RunReport& rep);

Verdict verdict_from_string(const std::string& s);
CaseTag case_from_string(const std::string& s);

namespace coloring {
void to_json(nlohmann::json& j, const HypothesisReport& rep);
void from_json(const nlohmann::json& j, HypothesisReport& rep);
void to_json(nlohmann::json& j, const FailureExperiment& ex);
void from_json(const nlohmann::json& j, FailureExperiment& ex);
}  // namespace coloring

namespace cli {

inline constexpr const char* kToolName = "secomp";
inline constexpr const char* kToolVersion = "0.1.0";

// {"tool", "version", "command", "seed", "timestamp", "report"}.
nlohmann::json envelope(const std::string& command, std::uint64_t seed,
                        nlohmann::json report);
std::string utc_timestamp();

// The envelope without its timestamp, for determinism comparisons.
nlohmann::json strip_timestamp(nlohmann::json doc);

// "metric<TAB>value" rows, one per leaf, keys joined by '.' and array
// positions written as [k].
std::string to_tsv(const nlohmann::json& doc);

}  // namespace cli
}  // namespace secomp
