#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "secomp/source.hpp"

namespace secomp::cli {

struct Model {
  JointSource src;
  FunctionSpec fns;
};

// Parses a model document. Structural problems (wrong types, missing keys,
// wrong lengths) raise kParseError naming the field; semantic problems
// raise the library's own codes (kInvalidSpec, kDeltaOutOfRange, ...).
Model parse_model(const nlohmann::json& doc);
Model parse_model_text(const std::string& text);
Model load_model(const std::string& path);

nlohmann::json model_to_json(const Model& model);

}  // namespace secomp::cli
