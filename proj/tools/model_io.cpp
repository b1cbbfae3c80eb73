#include "model_io.hpp"

#include <fstream>
#include <sstream>

#include "secomp/error.hpp"

namespace secomp::cli {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::kParseError, "field '" + field + "': " + what);
}

const json& require(const json& doc, const char* key) {
  if (!doc.contains(key)) field_error(key, "missing");
  return doc.at(key);
}

int as_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) field_error(field, "expected an integer");
  return v.get<int>();
}

double as_double(const json& v, const std::string& field) {
  if (!v.is_number()) field_error(field, "expected a number");
  return v.get<double>();
}

std::vector<std::uint32_t> as_table(const json& v, const std::string& field,
                                    std::size_t cells) {
  if (!v.is_array()) field_error(field, "expected an array");
  if (v.size() != cells) {
    field_error(field, "expected " + std::to_string(cells) + " entries, got " +
                           std::to_string(v.size()));
  }
  std::vector<std::uint32_t> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const auto& e = v[k];
    if (!e.is_number_unsigned() && !(e.is_number_integer() && e.get<long long>() >= 0)) {
      field_error(field + "[" + std::to_string(k) + "]", "expected a non-negative integer");
    }
    out.push_back(e.get<std::uint32_t>());
  }
  return out;
}

CaseTag parse_case(const json& v) {
  std::string s;
  if (v.is_string()) {
    s = v.get<std::string>();
  } else if (v.is_number_integer()) {
    s = std::to_string(v.get<int>());
  } else {
    field_error("case", "expected \"1\", \"2\" or \"3\"");
  }
  if (s == "1") return CaseTag::kCase1;
  if (s == "2") return CaseTag::kCase2;
  if (s == "3") return CaseTag::kCase3;
  field_error("case", "expected \"1\", \"2\" or \"3\", got \"" + s + "\"");
}

JointSource parse_source(const json& doc) {
  if (doc.contains("bss_delta")) {
    const double delta = as_double(doc.at("bss_delta"), "bss_delta");
    if (doc.contains("m") && as_int(doc.at("m"), "m") != 2) {
      field_error("m", "bss_delta requires m = 2");
    }
    return make_bss(delta);
  }
  const int m = as_int(require(doc, "m"), "m");
  if (m < 2 || m > kMaxTerminals) {
    field_error("m", "expected 2.." + std::to_string(kMaxTerminals));
  }
  const json& sizes_v = require(doc, "alphabet_sizes");
  if (!sizes_v.is_array() || static_cast<int>(sizes_v.size()) != m) {
    field_error("alphabet_sizes", "expected an array of m = " + std::to_string(m) + " sizes");
  }
  std::vector<int> sizes;
  std::size_t cells = 1;
  for (std::size_t i = 0; i < sizes_v.size(); ++i) {
    const int a = as_int(sizes_v[i], "alphabet_sizes[" + std::to_string(i) + "]");
    if (a < 1) field_error("alphabet_sizes[" + std::to_string(i) + "]", "must be >= 1");
    sizes.push_back(a);
    cells *= static_cast<std::size_t>(a);
    if (cells > (std::size_t{1} << 24)) field_error("alphabet_sizes", "too many joint symbols");
  }
  const json& pmf_v = require(doc, "pmf");
  if (!pmf_v.is_array()) field_error("pmf", "expected an array");
  if (pmf_v.size() != cells) {
    field_error("pmf", "expected " + std::to_string(cells) + " entries, got " +
                           std::to_string(pmf_v.size()));
  }
  std::vector<double> pmf;
  for (std::size_t k = 0; k < pmf_v.size(); ++k) {
    pmf.push_back(as_double(pmf_v[k], "pmf[" + std::to_string(k) + "]"));
  }
  return validate(std::move(pmf), std::move(sizes));
}

}  // namespace

Model parse_model(const json& doc) {
  if (!doc.is_object()) field_error("<root>", "expected an object");
  Model model{parse_source(doc), {}};
  const JointSource& src = model.src;
  const int m = src.m();
  const std::size_t cells = src.cells();
  FunctionSpec& fns = model.fns;
  fns.case_tag = parse_case(require(doc, "case"));

  std::vector<std::vector<std::uint32_t>> given(m + 1);
  if (doc.contains("functions")) {
    const json& fv = doc.at("functions");
    if (!fv.is_array()) field_error("functions", "expected an array");
    for (std::size_t k = 0; k < fv.size(); ++k) {
      const std::string field = "functions[" + std::to_string(k) + "]";
      const json& f = fv[k];
      if (!f.is_object()) field_error(field, "expected an object");
      if (!f.contains("index")) field_error(field + ".index", "missing");
      const int index = as_int(f.at("index"), field + ".index");
      if (index < 0 || index > m) field_error(field + ".index", "expected 0..m");
      if (!given[index].empty()) field_error(field + ".index", "duplicate function index");
      if (!f.contains("table")) field_error(field + ".table", "missing");
      given[index] = as_table(f.at("table"), field + ".table", cells);
    }
  }
  if (given[0].empty()) given[0] = constant_table(src);

  if (fns.case_tag == CaseTag::kCase3) {
    const json& rv = require(doc, "recovery_sets");
    if (!rv.is_array() || static_cast<int>(rv.size()) != m) {
      field_error("recovery_sets", "expected one set per terminal");
    }
    std::vector<TermSet> rec;
    for (int i = 0; i < m; ++i) {
      const std::string field = "recovery_sets[" + std::to_string(i) + "]";
      if (!rv[i].is_array()) field_error(field, "expected an array of terminals");
      TermSet s = 0;
      for (const auto& t : rv[i]) {
        const int term = as_int(t, field);
        if (term < 1 || term > m) field_error(field, "terminal out of range 1..m");
        s |= term_bit(term);
      }
      rec.push_back(s);
    }
    fns = make_case3(src, given[0], rec);
    for (int k = 1; k <= m; ++k) {
      if (!given[k].empty()) fns.tables[k] = given[k];
    }
  } else {
    const int m0 = as_int(require(doc, "m0"), "m0");
    if (m0 < 1 || m0 >= m) field_error("m0", "expected 1..m-1");
    fns.m0 = m0;
    fns.tables.assign(m + 1, {});
    fns.tables[0] = given[0];
    for (int k = 1; k <= m; ++k) {
      if (!given[k].empty()) {
        fns.tables[k] = given[k];
      } else {
        fns.tables[k] = k <= m0 ? given[0] : constant_table(src);
      }
    }
  }
  check_spec(src, fns);
  return model;
}

Model parse_model_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t k = 0; k < e.byte && k < text.size(); ++k) line += text[k] == '\n';
    throw Error(ErrorCode::kParseError, "line " + std::to_string(line) + ": " + e.what());
  }
  return parse_model(doc);
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot read model file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_model_text(text.str());
}

json model_to_json(const Model& model) {
  const auto& src = model.src;
  const auto& fns = model.fns;
  json doc;
  doc["m"] = src.m();
  doc["alphabet_sizes"] = std::vector<int>(src.alphabet_sizes().begin(), src.alphabet_sizes().end());
  doc["pmf"] = std::vector<double>(src.pmf().begin(), src.pmf().end());
  doc["case"] = std::to_string(static_cast<int>(fns.case_tag));
  if (fns.case_tag == CaseTag::kCase3) {
    json rec = json::array();
    for (TermSet s : fns.recovery) {
      json set = json::array();
      for (int i = 1; i <= src.m(); ++i) {
        if (s & term_bit(i)) set.push_back(i);
      }
      rec.push_back(set);
    }
    doc["recovery_sets"] = rec;
  } else {
    doc["m0"] = fns.m0;
  }
  json funcs = json::array();
  for (std::size_t k = 0; k < fns.tables.size(); ++k) {
    funcs.push_back({{"index", k}, {"table", fns.tables[k]}});
  }
  doc["functions"] = funcs;
  return doc;
}

}  // namespace secomp::cli
