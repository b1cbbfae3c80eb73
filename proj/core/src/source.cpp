#include "secomp/source.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "secomp/error.hpp"

namespace secomp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNegativeMass: return "NegativeMass";
    case ErrorCode::kMassSumOutOfTolerance: return "MassSumOutOfTolerance";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kDeltaOutOfRange: return "DeltaOutOfRange";
    case ErrorCode::kArgumentOutOfRange: return "ArgumentOutOfRange";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kWrongCaseTag: return "WrongCaseTag";
    case ErrorCode::kRecoverySetContainsSelf: return "RecoverySetContainsSelf";
    case ErrorCode::kWrongShape: return "WrongShape";
    case ErrorCode::kWrongArity: return "WrongArity";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kEnumerationCapExceeded: return "EnumerationCapExceeded";
    case ErrorCode::kRateVectorInfeasible: return "RateVectorInfeasible";
    case ErrorCode::kNoConsistentSequence: return "NoConsistentSequence";
    case ErrorCode::kCapExceeded: return "CapExceeded";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

std::size_t JointSource::cell_of(std::span<const int> symbols) const {
  if (symbols.size() != sizes_.size()) {
    throw Error(ErrorCode::kShapeMismatch, "symbol tuple has wrong arity");
  }
  std::size_t cell = 0;
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (symbols[i] < 0 || symbols[i] >= sizes_[i]) {
      throw Error(ErrorCode::kIndexOutOfRange, "symbol out of alphabet");
    }
    cell = cell * sizes_[i] + symbols[i];
  }
  return cell;
}

JointSource validate(std::vector<double> pmf, std::vector<int> alphabet_sizes) {
  const int m = static_cast<int>(alphabet_sizes.size());
  if (m < 2 || m > kMaxTerminals) {
    throw Error(ErrorCode::kShapeMismatch,
                "terminal count " + std::to_string(m) + " not in [2, " +
                    std::to_string(kMaxTerminals) + "]");
  }
  std::size_t cells = 1;
  for (int s : alphabet_sizes) {
    if (s < 1) throw Error(ErrorCode::kShapeMismatch, "alphabet size < 1");
    cells *= static_cast<std::size_t>(s);
    if (cells > (std::size_t{1} << 24)) {
      throw Error(ErrorCode::kShapeMismatch, "joint alphabet too large");
    }
  }
  if (pmf.size() != cells) {
    throw Error(ErrorCode::kShapeMismatch,
                "pmf has " + std::to_string(pmf.size()) + " entries, expected " +
                    std::to_string(cells));
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    if (!(pmf[k] >= 0.0) || !std::isfinite(pmf[k])) {
      throw Error(ErrorCode::kNegativeMass,
                  "pmf[" + std::to_string(k) + "] = " + std::to_string(pmf[k]));
    }
    sum += pmf[k];
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::kMassSumOutOfTolerance,
                "pmf sums to " + std::to_string(sum));
  }
  for (double& p : pmf) p /= sum;

  JointSource src;
  src.sizes_ = std::move(alphabet_sizes);
  src.pmf_ = std::move(pmf);
  src.digits_.resize(cells * m);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    std::size_t rest = cell;
    for (int i = m - 1; i >= 0; --i) {
      src.digits_[cell * m + i] = static_cast<int>(rest % src.sizes_[i]);
      rest /= src.sizes_[i];
    }
  }
  return src;
}

JointSource make_bss(double delta) {
  if (!(delta > 0.0 && delta < 0.5)) {
    throw Error(ErrorCode::kDeltaOutOfRange,
                "delta must lie in (0, 1/2), got " + std::to_string(delta));
  }
  const double same = (1.0 - delta) / 2.0;
  const double diff = delta / 2.0;
  return validate({same, diff, diff, same}, {2, 2});
}

double binary_entropy(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorCode::kArgumentOutOfRange,
                "binary entropy argument " + std::to_string(t));
  }
  if (t == 0.0 || t == 1.0) return 0.0;
  return -t * std::log2(t) - (1.0 - t) * std::log2(1.0 - t);
}

std::uint32_t FunctionSpec::range_size(int k) const {
  const auto& t = tables.at(k);
  if (t.empty()) return 1;
  return *std::max_element(t.begin(), t.end()) + 1;
}

std::vector<std::uint32_t> constant_table(const JointSource& src) {
  return std::vector<std::uint32_t>(src.cells(), 0);
}

std::vector<std::uint32_t> coordinate_table(const JointSource& src, TermSet a) {
  std::vector<std::uint32_t> t(src.cells(), 0);
  for (std::size_t cell = 0; cell < src.cells(); ++cell) {
    std::uint32_t v = 0;
    for (int i = 1; i <= src.m(); ++i) {
      if (a & term_bit(i)) {
        v = v * src.alphabet_sizes()[i - 1] + src.symbol(cell, i);
      }
    }
    t[cell] = v;
  }
  return t;
}

namespace {

FunctionSpec make_shared_g0(const JointSource& src, std::vector<std::uint32_t> g0,
                            int m0, std::vector<std::vector<std::uint32_t>> rest,
                            CaseTag tag) {
  const int m = src.m();
  if (m0 <= 0 || m0 >= m) {
    throw Error(ErrorCode::kInvalidSpec,
                "m0 must satisfy 0 < m0 < m, got m0 = " + std::to_string(m0));
  }
  if (static_cast<int>(rest.size()) != m - m0) {
    throw Error(ErrorCode::kShapeMismatch, "expected one table per terminal > m0");
  }
  FunctionSpec fns;
  fns.case_tag = tag;
  fns.m0 = m0;
  fns.tables.push_back(g0);
  for (int i = 1; i <= m0; ++i) fns.tables.push_back(g0);
  for (auto& t : rest) fns.tables.push_back(std::move(t));
  check_spec(src, fns);
  return fns;
}

}  // namespace

FunctionSpec make_case1(const JointSource& src, std::vector<std::uint32_t> g0,
                        int m0, std::vector<std::vector<std::uint32_t>> rest) {
  return make_shared_g0(src, std::move(g0), m0, std::move(rest), CaseTag::kCase1);
}

FunctionSpec make_case2(const JointSource& src, std::vector<std::uint32_t> g0,
                        int m0, std::vector<std::vector<std::uint32_t>> rest) {
  return make_shared_g0(src, std::move(g0), m0, std::move(rest), CaseTag::kCase2);
}

FunctionSpec make_case3(const JointSource& src, std::vector<std::uint32_t> g0,
                        std::vector<TermSet> recovery) {
  FunctionSpec fns;
  fns.case_tag = CaseTag::kCase3;
  fns.tables.push_back(std::move(g0));
  if (static_cast<int>(recovery.size()) != src.m()) {
    throw Error(ErrorCode::kShapeMismatch, "one recovery set per terminal");
  }
  for (int i = 1; i <= src.m(); ++i) {
    if (recovery[i - 1] & term_bit(i)) {
      throw Error(ErrorCode::kRecoverySetContainsSelf,
                  "M_" + std::to_string(i) + " contains terminal " +
                      std::to_string(i));
    }
    fns.tables.push_back(coordinate_table(src, recovery[i - 1]));
  }
  fns.recovery = std::move(recovery);
  check_spec(src, fns);
  return fns;
}

bool is_function_of(std::span<const std::uint32_t> b,
                    std::span<const std::uint32_t> a) {
  std::unordered_map<std::uint32_t, std::uint32_t> seen;
  for (std::size_t k = 0; k < a.size(); ++k) {
    auto [it, inserted] = seen.try_emplace(a[k], b[k]);
    if (!inserted && it->second != b[k]) return false;
  }
  return true;
}

void check_spec(const JointSource& src, const FunctionSpec& fns) {
  const int m = src.m();
  if (static_cast<int>(fns.tables.size()) != m + 1) {
    throw Error(ErrorCode::kWrongShape,
                "expected " + std::to_string(m + 1) + " function tables, got " +
                    std::to_string(fns.tables.size()));
  }
  for (int k = 0; k <= m; ++k) {
    if (fns.tables[k].size() != src.cells()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "table g_" + std::to_string(k) + " has wrong length");
    }
  }
  const auto& g0 = fns.tables[0];
  auto same_as_g0 = [&](int i) {
    return is_function_of(fns.tables[i], g0) && is_function_of(g0, fns.tables[i]);
  };
  switch (fns.case_tag) {
    case CaseTag::kCase1:
    case CaseTag::kCase2: {
      if (fns.m0 <= 0 || fns.m0 >= m) {
        throw Error(ErrorCode::kInvalidSpec,
                    "m0 must satisfy 0 < m0 < m, got m0 = " +
                        std::to_string(fns.m0));
      }
      for (int i = 1; i <= fns.m0; ++i) {
        if (!same_as_g0(i)) {
          throw Error(ErrorCode::kInvalidSpec,
                      "g_" + std::to_string(i) + " must equal g_0 for i <= m0");
        }
      }
      if (fns.case_tag == CaseTag::kCase1) {
        for (int i = fns.m0 + 1; i <= m; ++i) {
          if (!is_function_of(fns.tables[i], g0)) {
            throw Error(ErrorCode::kInvalidSpec,
                        "case 1 requires g_" + std::to_string(i) +
                            " to be a function of g_0");
          }
        }
      }
      break;
    }
    case CaseTag::kCase3: {
      if (static_cast<int>(fns.recovery.size()) != m) {
        throw Error(ErrorCode::kWrongShape, "case 3 needs one recovery set per terminal");
      }
      for (int i = 1; i <= m; ++i) {
        const TermSet mi = fns.recovery[i - 1];
        if (mi & ~all_terms(m)) {
          throw Error(ErrorCode::kIndexOutOfRange, "recovery set out of range");
        }
        if (mi & term_bit(i)) {
          throw Error(ErrorCode::kRecoverySetContainsSelf,
                      "M_" + std::to_string(i) + " contains terminal " +
                          std::to_string(i));
        }
        const auto want = coordinate_table(src, mi);
        if (!is_function_of(fns.tables[i], want) ||
            !is_function_of(want, fns.tables[i])) {
          throw Error(ErrorCode::kInvalidSpec,
                      "case 3 requires g_" + std::to_string(i) + " = X_{M_" +
                          std::to_string(i) + "}");
        }
      }
      break;
    }
  }
}

EntropyEngine::EntropyEngine(const JointSource& src, const FunctionSpec& fns)
    : m_(src.m()), law_(std::vector<double>(src.pmf().begin(), src.pmf().end())) {
  if (static_cast<int>(fns.tables.size()) != m_ + 1) {
    throw Error(ErrorCode::kWrongShape, "function spec does not match source");
  }
  for (int i = 1; i <= m_; ++i) {
    std::vector<std::uint32_t> col(src.cells());
    for (std::size_t cell = 0; cell < src.cells(); ++cell) {
      col[cell] = static_cast<std::uint32_t>(src.symbol(cell, i));
    }
    law_.add_column("X" + std::to_string(i), std::move(col));
  }
  for (int k = 0; k <= m_; ++k) {
    if (fns.tables[k].size() != src.cells()) {
      throw Error(ErrorCode::kShapeMismatch, "function table length mismatch");
    }
    law_.add_column("G" + std::to_string(k), fns.tables[k]);
  }
}

std::vector<int> EntropyEngine::columns(RvExpr e) const {
  if ((e.coords & ~all_terms(m_)) != 0 ||
      (e.funcs & ~((FuncSet{1} << (m_ + 1)) - 1)) != 0) {
    throw Error(ErrorCode::kIndexOutOfRange, "expression references unknown rv");
  }
  std::vector<int> cols;
  for (int i = 1; i <= m_; ++i) {
    if (e.coords & term_bit(i)) cols.push_back(i - 1);
  }
  for (int k = 0; k <= m_; ++k) {
    if (e.funcs & func_bit(k)) cols.push_back(m_ + k);
  }
  return cols;
}

double EntropyEngine::entropy(RvExpr e) const { return law_.entropy(columns(e)); }

double EntropyEngine::cond_entropy(RvExpr target, RvExpr given) const {
  return law_.cond_entropy(columns(target), columns(given));
}

double EntropyEngine::mutual_information(RvExpr a, RvExpr b, RvExpr given) const {
  return law_.mutual_information(columns(a), columns(b), columns(given));
}

double cond_entropy(const JointSource& src, const FunctionSpec& fns,
                    RvExpr target, RvExpr given) {
  return EntropyEngine(src, fns).cond_entropy(target, given);
}

double mutual_information(const JointSource& src, const FunctionSpec& fns,
                          RvExpr a, RvExpr b, RvExpr given) {
  return EntropyEngine(src, fns).mutual_information(a, b, given);
}

}  // namespace secomp
