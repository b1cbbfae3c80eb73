#pragma once

#include <string>
#include <vector>

#include "secomp/law.hpp"
#include "secomp/source.hpp"

namespace secomp {

// Lower bound on a subset sum of rate variables.
struct RateConstraint {
  std::vector<int> vars;  // indices into ConstraintSet::variables
  double bound = 0.0;     // bits per symbol
  std::string family;     // "1a", "1b", "2a", ...
};

struct ConstraintSet {
  CaseTag case_tag = CaseTag::kCase1;
  std::vector<std::string> variables;  // "R1".."Rm", then "R'j"
  std::vector<RateConstraint> constraints;
  std::vector<double> objective;       // weight per variable
  double fixed_offset = 0.0;           // bits added outside the LP

  int index_of(const std::string& name) const;  // -1 if absent
};

struct RateVector {
  std::vector<double> values;
};

bool is_feasible(const ConstraintSet& cs, const RateVector& r, double tol = 1e-9);

ConstraintSet constraints_case1(const JointSource& src, const FunctionSpec& fns);
ConstraintSet constraints_case2(const JointSource& src, const FunctionSpec& fns);
ConstraintSet constraints_case3(const JointSource& src, const FunctionSpec& fns);
ConstraintSet build_constraints(const JointSource& src, const FunctionSpec& fns);

struct LpResult {
  double value = 0.0;  // LP optimum + fixed_offset
  double lp_value = 0.0;
  RateVector argmin;
  std::vector<double> duals;
  std::vector<int> active;
  double duality_gap = 0.0;
};

LpResult min_sum_rate(const ConstraintSet& cs);

// H(X2|X1) + H(G2|X2) + H(X1|X2,G0); two terminals, case 1.
double corollary1_closed_form(const JointSource& src, const FunctionSpec& fns);

enum class Verdict {
  kSecurelyComputable,
  kNotSecurelyComputable,
  kBoundary,
  kBoundOnly,
};

std::string_view to_string(Verdict v);

struct AnalysisReport {
  CaseTag case_tag = CaseTag::kCase1;
  double h_given_g0 = 0.0;   // H(X_M | G_0)
  double r_value = 0.0;      // R_constant for the case
  ConstraintSet constraints;
  RateVector argmin;
  Verdict verdict = Verdict::kBoundOnly;
  bool proven = false;        // R* = R_constant established for this shape
  std::string assumption_note;
  std::string certified;      // which direction of the comparison is certified
  // Case 1 only: value of the case-2 program on the same functions, and
  // its difference to r_value (reported, not interpreted).
  bool has_case2_value = false;
  double case2_value = 0.0;
};

inline constexpr double kVerdictTol = 1e-9;

AnalysisReport analyze(const JointSource& src, const FunctionSpec& fns);

struct TableRow {
  std::string g0, g1, g2;
  double tau = 0.0;
  Verdict verdict = Verdict::kBoundOnly;  // h(delta) against tau
  bool from_pipeline = false;
  double h_given_g0 = 0.0;   // pipeline rows only
  double r_value = 0.0;
};

struct Example1Table {
  double delta = 0.0;
  double h_delta = 0.0;
  std::vector<TableRow> rows;
};

// The four function choices on BSS(delta). Rows 1-2 carry the published
// thresholds; rows 3-4 derive tau from the analysis pipeline as
// tau = h(delta) * H(X_M|G_0) / R, which is exact because R is linear in h.
Example1Table example1_table(double delta);

// The BSS function tables used by the worked examples: XOR, AND, (XOR, AND),
// and the identity on X1.
namespace bss_tables {
std::vector<std::uint32_t> x_xor();
std::vector<std::uint32_t> x_and();
std::vector<std::uint32_t> xor_and();
std::vector<std::uint32_t> constant();
}  // namespace bss_tables

FunctionSpec example1_row(int row);  // 1..4 on the BSS alphabet

struct InteractiveCheck {
  double slack = 0.0;  // H(F) - H(F|X1^n) - H(F|X2^n)
  bool pass = false;
};

// Requires a two-terminal law; throws kWrongArity otherwise.
InteractiveCheck check_interactive_inequality(const TranscriptLaw& law);

}  // namespace secomp
