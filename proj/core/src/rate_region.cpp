#include "secomp/rate_region.hpp"

#include <algorithm>
#include <cmath>

#include "secomp/error.hpp"
#include "secomp/lp.hpp"

namespace secomp {

namespace {

std::vector<int> rate_vars(TermSet l, int m) {
  std::vector<int> v;
  for (int i = 1; i <= m; ++i) {
    if (l & term_bit(i)) v.push_back(i - 1);
  }
  return v;
}

// Functions G_j selected by a TermSet over terminals j.
FuncSet funcs_of(TermSet s, int m) {
  FuncSet f = 0;
  for (int j = 1; j <= m; ++j) {
    if (s & term_bit(j)) f |= func_bit(j);
  }
  return f;
}

ConstraintSet base_set(CaseTag tag, int m) {
  ConstraintSet cs;
  cs.case_tag = tag;
  for (int i = 1; i <= m; ++i) cs.variables.push_back("R" + std::to_string(i));
  return cs;
}

void require_tag(const FunctionSpec& fns, CaseTag tag) {
  if (fns.case_tag != tag) {
    throw Error(ErrorCode::kWrongCaseTag,
                "expected case " + std::to_string(static_cast<int>(tag)) +
                    ", spec is case " +
                    std::to_string(static_cast<int>(fns.case_tag)));
  }
}

}  // namespace

int ConstraintSet::index_of(const std::string& name) const {
  auto it = std::find(variables.begin(), variables.end(), name);
  return it == variables.end() ? -1 : static_cast<int>(it - variables.begin());
}

bool is_feasible(const ConstraintSet& cs, const RateVector& r, double tol) {
  if (r.values.size() != cs.variables.size()) return false;
  for (double v : r.values) {
    if (v < -tol) return false;
  }
  for (const auto& c : cs.constraints) {
    double sum = 0.0;
    for (int v : c.vars) sum += r.values[v];
    if (sum < c.bound - tol) return false;
  }
  return true;
}

ConstraintSet constraints_case1(const JointSource& src, const FunctionSpec& fns) {
  require_tag(fns, CaseTag::kCase1);
  check_spec(src, fns);
  const int m = src.m();
  const EntropyEngine eng(src, fns);
  const TermSet full = all_terms(m);
  const TermSet head = term_range(1, fns.m0);
  ConstraintSet cs = base_set(CaseTag::kCase1, m);
  cs.objective.assign(m, 1.0);
  for (TermSet l = 1; l < full; ++l) {
    RateConstraint c;
    c.vars = rate_vars(l, m);
    if (contains(l, head)) {
      c.bound = eng.cond_entropy(RvExpr::x(l), RvExpr::x(full & ~l) | RvExpr::g(func_bit(0)));
      c.family = "1b";
    } else {
      c.bound = eng.cond_entropy(RvExpr::x(l), RvExpr::x(full & ~l));
      c.family = "1a";
    }
    cs.constraints.push_back(std::move(c));
  }
  for (int i = fns.m0 + 1; i <= m; ++i) {
    cs.fixed_offset += eng.cond_entropy(RvExpr::g(func_bit(i)), RvExpr::x(term_bit(i)));
  }
  return cs;
}

ConstraintSet constraints_case2(const JointSource& src, const FunctionSpec& fns) {
  require_tag(fns, CaseTag::kCase2);
  check_spec(src, fns);
  const int m = src.m();
  const int m0 = fns.m0;
  const EntropyEngine eng(src, fns);
  const TermSet full = all_terms(m);
  const TermSet head = term_range(1, m0);
  const TermSet tail = term_range(m0 + 1, m);
  ConstraintSet cs = base_set(CaseTag::kCase2, m);
  for (int j = m0 + 1; j <= m; ++j) cs.variables.push_back("R'" + std::to_string(j));
  cs.objective.assign(cs.variables.size(), 1.0);
  auto key_var = [&](int j) { return m + (j - m0 - 1); };

  for (TermSet l = 1; l < full; ++l) {
    if (contains(l, head)) continue;
    cs.constraints.push_back({rate_vars(l, m),
                              eng.cond_entropy(RvExpr::x(l), RvExpr::x(full & ~l)),
                              "2a"});
  }
  for (int j = m0 + 1; j <= m; ++j) {
    cs.constraints.push_back({{key_var(j)},
                              eng.cond_entropy(RvExpr::g(func_bit(j)), RvExpr::x(term_bit(j))),
                              "2b"});
  }
  for (TermSet l = 1; l <= full; ++l) {
    if (!contains(l, head)) continue;
    // every subset of the tail, including the empty one
    for (TermSet lp = 0;; lp = (lp - tail) & tail) {
      if (!(l == full && lp == tail)) {
        RateConstraint c;
        c.vars = rate_vars(l, m);
        for (int j = m0 + 1; j <= m; ++j) {
          if (lp & term_bit(j)) c.vars.push_back(key_var(j));
        }
        const RvExpr target = RvExpr::g(funcs_of(lp, m)) | RvExpr::x(l);
        const RvExpr given = RvExpr::g(funcs_of(tail & ~lp, m) | func_bit(0)) |
                             RvExpr::x(full & ~l);
        c.bound = eng.cond_entropy(target, given);
        c.family = "2c";
        cs.constraints.push_back(std::move(c));
      }
      if (lp == tail) break;
    }
  }
  return cs;
}

ConstraintSet constraints_case3(const JointSource& src, const FunctionSpec& fns) {
  require_tag(fns, CaseTag::kCase3);
  check_spec(src, fns);
  const int m = src.m();
  const EntropyEngine eng(src, fns);
  const TermSet full = all_terms(m);
  ConstraintSet cs = base_set(CaseTag::kCase3, m);
  cs.objective.assign(m, 1.0);
  for (int i = 1; i <= m; ++i) {
    const TermSet mi = fns.recovery[i - 1];
    for (TermSet l = 1; l <= mi; ++l) {
      if (l & ~mi) continue;
      cs.constraints.push_back(
          {rate_vars(l, m),
           eng.cond_entropy(RvExpr::x(l), RvExpr::x((mi & ~l) | term_bit(i))),
           "3a"});
    }
  }
  for (TermSet l = 1; l < full; ++l) {
    cs.constraints.push_back(
        {rate_vars(l, m),
         eng.cond_entropy(RvExpr::x(l), RvExpr::x(full & ~l) | RvExpr::g(func_bit(0))),
         "3b"});
  }
  return cs;
}

ConstraintSet build_constraints(const JointSource& src, const FunctionSpec& fns) {
  switch (fns.case_tag) {
    case CaseTag::kCase1: return constraints_case1(src, fns);
    case CaseTag::kCase2: return constraints_case2(src, fns);
    case CaseTag::kCase3: return constraints_case3(src, fns);
  }
  throw Error(ErrorCode::kWrongCaseTag, "unknown case");
}

LpResult min_sum_rate(const ConstraintSet& cs) {
  lp::CoveringProblem p;
  const std::size_t vars = cs.variables.size();
  p.c = cs.objective;
  if (p.c.size() != vars) {
    throw Error(ErrorCode::kNumericalFailure, "objective length mismatch");
  }
  for (const auto& c : cs.constraints) {
    if (c.vars.empty()) {
      throw Error(ErrorCode::kNumericalFailure, "constraint without variables");
    }
    std::vector<double> row(vars, 0.0);
    for (int v : c.vars) row.at(v) = 1.0;
    p.a.push_back(std::move(row));
    p.b.push_back(c.bound);
  }
  const auto sol = lp::solve_covering(p);
  LpResult r;
  r.lp_value = sol.value;
  r.value = sol.value + cs.fixed_offset;
  r.argmin.values = sol.x;
  r.duals = sol.y;
  r.active = sol.active;
  r.duality_gap = sol.duality_gap;
  return r;
}

double corollary1_closed_form(const JointSource& src, const FunctionSpec& fns) {
  if (src.m() != 2 || fns.case_tag != CaseTag::kCase1 || fns.m0 != 1) {
    throw Error(ErrorCode::kWrongShape,
                "closed form needs two terminals, case 1, m0 = 1");
  }
  check_spec(src, fns);
  const EntropyEngine eng(src, fns);
  const auto x1 = RvExpr::x(term_bit(1));
  const auto x2 = RvExpr::x(term_bit(2));
  return eng.cond_entropy(x2, x1) +
         eng.cond_entropy(RvExpr::g(func_bit(2)), x2) +
         eng.cond_entropy(x1, x2 | RvExpr::g(func_bit(0)));
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kSecurelyComputable: return "SecurelyComputable";
    case Verdict::kNotSecurelyComputable: return "NotSecurelyComputable";
    case Verdict::kBoundary: return "Boundary";
    case Verdict::kBoundOnly: return "BoundOnly";
  }
  return "Unknown";
}

AnalysisReport analyze(const JointSource& src, const FunctionSpec& fns) {
  check_spec(src, fns);
  const EntropyEngine eng(src, fns);
  const int m = src.m();
  AnalysisReport rep;
  rep.case_tag = fns.case_tag;
  rep.h_given_g0 = eng.cond_entropy(RvExpr::x(all_terms(m)), RvExpr::g(func_bit(0)));
  rep.constraints = build_constraints(src, fns);
  const auto lp = min_sum_rate(rep.constraints);
  rep.r_value = lp.value;
  rep.argmin = lp.argmin;

  if (fns.case_tag == CaseTag::kCase1 && m == 2) {
    rep.proven = true;
    rep.assumption_note =
        "proven: two-terminal case 1, constant communication is optimal by the "
        "interactive-communication inequality";
  } else if (fns.case_tag == CaseTag::kCase2 && m == 2) {
    const auto x1 = RvExpr::x(term_bit(1));
    const auto x2 = RvExpr::x(term_bit(2));
    const double lower = eng.cond_entropy(x2, x1) +
                         eng.cond_entropy(RvExpr::g(func_bit(2)), x2);
    if (std::abs(lower - rep.r_value) <= kVerdictTol) {
      rep.proven = true;
      rep.assumption_note =
          "proven: two-terminal case 2 whose value meets the interactive lower "
          "bound H(X2|X1) + H(G2|X2)";
    } else {
      rep.assumption_note =
          "assumed: two-terminal case 2 value exceeds the interactive lower "
          "bound; optimality of constant communication not established";
    }
  } else {
    rep.assumption_note =
        "assumed: optimality of constant communication not established for "
        "this shape";
  }

  const double diff = rep.h_given_g0 - rep.r_value;
  if (rep.proven) {
    if (std::abs(diff) <= kVerdictTol) {
      rep.verdict = Verdict::kBoundary;
      rep.certified = "none: equality, neither direction applies";
    } else if (diff > 0) {
      rep.verdict = Verdict::kSecurelyComputable;
      rep.certified = "both: H(X_M|G_0) vs R_constant decides computability";
    } else {
      rep.verdict = Verdict::kNotSecurelyComputable;
      rep.certified = "both: H(X_M|G_0) vs R_constant decides computability";
    }
  } else {
    rep.verdict = Verdict::kBoundOnly;
    if (diff > kVerdictTol) {
      rep.certified = "sufficient: H(X_M|G_0) > R_constant >= R*, securely computable";
    } else {
      rep.certified =
          "none: H(X_M|G_0) <= R_constant refutes only if constant "
          "communication is optimal";
    }
  }

  if (fns.case_tag == CaseTag::kCase1) {
    FunctionSpec as2 = fns;
    as2.case_tag = CaseTag::kCase2;
    rep.has_case2_value = true;
    rep.case2_value = min_sum_rate(constraints_case2(src, as2)).value;
  }
  return rep;
}

namespace bss_tables {
std::vector<std::uint32_t> x_xor() { return {0, 1, 1, 0}; }
std::vector<std::uint32_t> x_and() { return {0, 0, 0, 1}; }
std::vector<std::uint32_t> xor_and() { return {0, 2, 2, 1}; }
std::vector<std::uint32_t> constant() { return {0, 0, 0, 0}; }
}  // namespace bss_tables

FunctionSpec example1_row(int row) {
  const JointSource alphabet = make_bss(0.25);
  using namespace bss_tables;
  switch (row) {
    case 1: return make_case1(alphabet, x_xor(), 1, {x_xor()});
    case 2: return make_case1(alphabet, x_xor(), 1, {constant()});
    case 3: return make_case1(alphabet, xor_and(), 1, {x_and()});
    case 4: return make_case2(alphabet, x_xor(), 1, {x_and()});
    default: break;
  }
  throw Error(ErrorCode::kArgumentOutOfRange, "example 1 has rows 1..4");
}

Example1Table example1_table(double delta) {
  const JointSource src = make_bss(delta);
  Example1Table table;
  table.delta = delta;
  table.h_delta = binary_entropy(delta);
  const double h = table.h_delta;
  auto compare = [h](double tau) {
    if (std::abs(h - tau) <= kVerdictTol) return Verdict::kBoundary;
    return h < tau ? Verdict::kSecurelyComputable : Verdict::kNotSecurelyComputable;
  };

  TableRow r1{"X1+X2", "X1+X2", "X1+X2", 0.5};
  r1.verdict = compare(r1.tau);
  TableRow r2{"X1+X2", "X1+X2", "-", 1.0};
  r2.verdict = compare(r2.tau);
  table.rows.push_back(r1);
  table.rows.push_back(r2);

  const char* names[2][3] = {{"X1+X2, X1.X2", "X1+X2, X1.X2", "X1.X2"},
                             {"X1+X2", "X1+X2", "X1.X2"}};
  for (int row = 3; row <= 4; ++row) {
    const auto rep = analyze(src, example1_row(row));
    TableRow r{names[row - 3][0], names[row - 3][1], names[row - 3][2]};
    r.from_pipeline = true;
    r.h_given_g0 = rep.h_given_g0;
    r.r_value = rep.r_value;
    r.tau = h * rep.h_given_g0 / rep.r_value;
    r.verdict = rep.verdict;
    table.rows.push_back(r);
  }
  return table;
}

InteractiveCheck check_interactive_inequality(const TranscriptLaw& tl) {
  if (tl.seq_cols.size() != 2) {
    throw Error(ErrorCode::kWrongArity,
                "inequality is stated for two terminals, law has " +
                    std::to_string(tl.seq_cols.size()));
  }
  const int x1[] = {tl.seq_cols[0]};
  const int x2[] = {tl.seq_cols[1]};
  InteractiveCheck out;
  out.slack = tl.law.entropy(tl.message_cols) -
              tl.law.cond_entropy(tl.message_cols, x1) -
              tl.law.cond_entropy(tl.message_cols, x2);
  out.pass = out.slack >= -1e-9;
  return out;
}

}  // namespace secomp
