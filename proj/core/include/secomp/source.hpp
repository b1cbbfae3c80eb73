#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "secomp/law.hpp"

namespace secomp {

// Terminals are numbered 1..m. A TermSet is a bitmask with bit (i-1) set
// for terminal i; a FuncSet has bit k set for function table k (k = 0 is the
// private function g_0, k = i the function computed by terminal i).
using TermSet = std::uint32_t;
using FuncSet = std::uint32_t;

inline constexpr int kMaxTerminals = 6;

constexpr TermSet term_bit(int terminal) { return TermSet{1} << (terminal - 1); }
constexpr FuncSet func_bit(int index) { return FuncSet{1} << index; }
constexpr TermSet all_terms(int m) { return (TermSet{1} << m) - 1; }
// [first, last] as a TermSet; empty when first > last.
constexpr TermSet term_range(int first, int last) {
  TermSet s = 0;
  for (int i = first; i <= last; ++i) s |= term_bit(i);
  return s;
}
constexpr bool contains(TermSet outer, TermSet inner) {
  return (outer & inner) == inner;
}

// Law of X_M over the product alphabet. Joint symbols are flattened
// row-major with the last coordinate varying fastest.
class JointSource {
 public:
  int m() const { return static_cast<int>(sizes_.size()); }
  std::span<const int> alphabet_sizes() const { return sizes_; }
  std::span<const double> pmf() const { return pmf_; }
  std::size_t cells() const { return pmf_.size(); }
  // Value of coordinate X_terminal in joint symbol `cell`.
  int symbol(std::size_t cell, int terminal) const {
    return digits_[cell * sizes_.size() + (terminal - 1)];
  }
  std::size_t cell_of(std::span<const int> symbols) const;

 private:
  friend JointSource validate(std::vector<double>, std::vector<int>);
  std::vector<int> sizes_;
  std::vector<double> pmf_;
  std::vector<int> digits_;
};

// Checks shape and mass; renormalizes when |sum - 1| <= 1e-9.
JointSource validate(std::vector<double> pmf, std::vector<int> alphabet_sizes);

// Binary symmetric pair: uniform bits that disagree with probability delta.
JointSource make_bss(double delta);

double binary_entropy(double t);

enum class CaseTag { kCase1 = 1, kCase2 = 2, kCase3 = 3 };

struct FunctionSpec {
  // tables[k][cell] is g_k at joint symbol `cell`, k = 0..m.
  std::vector<std::vector<std::uint32_t>> tables;
  CaseTag case_tag = CaseTag::kCase1;
  int m0 = 0;                       // cases 1 and 2
  std::vector<TermSet> recovery;    // case 3, recovery[i-1] = M_i

  std::uint32_t range_size(int k) const;
};

// Tables that are constant (the "no computation" function).
std::vector<std::uint32_t> constant_table(const JointSource& src);
// Table of the tuple X_A, labelled by mixed radix over A in terminal order.
std::vector<std::uint32_t> coordinate_table(const JointSource& src, TermSet a);

// Case 1/2 structure helpers: terminals [1, m0] compute g_0.
FunctionSpec make_case1(const JointSource& src, std::vector<std::uint32_t> g0,
                        int m0, std::vector<std::vector<std::uint32_t>> rest);
FunctionSpec make_case2(const JointSource& src, std::vector<std::uint32_t> g0,
                        int m0, std::vector<std::vector<std::uint32_t>> rest);
// Case 3: g_i = X_{M_i}.
FunctionSpec make_case3(const JointSource& src, std::vector<std::uint32_t> g0,
                        std::vector<TermSet> recovery);

// True iff table b is a function of table a (a(x)=a(x') => b(x)=b(x')),
// checked over all symbols with positive or zero mass alike.
bool is_function_of(std::span<const std::uint32_t> b,
                    std::span<const std::uint32_t> a);

// Throws kInvalidSpec / kWrongShape / kRecoverySetContainsSelf when the
// tables do not satisfy the structure declared by case_tag.
void check_spec(const JointSource& src, const FunctionSpec& fns);

// Handle for the arguments of H(.|.) and I(.∧.): a set of coordinates X_i and
// a set of function values G_k. Empty denotes a constant.
struct RvExpr {
  TermSet coords = 0;
  FuncSet funcs = 0;

  static RvExpr none() { return {}; }
  static RvExpr x(TermSet s) { return {s, 0}; }
  static RvExpr g(FuncSet s) { return {0, s}; }
  RvExpr operator|(RvExpr o) const { return {coords | o.coords, funcs | o.funcs}; }
  bool empty() const { return coords == 0 && funcs == 0; }
};

// Exact single-letter entropy engine over (src, fns). Columns X_1..X_m and
// G_0..G_m are materialized once; every query is a pass over the cells.
class EntropyEngine {
 public:
  EntropyEngine(const JointSource& src, const FunctionSpec& fns);

  int m() const { return m_; }
  double entropy(RvExpr e) const;
  double cond_entropy(RvExpr target, RvExpr given) const;
  double mutual_information(RvExpr a, RvExpr b, RvExpr given = {}) const;
  const JointLaw& law() const { return law_; }

 private:
  std::vector<int> columns(RvExpr e) const;

  int m_;
  JointLaw law_;
};

double cond_entropy(const JointSource& src, const FunctionSpec& fns,
                    RvExpr target, RvExpr given);
double mutual_information(const JointSource& src, const FunctionSpec& fns,
                          RvExpr a, RvExpr b, RvExpr given = {});

}  // namespace secomp
