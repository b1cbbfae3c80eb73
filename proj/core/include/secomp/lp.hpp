#pragma once

#include <vector>

namespace secomp::lp {

// min  c'x  s.t.  A x >= b,  x >= 0,  with c >= 0 and b >= 0.
//
// Solved through its dual  max b'y  s.t.  A'y <= c,  y >= 0, whose slack basis
// is feasible at y = 0, so no phase one is needed. Pivoting uses Bland's rule.
// The primal optimum is read off the reduced costs of the dual slacks and
// the pair is checked for feasibility and complementary slackness.
struct CoveringProblem {
  std::vector<std::vector<double>> a;  // rows = constraints
  std::vector<double> b;
  std::vector<double> c;
};

struct Solution {
  double value = 0.0;
  std::vector<double> x;     // primal
  std::vector<double> y;     // dual multipliers, one per constraint
  std::vector<int> active;   // constraints carrying a basic dual variable
  int pivots = 0;
  double duality_gap = 0.0;
  double max_slackness = 0.0;  // worst complementary-slackness product
};

// Throws Error(kNumericalFailure) when the certificate check fails.
Solution solve_covering(const CoveringProblem& problem);

}  // namespace secomp::lp
