#include "secomp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "secomp/error.hpp"

namespace secomp::lp {

namespace {

constexpr double kPivotEps = 1e-12;
constexpr double kCertTol = 1e-8;

}  // namespace

Solution solve_covering(const CoveringProblem& problem) {
  const int rows = static_cast<int>(problem.a.size());  // primal constraints
  const int vars = static_cast<int>(problem.c.size());  // primal variables
  if (static_cast<int>(problem.b.size()) != rows) {
    throw Error(ErrorCode::kNumericalFailure, "b has wrong length");
  }
  for (const auto& row : problem.a) {
    if (static_cast<int>(row.size()) != vars) {
      throw Error(ErrorCode::kNumericalFailure, "ragged constraint matrix");
    }
  }
  for (double cj : problem.c) {
    if (cj < 0.0) throw Error(ErrorCode::kNumericalFailure, "negative cost");
  }

  // Dual tableau: `vars` rows (A'y + s = c), columns y_0..y_{rows-1},
  // s_0..s_{vars-1}, rhs. Objective row holds -b for y (maximize b'y).
  const int cols = rows + vars;
  std::vector<std::vector<double>> t(vars, std::vector<double>(cols + 1, 0.0));
  std::vector<double> obj(cols + 1, 0.0);
  std::vector<int> basis(vars);
  for (int v = 0; v < vars; ++v) {
    for (int k = 0; k < rows; ++k) t[v][k] = problem.a[k][v];
    t[v][rows + v] = 1.0;
    t[v][cols] = problem.c[v];
    basis[v] = rows + v;
  }
  for (int k = 0; k < rows; ++k) obj[k] = -std::max(0.0, problem.b[k]);

  Solution sol;
  const int max_pivots = 50 * (cols + 1) * (vars + 1) + 1000;
  for (;;) {
    int enter = -1;
    for (int j = 0; j < cols; ++j) {
      if (obj[j] < -kPivotEps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    int leave = -1;
    double best = 0.0;
    for (int r = 0; r < vars; ++r) {
      if (t[r][enter] > kPivotEps) {
        const double ratio = t[r][cols] / t[r][enter];
        if (leave < 0 || ratio < best - kPivotEps ||
            (std::abs(ratio - best) <= kPivotEps && basis[r] < basis[leave])) {
          leave = r;
          best = ratio;
        }
      }
    }
    if (leave < 0) {
      // Dual unbounded means the primal is infeasible, impossible for b
      // finite and every row having a nonzero entry.
      throw Error(ErrorCode::kNumericalFailure, "dual unbounded");
    }
    const double piv = t[leave][enter];
    for (double& v : t[leave]) v /= piv;
    for (int r = 0; r < vars; ++r) {
      if (r == leave) continue;
      const double f = t[r][enter];
      if (f == 0.0) continue;
      for (int j = 0; j <= cols; ++j) t[r][j] -= f * t[leave][j];
    }
    const double f = obj[enter];
    for (int j = 0; j <= cols; ++j) obj[j] -= f * t[leave][j];
    basis[leave] = enter;
    if (++sol.pivots > max_pivots) {
      throw Error(ErrorCode::kNumericalFailure, "pivot limit reached");
    }
  }

  sol.x.assign(vars, 0.0);
  for (int v = 0; v < vars; ++v) sol.x[v] = std::max(0.0, obj[rows + v]);
  sol.y.assign(rows, 0.0);
  for (int r = 0; r < vars; ++r) {
    if (basis[r] < rows) {
      sol.y[basis[r]] = std::max(0.0, t[r][cols]);
      sol.active.push_back(basis[r]);
    }
  }
  std::sort(sol.active.begin(), sol.active.end());

  // Certificate: primal/dual feasibility, equal objectives, complementary
  // slackness.
  double primal = 0.0;
  for (int v = 0; v < vars; ++v) primal += problem.c[v] * sol.x[v];
  double dual = 0.0;
  for (int k = 0; k < rows; ++k) dual += std::max(0.0, problem.b[k]) * sol.y[k];
  double worst = 0.0;
  for (int k = 0; k < rows; ++k) {
    double lhs = 0.0;
    for (int v = 0; v < vars; ++v) lhs += problem.a[k][v] * sol.x[v];
    const double slack = lhs - std::max(0.0, problem.b[k]);
    if (slack < -1e-9) {
      throw Error(ErrorCode::kNumericalFailure,
                  "primal row " + std::to_string(k) + " violated by " +
                      std::to_string(-slack));
    }
    worst = std::max(worst, sol.y[k] * slack);
  }
  for (int v = 0; v < vars; ++v) {
    double lhs = 0.0;
    for (int k = 0; k < rows; ++k) lhs += problem.a[k][v] * sol.y[k];
    const double slack = problem.c[v] - lhs;
    if (slack < -1e-9) {
      throw Error(ErrorCode::kNumericalFailure, "dual row violated");
    }
    worst = std::max(worst, sol.x[v] * slack);
  }
  sol.value = primal;
  sol.duality_gap = std::abs(primal - dual);
  sol.max_slackness = worst;
  if (sol.duality_gap > kCertTol || worst > kCertTol) {
    throw Error(ErrorCode::kNumericalFailure,
                "optimality certificate failed (gap " +
                    std::to_string(sol.duality_gap) + ")");
  }
  return sol;
}

}  // namespace secomp::lp
