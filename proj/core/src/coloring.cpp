#include "secomp/coloring.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_map>

#include "secomp/error.hpp"
#include "secomp/law.hpp"
#include "secomp/parallel.hpp"
#include "secomp/rng.hpp"

namespace secomp::coloring {

namespace {

constexpr std::size_t kMaxLawEntries = std::size_t{1} << 24;

void invalid(const std::string& what) { throw Error(ErrorCode::kInvalidSpec, what); }

struct CellStats {
  double svar = 0.0;
  double gap = 0.0;
};

// Masses of (h, V, phi) accumulated in index order, so the value is the same
// for every caller and thread count.
CellStats cell_stats(const ColoringInstance& inst) {
  const std::size_t cells = static_cast<std::size_t>(inst.r_prime) * inst.v_size;
  std::vector<double> cell_mass(cells, 0.0);
  std::vector<double> color_mass(cells * inst.r, 0.0);
  for (std::size_t u = 0; u < inst.u_size; ++u) {
    const std::uint32_t colour = inst.phi[inst.u_prime[u]];
    const std::size_t row = static_cast<std::size_t>(inst.h[u]) * inst.v_size;
    for (std::size_t v = 0; v < inst.v_size; ++v) {
      const double p = inst.law[u * inst.v_size + v];
      if (p == 0.0) continue;
      cell_mass[row + v] += p;
      color_mass[(row + v) * inst.r + colour] += p;
    }
  }
  CellStats s;
  for (std::size_t c = 0; c < cells; ++c) {
    if (cell_mass[c] == 0.0) continue;
    const double even = cell_mass[c] / inst.r;
    for (std::uint32_t i = 0; i < inst.r; ++i) {
      s.svar += std::abs(color_mass[c * inst.r + i] - even);
    }
  }
  s.gap = std::log2(static_cast<double>(inst.r)) - entropy_bits(color_mass) +
          entropy_bits(cell_mass);
  return s;
}

}  // namespace

void validate(const ColoringInstance& inst) {
  if (inst.u_size < 1 || inst.v_size < 1) invalid("U and V must be nonempty");
  if (inst.u_size > kMaxPoints || inst.u_prime_size > kMaxPoints) {
    throw Error(ErrorCode::kCapExceeded, "instance exceeds 2^20 points");
  }
  if (inst.u_size * inst.v_size > kMaxLawEntries) {
    throw Error(ErrorCode::kCapExceeded, "joint law of U and V exceeds 2^24 entries");
  }
  if (inst.law.size() != inst.u_size * inst.v_size) invalid("law size is not |U|*|V|");
  double total = 0.0;
  for (double p : inst.law) {
    if (!(p >= 0.0) || !std::isfinite(p)) invalid("law has a negative or non-finite mass");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) invalid("law does not sum to 1");
  if (inst.r < 1 || inst.r_prime < 1) invalid("r and r' must be >= 1");
  if (!(inst.d > 0.0)) invalid("d must be positive");
  if (!(inst.lambda > 0.0 && inst.lambda < 1.0)) invalid("lambda must lie in (0, 1)");
  if (inst.u_prime.size() != inst.u_size || inst.h.size() != inst.u_size) {
    invalid("U' map and h must be total on U");
  }
  if (inst.phi.size() != inst.u_prime_size) invalid("phi must be total on U'");
  if (!inst.u0.empty() && inst.u0.size() != inst.u_size) invalid("U0 mask size is not |U|");
  for (std::size_t u = 0; u < inst.u_size; ++u) {
    if (inst.u_prime[u] >= inst.u_prime_size) invalid("U' map out of range");
    if (inst.h[u] >= inst.r_prime) invalid("h out of range");
  }
  for (auto c : inst.phi) {
    if (c >= inst.r) invalid("phi out of range");
  }
}

HypothesisReport check_hypotheses(const ColoringInstance& inst) {
  validate(inst);
  HypothesisReport rep;
  const auto in_u0 = [&](std::size_t u) { return inst.u0.empty() || inst.u0[u] != 0; };
  const double lam2 = inst.lambda * inst.lambda;

  std::vector<double> v_mass(inst.v_size, 0.0);
  for (std::size_t u = 0; u < inst.u_size; ++u) {
    for (std::size_t v = 0; v < inst.v_size; ++v) {
      const double p = inst.law[u * inst.v_size + v];
      v_mass[v] += p;
      if (in_u0(u)) rep.mass_u0 += p;
    }
  }
  rep.mass_pass = rep.mass_u0 > 1.0 - lam2;

  for (std::size_t u = 0; u < inst.u_size; ++u) {
    for (std::size_t v = 0; v < inst.v_size; ++v) {
      const double p = inst.law[u * inst.v_size + v];
      if (p > 0.0 && p * inst.d > v_mass[v] * (1.0 + 1e-12)) rep.heavy_mass += p;
    }
  }
  rep.heavy_pass = rep.heavy_mass <= lam2;

  // Every u' in a (j, v) cell restricted to U0 must carry the same
  // conditional mass as some single u of that cell.
  const std::size_t cells = static_cast<std::size_t>(inst.r_prime) * inst.v_size;
  std::vector<std::vector<double>> point_mass(cells);
  std::vector<std::unordered_map<std::uint32_t, double>> prime_mass(cells);
  for (std::size_t u = 0; u < inst.u_size; ++u) {
    if (!in_u0(u)) continue;
    for (std::size_t v = 0; v < inst.v_size; ++v) {
      const double p = inst.law[u * inst.v_size + v];
      if (p == 0.0) continue;
      const std::size_t c = static_cast<std::size_t>(inst.h[u]) * inst.v_size + v;
      point_mass[c].push_back(p);
      prime_mass[c][inst.u_prime[u]] += p;
    }
  }
  for (std::size_t c = 0; c < cells; ++c) {
    auto& pts = point_mass[c];
    std::sort(pts.begin(), pts.end());
    for (const auto& [up, mass] : prime_mass[c]) {
      const double tol = 1e-12 * mass;
      auto it = std::lower_bound(pts.begin(), pts.end(), mass - tol);
      if (it == pts.end() || *it > mass + tol) ++rep.matching_failures;
    }
  }
  rep.matching_pass = rep.matching_failures == 0;
  return rep;
}

double svar(const ColoringInstance& inst) {
  validate(inst);
  return cell_stats(inst).svar;
}

namespace {

GapReport gap_from(const CellStats& s, const ColoringInstance& inst) {
  GapReport g;
  g.gap = s.gap;
  g.svar = s.svar;
  const double r = inst.r;
  g.bound = s.svar > 0.0 ? s.svar * std::log2(r / s.svar) : 0.0;
  g.bound_applicable = s.svar < r / std::numbers::e;
  const double t = 14.0 * inst.lambda;
  g.final_bound = t * std::log2(static_cast<double>(inst.u_size) / t);
  g.final_applicable = s.svar < t;
  g.holds = !g.bound_applicable || g.gap <= g.bound + 1e-9;
  return g;
}

}  // namespace

GapReport security_gap(const ColoringInstance& inst) {
  validate(inst);
  return gap_from(cell_stats(inst), inst);
}

ColoringInstance make_uniform_instance(const UniformTemplate& tmpl) {
  if (tmpl.u_size < 1) invalid("u_size must be >= 1");
  if (tmpl.u_size > kMaxPoints) throw Error(ErrorCode::kCapExceeded, "u_size exceeds 2^20");
  const std::size_t d = tmpl.d == 0 ? tmpl.u_size : tmpl.d;
  if (tmpl.u_size % d != 0) invalid("d must divide u_size");
  ColoringInstance inst;
  inst.u_size = tmpl.u_size;
  inst.v_size = tmpl.u_size / d;
  if (inst.u_size * inst.v_size > kMaxLawEntries) {
    throw Error(ErrorCode::kCapExceeded, "joint law of U and V exceeds 2^24 entries");
  }
  inst.law.assign(inst.u_size * inst.v_size, 0.0);
  inst.u_prime.resize(inst.u_size);
  inst.h.resize(inst.u_size);
  const double p = 1.0 / static_cast<double>(inst.u_size);
  for (std::size_t u = 0; u < inst.u_size; ++u) {
    inst.law[u * inst.v_size + u / d] = p;
    inst.u_prime[u] = static_cast<std::uint32_t>(u);
    inst.h[u] = static_cast<std::uint32_t>(u % tmpl.r_prime);
  }
  inst.u_prime_size = static_cast<std::uint32_t>(inst.u_size);
  inst.r = tmpl.r;
  inst.r_prime = tmpl.r_prime;
  inst.phi.assign(inst.u_prime_size, 0);
  inst.d = static_cast<double>(d);
  inst.lambda = tmpl.lambda;
  validate(inst);
  return inst;
}

void draw_coloring(ColoringInstance& inst, std::uint64_t seed, std::uint64_t trial) {
  inst.phi.resize(inst.u_prime_size);
  for (std::uint32_t u = 0; u < inst.u_prime_size; ++u) {
    inst.phi[u] = inst.r == 1 ? 0 : rng::below(rng::draw(seed, rng::Stream::kColoring, trial, u), inst.r);
  }
}

FailureExperiment failure_rate_experiment(const UniformTemplate& tmpl, int trials,
                                          std::uint64_t seed, int threads) {
  if (trials < 1) throw Error(ErrorCode::kArgumentOutOfRange, "trials must be >= 1");
  const ColoringInstance base = make_uniform_instance(tmpl);
  FailureExperiment ex;
  ex.u_size = base.u_size;
  ex.r = base.r;
  ex.r_prime = base.r_prime;
  ex.v_size = base.v_size;
  ex.d = base.d;
  ex.lambda = base.lambda;
  ex.trials = trials;
  ex.threshold = 14.0 * base.lambda;
  ex.d_over_rr = base.d / (static_cast<double>(base.r) * base.r_prime);
  ex.prefactor = 2.0 * base.r * base.r_prime * static_cast<double>(base.v_size);
  ex.exponent_per_c = base.lambda * base.lambda * base.lambda * ex.d_over_rr;

  std::vector<GapReport> gaps(trials);
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t begin, std::size_t end) {
    ColoringInstance inst = base;
    for (std::size_t t = begin; t < end; ++t) {
      draw_coloring(inst, seed, t);
      gaps[t] = gap_from(cell_stats(inst), inst);
    }
  });

  for (const auto& g : gaps) {
    ex.svars.push_back(g.svar);
    ex.svar_mean += g.svar / trials;
    ex.svar_max = std::max(ex.svar_max, g.svar);
    ex.gap_max = std::max(ex.gap_max, g.gap);
    if (g.svar >= ex.threshold) ++ex.failures;
    if (g.bound_applicable) {
      const double excess = g.gap - g.bound;
      ex.worst_bound_excess = ex.bound_checked == 0 ? excess : std::max(ex.worst_bound_excess, excess);
      ++ex.bound_checked;
      if (!g.holds) ++ex.bound_violations;
    }
  }
  ex.fraction = static_cast<double>(ex.failures) / trials;
  return ex;
}

}  // namespace secomp::coloring
