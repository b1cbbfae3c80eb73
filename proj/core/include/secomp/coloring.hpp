#pragma once

#include <cstdint>
#include <vector>

namespace secomp::coloring {

inline constexpr std::size_t kMaxPoints = std::size_t{1} << 20;

// U jointly with V, a map U -> U', a map h: U -> [0, r'), and a coloring
// phi: U' -> [0, r). Labels are 0-based.
struct ColoringInstance {
  std::size_t u_size = 0;
  std::size_t v_size = 1;
  std::vector<double> law;            // P(u, v) at u * v_size + v
  std::vector<std::uint32_t> u_prime;  // per u
  std::uint32_t u_prime_size = 0;
  std::vector<std::uint32_t> h;        // per u
  std::uint32_t r_prime = 1;
  std::vector<std::uint32_t> phi;      // per u'
  std::uint32_t r = 1;
  std::vector<char> u0;                // empty means all of U
  double d = 1.0;
  double lambda = 0.5;
};

// Throws kInvalidSpec or kCapExceeded.
void validate(const ColoringInstance& inst);

struct HypothesisReport {
  double mass_u0 = 0.0;           // Pr(U in U0)
  bool mass_pass = false;         // > 1 - lambda^2
  bool matching_pass = false;     // condition (ii), by direct search
  std::size_t matching_failures = 0;
  double heavy_mass = 0.0;        // P_UV{(u,v): P(u|v) > 1/d}
  bool heavy_pass = false;        // <= lambda^2
};

HypothesisReport check_hypotheses(const ColoringInstance& inst);

// Sum over (j, v) of P(h=j, V=v) * sum_i |P(phi(U')=i | j, v) - 1/r|.
double svar(const ColoringInstance& inst);

struct GapReport {
  double gap = 0.0;     // log r - H(phi) + I(phi ∧ h, V)
  double svar = 0.0;
  double bound = 0.0;   // svar * log(r / svar)
  bool bound_applicable = false;  // svar < r / e
  double final_bound = 0.0;       // 14 lambda * log(|U| / 14 lambda)
  bool final_applicable = false;  // svar < 14 lambda
  bool holds = true;  // gap <= bound + 1e-9 when applicable
};

GapReport security_gap(const ColoringInstance& inst);

// Uniform U on u_size points, U' = U, h(u) = u mod r', V = floor(u / d).
// Then P(u | v) = 1/d for every pair, so d is tight in the heavy-mass
// hypothesis. d must divide u_size; d = 0 means d = u_size.
struct UniformTemplate {
  std::size_t u_size = 1 << 14;
  std::uint32_t r = 4;
  std::uint32_t r_prime = 2;
  std::size_t d = 0;
  double lambda = 0.0064;
};

ColoringInstance make_uniform_instance(const UniformTemplate& tmpl);

// Uniform random phi from the coloring stream of the counter generator.
void draw_coloring(ColoringInstance& inst, std::uint64_t seed, std::uint64_t trial);

struct FailureExperiment {
  std::size_t u_size = 0;
  std::uint32_t r = 1;
  std::uint32_t r_prime = 1;
  std::size_t v_size = 1;
  double d = 0.0;
  double lambda = 0.0;
  int trials = 0;
  double threshold = 0.0;  // 14 lambda
  int failures = 0;        // svar >= threshold
  double fraction = 0.0;
  double svar_mean = 0.0;
  double svar_max = 0.0;
  double gap_max = 0.0;
  int bound_checked = 0;   // samples with svar < r / e
  int bound_violations = 0;
  double worst_bound_excess = 0.0;  // max of gap - bound over checked samples
  // Shape of the lemma's tail bound 2 r r' |V| exp(-c lambda^3 d / (r r')).
  double prefactor = 0.0;
  double exponent_per_c = 0.0;
  double d_over_rr = 0.0;
  std::vector<double> svars;  // per trial
};

FailureExperiment failure_rate_experiment(const UniformTemplate& tmpl, int trials,
                                          std::uint64_t seed, int threads = 1);

}  // namespace secomp::coloring
