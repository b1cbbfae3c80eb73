// Acceptance checks, one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "oracle.hpp"
#include "report_io.hpp"
#include "secomp/coloring.hpp"
#include "secomp/protocol.hpp"
#include "secomp/rate_region.hpp"

using namespace secomp;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Transcript checks gathered while running criteria 7 and 8.
std::vector<double> g_interactive_slacks;

void record(const ProtocolRun& run) {
  g_interactive_slacks.push_back(check_interactive_inequality(run.law).slack);
}

Outcome table_reproduction() {
  bool ok = true;
  double worst = 0.0;
  for (double d : {0.05, 0.1, 0.25, 0.4}) {
    const auto t = example1_table(d);
    const double h = oracle::h2(d);
    const double want[] = {0.5, 1.0, 2 * d / 3, 2.0 / 3};
    worst = std::max(worst, std::abs(t.h_delta - h));
    ok = ok && std::abs(t.h_delta - h) <= 1e-9 && t.rows.size() == 4;
    for (int k = 0; k < 4 && ok; ++k) {
      const auto& row = t.rows[k];
      worst = std::max(worst, std::abs(row.tau - want[k]));
      const Verdict v = h < want[k] ? Verdict::kSecurelyComputable
                                    : Verdict::kNotSecurelyComputable;
      ok = ok && std::abs(row.tau - want[k]) <= 1e-9 && row.verdict == v;
      if (k >= 2) ok = ok && row.from_pipeline;
    }
  }
  return {ok, fmt("max |error| %.3g over tau and h(delta)", worst)};
}

Outcome corollary_oracle() {
  std::mt19937_64 gen(2024);
  double worst = 0.0;
  for (int k = 0; k < 500; ++k) {
    const auto s = oracle::random_source(gen, 2, 4);
    const auto g0 = oracle::random_table(gen, s.cells(), 4);
    const auto g2 = oracle::random_function_of(gen, g0, 4);
    const auto f = make_case1(s, g0, 1, {g2});
    const double lp = min_sum_rate(constraints_case1(s, f)).value;
    // H(X2|X1) + H(G2|X2) + H(X1|X2,G0), summed directly.
    const double closed = oracle::cond_entropy(s, f, 2, 0, 1, 0) +
                          oracle::cond_entropy(s, f, 0, 4, 2, 0) +
                          oracle::cond_entropy(s, f, 1, 0, 2, 1);
    worst = std::max({worst, std::abs(lp - closed),
                      std::abs(lp - corollary1_closed_form(s, f))});
  }
  return {worst <= 1e-9, fmt("500 sources, max |LP - closed form| %.3g", worst)};
}

Outcome example2() {
  double worst = 0.0;
  for (double d : {0.1, 0.25}) {
    const auto rep = analyze(make_bss(d), example1_row(3));
    worst = std::max({worst, std::abs(rep.h_given_g0 - d),
                      std::abs(rep.r_value - 1.5 * oracle::h2(d))});
  }
  return {worst <= 1e-9, fmt("max |error| %.3g", worst)};
}

Outcome example3() {
  double worst = 0.0;
  for (double d : {0.1, 0.25}) {
    const auto s = make_bss(d);
    const double h = oracle::h2(d);
    const double v = min_sum_rate(constraints_case2(s, example1_row(4))).value;
    worst = std::max({worst, std::abs(v - (h / 2 + std::max(d, h))), std::abs(v - 1.5 * h)});
  }
  return {worst <= 1e-9, fmt("max |error| %.3g", worst)};
}

Outcome entropy_properties() {
  std::mt19937_64 gen(77);
  int failures = 0;
  for (int k = 0; k < 1000; ++k) {
    const int m = 2 + k % 2;
    const auto s = oracle::random_source(gen, m, 3);
    const auto g0 = oracle::random_table(gen, s.cells(), 3);
    std::vector<std::vector<std::uint32_t>> rest;
    for (int i = 2; i <= m; ++i) rest.push_back(oracle::random_function_of(gen, g0, 3));
    const auto f = make_case1(s, g0, 1, rest);
    const EntropyEngine eng(s, f);
    const std::uint32_t full = all_terms(m);
    auto pick = [&] {
      return RvExpr{static_cast<TermSet>(gen() & full),
                    static_cast<FuncSet>(gen() & ((1u << (m + 1)) - 1))};
    };
    const RvExpr a = pick(), b = pick(), c = pick();
    const double tol = 1e-9;
    if (std::abs(eng.entropy(a | b) - eng.entropy(a) - eng.cond_entropy(b, a)) > tol) ++failures;
    if (eng.cond_entropy(a, b | c) > eng.cond_entropy(a, b) + tol) ++failures;
    if (eng.mutual_information(a, b, c) < -tol) ++failures;
    for (int i = 0; i <= m; ++i) {
      if (std::abs(eng.cond_entropy(RvExpr::g(func_bit(i)), RvExpr::x(full))) > tol) ++failures;
    }
    if (std::abs(eng.entropy(a) - oracle::entropy(s, f, a.coords, a.funcs)) > tol) ++failures;
  }
  return {failures == 0, fmt("1000 instances, %d violations", failures)};
}

std::vector<RunReport> trend_runs() {
  const auto s = make_bss(0.25);
  std::vector<RunReport> out;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (int n : {6, 8, 10}) {
      ProtocolConfig cfg{.n = n, .slack = 0.15, .seed = seed};
      const auto run = run_protocol(s, example1_row(2), cfg);
      record(run);
      out.push_back(run.report);
    }
  }
  return out;
}

std::vector<RunReport> g_trend;

Outcome protocol_trend() {
  g_trend = trend_runs();
  const double tol = 1e-9;
  int good = 0;
  double worst_leak = 0.0;
  for (int k = 0; k < 5; ++k) {
    const RunReport* r = &g_trend[3 * k];
    bool mono = true;
    for (int t = 0; t < 2; ++t) {
      mono = mono && r[t + 1].leakage_per_symbol <= r[t].leakage_per_symbol + tol &&
             r[t + 1].mean_error_freq <= r[t].mean_error_freq + tol;
    }
    good += mono ? 1 : 0;
    worst_leak = std::max(worst_leak, r[2].leakage_per_symbol);
  }
  std::string errs;
  for (const auto& r : g_trend) errs += fmt(" %.4f", r.mean_error_freq);
  return {good >= 4 && worst_leak < 0.15,
          fmt("%d/5 seeds non-increasing, max leakage at n=10 %.3g; error freq", good,
              worst_leak) + errs};
}

Outcome one_time_pad() {
  std::mt19937_64 gen(31);
  double worst = 0.0;
  for (std::uint32_t r : {2u, 5u, 16u}) {
    const std::uint32_t vs = 4;
    const auto pfv = oracle::random_pmf(gen, r * vs, 0.2);
    std::vector<double> probs;
    std::vector<std::uint32_t> fcol, vcol, ccol;
    for (std::uint32_t fv = 0; fv < r * vs; ++fv) {
      for (std::uint32_t k = 0; k < r; ++k) {
        probs.push_back(pfv[fv] / r);
        fcol.push_back(fv / vs);
        vcol.push_back(fv % vs);
        ccol.push_back((fv / vs + k) % r);
      }
    }
    JointLaw law(probs);
    const int fc = law.add_column("F", fcol), vc = law.add_column("V", vcol),
              cc = law.add_column("C", ccol);
    const int c[] = {cc}, side[] = {fc, vc};
    worst = std::max(worst, law.mutual_information(c, side));
  }

  const auto s = make_bss(0.05);
  bool exceeds = true;
  std::string pairs;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    ProtocolConfig cfg{.n = 8, .seed = seed, .trials = 1000};
    const auto enc = run_protocol(s, example1_row(1), cfg);
    cfg.encrypt = false;
    const auto plain = run_protocol(s, example1_row(1), cfg);
    record(enc);
    record(plain);
    exceeds = exceeds && plain.report.leakage_per_symbol > enc.report.leakage_per_symbol;
    pairs += fmt(" %.4f>%.4f", plain.report.leakage_per_symbol, enc.report.leakage_per_symbol);
  }
  return {worst <= 1e-12 && exceeds,
          fmt("synthetic pad I = %.3g; unencrypted vs encrypted leakage", worst) + pairs};
}

Outcome interactive_lemma() {
  double worst = 0.0;
  for (double v : g_interactive_slacks) worst = std::min(worst, v);
  return {!g_interactive_slacks.empty() && worst >= -1e-9,
          fmt("%zu transcripts, min slack %.3g", g_interactive_slacks.size(), worst)};
}

std::vector<coloring::FailureExperiment> coloring_sweep() {
  std::vector<coloring::FailureExperiment> out;
  for (std::size_t d : {std::size_t{1} << 9, std::size_t{1} << 11, std::size_t{1} << 13}) {
    out.push_back(coloring::failure_rate_experiment(
        {.u_size = 1 << 14, .r = 4, .r_prime = 2, .d = d, .lambda = 0.0064}, 200, 9));
  }
  return out;
}

std::vector<coloring::FailureExperiment> g_sweep;

Outcome coloring_bound() {
  g_sweep = coloring_sweep();
  bool ok = true;
  std::string detail;
  for (std::size_t k = 0; k < g_sweep.size(); ++k) {
    const auto& e = g_sweep[k];
    ok = ok && e.bound_violations == 0 && e.worst_bound_excess <= 1e-9;
    if (k > 0) ok = ok && e.fraction <= g_sweep[k - 1].fraction;
    detail += fmt(" d/rr'=%g: fraction %.3f, checked %d, mean svar %.4f;", e.d_over_rr,
                  e.fraction, e.bound_checked, e.svar_mean);
  }
  return {ok, "failure fractions" + detail};
}

Outcome determinism() {
  auto dump_runs = [](const std::vector<RunReport>& runs) {
    json j = json::array();
    for (const auto& r : runs) j.push_back(r);
    return j.dump();
  };
  auto dump_sweep = [](const std::vector<coloring::FailureExperiment>& sweep) {
    json j = json::array();
    for (const auto& e : sweep) j.push_back(e);
    return j.dump();
  };
  const bool runs = dump_runs(trend_runs()) == dump_runs(g_trend);
  const bool sweep = dump_sweep(coloring_sweep()) == dump_sweep(g_sweep);
  return {runs && sweep, fmt("protocol reports %s, coloring reports %s",
                             runs ? "identical" : "differ", sweep ? "identical" : "differ")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    double budget_s;
    std::function<Outcome()> check;
  };
  // Criterion 6 reads the transcripts produced by 7 and 8.
  const std::vector<Criterion> order = {
      {1, 1, table_reproduction}, {2, 30, corollary_oracle}, {3, 1, example2},
      {4, 1, example3},           {5, 10, entropy_properties}, {7, 300, protocol_trend},
      {8, 300, one_time_pad},     {6, 1, interactive_lemma},  {9, 120, coloring_bound},
      {10, 600, determinism},
  };
  std::vector<std::string> lines(11);
  int failed = 0;
  for (const auto& c : order) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.detail += fmt(" [over budget %.0f s]", c.budget_s);
    }
    failed += o.pass ? 0 : 1;
    lines[c.id] = fmt("%s criterion %d: ", o.pass ? "PASS" : "FAIL", c.id) + o.detail +
                  fmt(" (%.2f s)", secs);
  }
  for (int k = 1; k <= 10; ++k) std::printf("%s\n", lines[k].c_str());
  return failed;
}
