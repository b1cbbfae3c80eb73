#include <benchmark/benchmark.h>

#include <random>

#include "secomp/coloring.hpp"
#include "secomp/protocol.hpp"
#include "secomp/rate_region.hpp"

using namespace secomp;

namespace {

JointSource uniform_source(int m, int a) {
  std::size_t cells = 1;
  for (int i = 0; i < m; ++i) cells *= a;
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> p(cells);
  double total = 0.0;
  for (auto& x : p) total += (x = u(gen));
  for (auto& x : p) x /= total;
  return validate(p, std::vector<int>(m, a));
}

FunctionSpec xor_case2(const JointSource& s) {
  std::vector<std::uint32_t> g0(s.cells());
  for (std::size_t c = 0; c < s.cells(); ++c) {
    int v = 0;
    for (int i = 1; i <= s.m(); ++i) v ^= s.symbol(c, i) & 1;
    g0[c] = v;
  }
  std::vector<std::vector<std::uint32_t>> rest;
  for (int i = 2; i <= s.m(); ++i) rest.push_back(coordinate_table(s, term_bit(1) | term_bit(i)));
  return make_case2(s, g0, 1, rest);
}

}  // namespace

static void BM_ConstraintsCase2(benchmark::State& state) {
  const auto s = uniform_source(static_cast<int>(state.range(0)), 2);
  const auto f = xor_case2(s);
  for (auto _ : state) benchmark::DoNotOptimize(constraints_case2(s, f));
}
BENCHMARK(BM_ConstraintsCase2)->DenseRange(2, 5);

static void BM_MinSumRateCase2(benchmark::State& state) {
  const auto s = uniform_source(static_cast<int>(state.range(0)), 2);
  const auto cs = constraints_case2(s, xor_case2(s));
  for (auto _ : state) benchmark::DoNotOptimize(min_sum_rate(cs));
}
BENCHMARK(BM_MinSumRateCase2)->DenseRange(2, 5);

static void BM_BlockModel(benchmark::State& state) {
  const auto s = make_bss(0.25);
  const auto f = example1_row(2);
  for (auto _ : state) {
    BlockModel block(s, f, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(block.size());
  }
}
BENCHMARK(BM_BlockModel)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_RunProtocolRow2(benchmark::State& state) {
  const auto s = make_bss(0.25);
  const auto f = example1_row(2);
  ProtocolConfig cfg;
  cfg.n = static_cast<int>(state.range(0));
  cfg.trials = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(run_protocol(s, f, cfg).report);
}
BENCHMARK(BM_RunProtocolRow2)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_ColoringSvar(benchmark::State& state) {
  coloring::UniformTemplate t;
  t.u_size = static_cast<std::size_t>(state.range(0));
  t.d = t.u_size / 8;
  auto inst = coloring::make_uniform_instance(t);
  coloring::draw_coloring(inst, 1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(coloring::security_gap(inst));
}
BENCHMARK(BM_ColoringSvar)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 16);

BENCHMARK_MAIN();
