#include <doctest/doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "oracle.hpp"
#include "secomp/error.hpp"
#include "secomp/protocol.hpp"
#include "secomp/rate_region.hpp"

using namespace secomp;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kParseError;
}

double exact_error_of(const BlockModel& block, const std::vector<std::uint32_t>& decoded) {
  double e = 0.0;
  for (std::size_t j = 0; j < block.size(); ++j) {
    if (decoded[j] != j) e += block.probs()[j];
  }
  return e;
}

Message column_message(std::string name, int sender, std::span<const std::uint32_t> v,
                       std::uint32_t card) {
  return Message{std::move(name), sender, card, std::vector<std::uint32_t>(v.begin(), v.end())};
}

// (1/n) I(G0^n ∧ all messages) by direct summation over joint sequences.
double oracle_leakage(const BlockModel& block, const std::vector<Message>& t) {
  std::map<std::vector<long>, double> joint, g0, f;
  const auto g = block.fn_seq(0);
  for (std::size_t j = 0; j < block.size(); ++j) {
    std::vector<long> key;
    for (const auto& msg : t) key.push_back(msg.values[j]);
    const double p = block.probs()[j];
    f[key] += p;
    g0[{static_cast<long>(g[j])}] += p;
    key.push_back(-1 - static_cast<long>(g[j]));
    joint[key] += p;
  }
  return (oracle::entropy_of(g0) + oracle::entropy_of(f) - oracle::entropy_of(joint)) / block.n();
}

FunctionSpec three_terminal_case3(const JointSource& s) {
  return make_case3(s, constant_table(s), {term_bit(2), term_bit(3), term_bit(1)});
}

JointSource chain_source(double e) {
  // X1 uniform, X2 = X1 ⊕ Z1, X3 = X2 ⊕ Z2, Z's i.i.d. Bernoulli(e).
  std::vector<double> p(8);
  for (int x1 = 0; x1 < 2; ++x1) {
    for (int x2 = 0; x2 < 2; ++x2) {
      for (int x3 = 0; x3 < 2; ++x3) {
        p[x1 * 4 + x2 * 2 + x3] = 0.5 * (x1 == x2 ? 1 - e : e) * (x2 == x3 ? 1 - e : e);
      }
    }
  }
  return validate(p, {2, 2, 2});
}

}  // namespace

TEST_CASE("block model matches the product law") {
  const auto s = validate({0.1, 0.2, 0.3, 0.15, 0.05, 0.2}, {2, 3});
  const auto f = make_case2(s, coordinate_table(s, term_bit(1)), 1, {coordinate_table(s, term_bit(2))});
  const int n = 3;
  const BlockModel block(s, f, n);
  REQUIRE(block.size() == 216);
  double total = 0.0;
  for (std::size_t j = 0; j < block.size(); ++j) {
    double p = 1.0;
    std::uint32_t x1 = 0, x2 = 0;
    for (int t = 0; t < n; ++t) {
      const std::size_t c = block.cell_at(j, t);
      p *= s.pmf()[c];
      x1 = x1 * 2 + s.symbol(c, 1);
      x2 = x2 * 3 + s.symbol(c, 2);
    }
    CHECK(std::abs(block.probs()[j] - p) <= 1e-15);
    CHECK(block.seq(1)[j] == x1);
    CHECK(block.seq(2)[j] == x2);
    CHECK(block.fn_seq(1)[j] == x1);
    CHECK(block.fn_seq(2)[j] == x2);
    total += block.probs()[j];
  }
  CHECK(std::abs(total - 1.0) <= 1e-12);
  CHECK(block.seq_count(2) == 27);
  CHECK(block.fn_seq_count(0) == 8);
}

TEST_CASE("block model enforces the enumeration cap") {
  const auto s = make_bss(0.25);
  CHECK(code_of([&] { BlockModel(s, example1_row(2), 13); }) ==
        ErrorCode::kEnumerationCapExceeded);
  CHECK(code_of([&] { BlockModel(s, example1_row(2), 6, 1000); }) ==
        ErrorCode::kEnumerationCapExceeded);
  CHECK_NOTHROW(BlockModel(s, example1_row(2), 5, 1024));
}

TEST_CASE("block model is independent of the thread count") {
  const auto s = make_bss(0.3);
  const BlockModel a(s, example1_row(3), 8, kDefaultEnumerationCap, 1);
  const BlockModel b(s, example1_row(3), 8, kDefaultEnumerationCap, 4);
  CHECK(std::equal(a.probs().begin(), a.probs().end(), b.probs().begin()));
  CHECK(std::equal(a.fn_seq(0).begin(), a.fn_seq(0).end(), b.fn_seq(0).begin()));
}

TEST_CASE("samples follow the block law") {
  const auto s = make_bss(0.25);
  const BlockModel block(s, example1_row(2), 1);
  std::vector<int> counts(4, 0);
  for (int t = 0; t < 20000; ++t) ++counts[block.sample(9, t)];
  for (int c = 0; c < 4; ++c) {
    CHECK(std::abs(counts[c] / 20000.0 - s.pmf()[c]) < 0.015);
  }
  CHECK(block.sample(9, 17) == block.sample(9, 17));
}

TEST_CASE("binning codes") {
  const auto zero = build_binning_code(1, 64, 6, 0.0, 1);
  CHECK(zero.bins == 1);
  for (auto b : zero.map) CHECK(b == 0);

  const auto four = build_binning_code(1, 4, 2, 1.0, 1);
  CHECK(four.bins == 4);
  CHECK(bin_count(4, std::log2(5.0) / 4) == 5);
  CHECK(bin_count(3, 0.5) == 3);

  const auto again = build_binning_code(1, 4, 2, 1.0, 1);
  CHECK(again.map == four.map);
  CHECK(build_binning_code(2, 256, 8, 0.5, 1).map != build_binning_code(1, 256, 8, 0.5, 1).map);
  CHECK(build_binning_code(1, 256, 8, 0.5, 2).map != build_binning_code(1, 256, 8, 0.5, 1).map);

  CHECK(code_of([] { build_binning_code(1, 1u << 20, 20, 0.5, 1, rng::Stream::kSourceBinning, 1000); }) ==
        ErrorCode::kEnumerationCapExceeded);
  CHECK(code_of([] { bin_count(4, -0.1); }) == ErrorCode::kArgumentOutOfRange);
}

TEST_CASE("bin assignments are uniform across seeds") {
  // Chi-square with 3 degrees of freedom; 16.27 is the 0.1% critical value.
  for (std::uint32_t point = 0; point < 4; ++point) {
    std::vector<int> counts(4, 0);
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
      ++counts[build_binning_code(1, 4, 2, 1.0, seed)(point)];
    }
    double chi = 0.0;
    for (int c : counts) chi += (c - 2500.0) * (c - 2500.0) / 2500.0;
    CHECK(chi < 16.27);
  }
}

TEST_CASE("decoder with the full joint sequence is exact") {
  const auto s = make_bss(0.25);
  const BlockModel block(s, example1_row(2), 5);
  const std::span<const std::uint32_t> cols[] = {block.seq(1), block.seq(2)};
  const auto dec = sw_decode_all(block, cols);
  CHECK(exact_error_of(block, dec) == 0.0);
  Observation obs{{block.seq(1), block.seq(2)}, {block.seq(1)[77], block.seq(2)[77]}};
  CHECK(sw_decode(block, obs) == 77);
  Observation none{{block.seq(1)}, {999}};
  CHECK(code_of([&] { sw_decode(block, none); }) == ErrorCode::kNoConsistentSequence);
}

TEST_CASE("decoder at rate zero guesses the conditional mode") {
  const double d = 0.25;
  const auto s = make_bss(d);
  for (int n : {1, 4, 7}) {
    const BlockModel block(s, example1_row(2), n);
    const std::span<const std::uint32_t> cols[] = {block.seq(1)};
    const auto dec = sw_decode_all(block, cols);
    CHECK(std::abs(exact_error_of(block, dec) - (1 - std::pow(1 - d, n))) <= 1e-12);
  }
}

TEST_CASE("Slepian-Wolf decoding improves with rate") {
  const double d = 0.25;
  const auto s = make_bss(d);
  const int n = 10;
  const BlockModel block(s, example1_row(2), n);
  const double baseline = 1 - std::pow(1 - d, n);
  double previous = 1.0;
  for (double rate : {oracle::h2(d) + 0.15, oracle::h2(d) + 0.35, oracle::h2(d) + 0.6}) {
    const auto code = build_binning_code(2, block.seq_count(2), n, rate, 1);
    std::vector<std::uint32_t> bins(block.size());
    for (std::size_t j = 0; j < block.size(); ++j) bins[j] = code(block.seq(2)[j]);
    const std::span<const std::uint32_t> cols[] = {block.seq(1), bins};
    const double e = exact_error_of(block, sw_decode_all(block, cols));
    CHECK(e < baseline);
    CHECK(e < previous);
    previous = e;
  }
}

TEST_CASE("single and batched decoders agree") {
  std::mt19937_64 gen(3);
  const auto s = oracle::random_source(gen, 2, 3);
  const auto f = make_case3(s, constant_table(s), {term_bit(2), 0});
  const BlockModel block(s, f, 4);
  const auto code = build_binning_code(2, block.seq_count(2), 4, 0.6, 5);
  std::vector<std::uint32_t> bins(block.size());
  for (std::size_t j = 0; j < block.size(); ++j) bins[j] = code(block.seq(2)[j]);
  const std::span<const std::uint32_t> cols[] = {block.seq(1), bins};
  const auto all = sw_decode_all(block, cols);
  for (std::size_t j = 0; j < block.size(); j += 7) {
    if (block.probs()[j] == 0.0) continue;
    Observation obs{{block.seq(1), bins}, {block.seq(1)[j], bins[j]}};
    CHECK(sw_decode(block, obs) == all[j]);
  }
}

TEST_CASE("exact transcript law on reference transcripts") {
  const auto s = make_bss(0.25);
  const auto f = example1_row(2);
  const BlockModel block(s, f, 6);

  std::vector<Message> constant{{"F", 1, 1, std::vector<std::uint32_t>(block.size(), 0)}};
  CHECK(exact_transcript_law(block, constant).leakage_per_symbol() <= 1e-12);

  const std::vector<Message> x1{column_message("F", 1, block.seq(1), block.seq_count(1))};
  CHECK(exact_transcript_law(block, x1).leakage_per_symbol() <= 1e-9);

  const std::vector<Message> g0{column_message("F", 0, block.fn_seq(0), block.fn_seq_count(0))};
  CHECK(std::abs(exact_transcript_law(block, g0).leakage_per_symbol() - oracle::h2(0.25)) <= 1e-9);
}

TEST_CASE("interactivity of transcripts") {
  const auto s = make_bss(0.25);
  const BlockModel block(s, example1_row(2), 4);
  const auto run = run_protocol(s, example1_row(1), ProtocolConfig{.n = 4, .trials = 10});
  CHECK(is_interactive(BlockModel(s, example1_row(1), 4), run.transcript));

  std::vector<Message> cheat{column_message("F", 1, block.seq(2), block.seq_count(2))};
  CHECK_FALSE(is_interactive(block, cheat));

  // Terminal 2 may use terminal 1's earlier message.
  std::vector<Message> relay{column_message("A", 1, block.seq(1), block.seq_count(1))};
  std::vector<std::uint32_t> sum(block.size());
  for (std::size_t j = 0; j < block.size(); ++j) sum[j] = block.seq(1)[j] ^ block.seq(2)[j];
  relay.push_back({"B", 2, block.seq_count(2), sum});
  CHECK(is_interactive(block, relay));
}

TEST_CASE("one-time pad with a uniform independent key is perfectly secret") {
  std::mt19937_64 gen(13);
  for (std::uint32_t r : {2u, 3u, 7u}) {
    const std::uint32_t vs = 3;
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
    const int c[] = {cc}, fvv[] = {fc, vc};
    CHECK(law.mutual_information(c, fvv) <= 1e-12);
  }
}

TEST_CASE("key quality") {
  const auto s = make_bss(0.25);
  const auto f = example1_row(1);
  const BlockModel block(s, f, 6);
  std::vector<Message> t{column_message("F1", 1, block.seq(1), block.seq_count(1))};
  const auto tl = exact_transcript_law(block, t);
  const int cond[] = {tl.g0_col};

  const auto constant = build_key_map(2, block.seq_count(2), 6, 1, 3);
  const auto q0 = key_quality(constant, tl, cond);
  CHECK(q0.uniformity_deficit == 0.0);
  CHECK(q0.independence_leakage == 0.0);

  KeyMap identity{2, 1.0, block.seq_count(2), {}};
  for (std::uint32_t x = 0; x < block.seq_count(2); ++x) identity.map.push_back(x);
  const int cond2[] = {tl.g0_col, tl.message_cols[0]};
  const auto q1 = key_quality(identity, tl, cond2);
  const int xs[] = {tl.seq_cols[1]};
  CHECK(std::abs(q1.independence_leakage - tl.law.mutual_information(xs, cond2) / 6) <= 1e-12);
  CHECK(q1.independence_leakage > 0.5);
  CHECK(q1.uniformity_deficit <= 1e-12);
}

TEST_CASE("random keys well below the residual entropy are nearly ideal") {
  // Conditioning on G0 = X1 ⊕ X2 and a rate-0.4 bin of X1 leaves X2 with
  // about 0.6 bits per symbol; a key of rate 0.25 should be almost uniform
  // and independent.
  const auto s = make_bss(0.25);
  const auto f = example1_row(1);
  for (int n : {6, 8, 10}) {
    const BlockModel block(s, f, n);
    const auto code = build_binning_code(1, block.seq_count(1), n, 0.4, 2);
    std::vector<std::uint32_t> bins(block.size());
    for (std::size_t j = 0; j < block.size(); ++j) bins[j] = code(block.seq(1)[j]);
    const std::vector<Message> t{{"F1", 1, code.bins, bins}};
    const auto tl = exact_transcript_law(block, t);
    const int cond[] = {tl.g0_col, tl.message_cols[0]};
    const auto key = build_key_map(2, block.seq_count(2), n, bin_count(n, 0.25), 3);
    const auto q = key_quality(key, tl, cond);
    MESSAGE("n=" << n << " deficit=" << q.uniformity_deficit << " leak=" << q.independence_leakage);
    CHECK(q.uniformity_deficit < 0.05);
    CHECK(q.independence_leakage < 0.05);
  }
}

TEST_CASE("case 1 protocol on the XOR row with constant g2") {
  const auto s = make_bss(0.25);
  ProtocolConfig cfg;
  cfg.n = 8;
  const auto rep = run_case1_protocol(s, example1_row(2), cfg);
  CHECK(rep.leakage_per_symbol < 0.1);
  CHECK(rep.mean_error_freq < 0.2);
  CHECK(rep.terminals.size() == 2);
  for (const auto& t : rep.terminals) {
    CHECK(t.error_freq >= 0.0);
    CHECK(t.error_freq <= 1.0);
  }
  CHECK(rep.has_interactive_check);
  CHECK(rep.interactive_slack >= -1e-9);
  CHECK(code_of([&] { run_case2_protocol(s, example1_row(2), cfg); }) == ErrorCode::kWrongCaseTag);
}

TEST_CASE("a constant private function never leaks") {
  std::mt19937_64 gen(19);
  const auto s = oracle::random_source(gen, 2, 3);
  const auto f = make_case1(s, constant_table(s), 1, {constant_table(s)});
  const auto rep = run_protocol(s, f, ProtocolConfig{.n = 5, .trials = 100}).report;
  CHECK(rep.leakage_per_symbol <= 1e-12);
}

TEST_CASE("disabling the pad increases leakage") {
  const auto s = make_bss(0.1);
  for (std::uint64_t seed : {1u, 2u}) {
    ProtocolConfig cfg{.n = 8, .seed = seed, .trials = 100};
    const auto enc = run_protocol(s, example1_row(1), cfg).report;
    cfg.encrypt = false;
    const auto plain = run_protocol(s, example1_row(1), cfg).report;
    CHECK(plain.leakage_per_symbol > enc.leakage_per_symbol);
    REQUIRE(enc.keys.size() == 1);
    CHECK(enc.keys[0].size == enc.message_sizes.back());
    CHECK(plain.keys.empty());
  }
}

TEST_CASE("run law decomposition and prefix monotonicity") {
  const auto s = make_bss(0.25);
  const auto run = run_protocol(s, example1_row(1), ProtocolConfig{.n = 6, .trials = 10});
  const auto& law = run.law.law;
  const int g[] = {run.law.g0_col};
  std::vector<int> all = run.law.message_cols;
  std::vector<int> joint = all;
  joint.push_back(run.law.g0_col);
  CHECK(std::abs(law.entropy(joint) -
                 (law.entropy(g) + law.entropy(all) - law.mutual_information(g, all))) <= 1e-9);
  double previous = 0.0;
  for (std::size_t k = 1; k <= all.size(); ++k) {
    const std::vector<int> prefix(all.begin(), all.begin() + k);
    const double leak = law.mutual_information(g, prefix);
    CHECK(leak >= previous - 1e-9);
    previous = leak;
  }
  const BlockModel block(s, example1_row(1), 6);
  CHECK(std::abs(run.report.leakage_per_symbol - oracle_leakage(block, run.transcript)) <= 1e-9);
}

TEST_CASE("protocol runs are deterministic") {
  const auto s = make_bss(0.25);
  ProtocolConfig cfg{.n = 7, .seed = 42, .trials = 500};
  const auto a = run_protocol(s, example1_row(4), cfg).report;
  cfg.threads = 3;
  const auto b = run_protocol(s, example1_row(4), cfg).report;
  CHECK(a.leakage_per_symbol == b.leakage_per_symbol);
  CHECK(a.mean_error_freq == b.mean_error_freq);
  CHECK(a.message_sizes == b.message_sizes);
  cfg.seed = 43;
  const auto c = run_protocol(s, example1_row(4), cfg).report;
  CHECK(c.leakage_per_symbol != a.leakage_per_symbol);
}

TEST_CASE("case 2 protocol on the XOR-AND row") {
  const auto s = make_bss(0.25);
  const auto rep = run_case2_protocol(s, example1_row(4), ProtocolConfig{.n = 8, .trials = 2000});
  CHECK(rep.rate_names == std::vector<std::string>{"R1", "R2", "R'2"});
  CHECK(rep.message_names == std::vector<std::string>{"F1", "F2", "Fhat2"});
  CHECK(rep.terminals.size() == 2);
  CHECK(rep.keys.empty());
  CHECK_FALSE(rep.encrypt);
  CHECK(rep.transcript_rate > 0.0);
  CHECK(rep.leakage_per_symbol > 0.0);
}

TEST_CASE("case 2 leakage falls with n where the functions are securely computable") {
  // h(0.1) < 2/3, so the row-4 functions are securely computable here.
  const auto s = make_bss(0.1);
  double previous = 1.0;
  for (int n : {6, 8, 10}) {
    const auto rep = run_case2_protocol(s, example1_row(4), ProtocolConfig{.n = n, .trials = 100});
    CHECK(rep.leakage_per_symbol < previous);
    previous = rep.leakage_per_symbol;
  }
}

TEST_CASE("case 2 codeword rate below its bound leaves terminal 2 in error") {
  const auto s = make_bss(0.25);
  const auto f = example1_row(4);
  auto rates = min_sum_rate(constraints_case2(s, f)).argmin;
  rates.values[2] = 0.0;
  for (int n : {6, 8, 10}) {
    ProtocolConfig cfg{.n = n, .slack = 0.15, .trials = 100};
    cfg.rates = rates;
    CHECK(code_of([&] { run_protocol(s, f, cfg); }) == ErrorCode::kRateVectorInfeasible);
    cfg.allow_infeasible_rates = true;
    const auto rep = run_protocol(s, f, cfg).report;
    CHECK(rep.terminals[1].error_exact > 0.2);
  }
}

TEST_CASE("rate vectors must match the variables") {
  const auto s = make_bss(0.25);
  ProtocolConfig cfg{.n = 4, .trials = 10};
  cfg.rates = RateVector{{1.0}};
  CHECK(code_of([&] { run_protocol(s, example1_row(4), cfg); }) == ErrorCode::kShapeMismatch);
}

TEST_CASE("case 3 data download") {
  const auto s = make_bss(0.1);
  const auto f = make_case3(s, coordinate_table(s, term_bit(2)), {term_bit(2), 0});
  const auto rep = run_case3_protocol(s, f, ProtocolConfig{.n = 10, .slack = 0.3, .trials = 1000});
  MESSAGE("data download error " << rep.terminals[0].error_exact);
  CHECK(rep.terminals[0].error_exact < 0.15);
  CHECK(rep.terminals[1].error_exact == 0.0);
  MESSAGE("data download leakage " << rep.leakage_per_symbol);
  CHECK(rep.leakage_per_symbol > 0.1);
}

TEST_CASE("case 3 with nothing to recover and zero rates is silent") {
  std::mt19937_64 gen(21);
  const auto s = oracle::random_source(gen, 2, 3);
  const auto f = make_case3(s, constant_table(s), {0, 0});
  ProtocolConfig cfg{.n = 4, .trials = 100};
  cfg.rates = RateVector{{0.0, 0.0}};
  cfg.allow_infeasible_rates = true;
  const auto rep = run_protocol(s, f, cfg).report;
  for (auto c : rep.message_sizes) CHECK(c == 1);
  CHECK(rep.transcript_rate == 0.0);
  CHECK(rep.mean_error_exact == 0.0);
  CHECK(rep.leakage_per_symbol == 0.0);
}

TEST_CASE("case 3 on a three-terminal chain") {
  const auto s = chain_source(0.05);
  const auto rep = run_case3_protocol(s, three_terminal_case3(s), ProtocolConfig{.n = 6, .trials = 2000});
  for (const auto& t : rep.terminals) CHECK(t.error_freq < 0.3);
  CHECK_FALSE(rep.has_interactive_check);
}

TEST_CASE("two-terminal transcripts satisfy the interactive inequality") {
  const auto s = make_bss(0.25);
  for (int row = 1; row <= 4; ++row) {
    const auto run = run_protocol(s, example1_row(row), ProtocolConfig{.n = 4, .trials = 10});
    const auto c = check_interactive_inequality(run.law);
    CHECK(c.pass);
    CHECK(c.slack >= -1e-9);
  }
}
