#include "secomp/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "secomp/error.hpp"
#include "secomp/parallel.hpp"

namespace secomp {

namespace {

// Rates at or below this are treated as exactly zero: the matching bound is
// met by deterministic side information and the terminal stays silent.
constexpr double kZeroRate = 1e-9;

std::uint64_t checked_pow(std::uint64_t base, int n, std::uint64_t cap) {
  std::uint64_t v = 1;
  for (int t = 0; t < n; ++t) {
    if (base != 0 && v > cap / base) {
      throw Error(ErrorCode::kEnumerationCapExceeded,
                  std::to_string(base) + "^" + std::to_string(n) +
                      " sequences exceed the cap of " + std::to_string(cap));
    }
    v *= base;
  }
  return v;
}

}  // namespace

BlockModel::BlockModel(const JointSource& src, const FunctionSpec& fns, int n,
                       std::uint64_t cap, int threads)
    : n_(n), m_(src.m()), cells_(src.cells()) {
  if (n < 1) throw Error(ErrorCode::kArgumentOutOfRange, "block length must be >= 1");
  if (static_cast<int>(fns.tables.size()) != m_ + 1) {
    throw Error(ErrorCode::kWrongShape, "function spec does not match source");
  }
  const std::size_t total = checked_pow(cells_, n, cap);
  if (total > (std::uint64_t{1} << 32)) {
    throw Error(ErrorCode::kEnumerationCapExceeded, "sequence index exceeds 32 bits");
  }

  const auto pmf = src.pmf();
  cdf_.resize(cells_);
  double acc = 0.0;
  for (std::size_t c = 0; c < cells_; ++c) {
    acc += pmf[c];
    cdf_[c] = acc;
  }
  // pow_table[c][k] = p_c^k; probabilities are products over the type in a
  // fixed order, so permuted sequences get bit-identical masses.
  std::vector<std::vector<double>> pow_table(cells_, std::vector<double>(n + 1, 1.0));
  for (std::size_t c = 0; c < cells_; ++c) {
    for (int k = 1; k <= n; ++k) pow_table[c][k] = std::pow(pmf[c], k);
  }

  for (int i = 1; i <= m_; ++i) {
    seq_counts_.push_back(static_cast<std::uint32_t>(
        checked_pow(src.alphabet_sizes()[i - 1], n, cap)));
  }
  std::vector<std::uint32_t> ranges;
  for (int k = 0; k <= m_; ++k) {
    ranges.push_back(fns.range_size(k));
    fn_counts_.push_back(static_cast<std::uint32_t>(checked_pow(ranges.back(), n, cap)));
  }

  probs_.assign(total, 0.0);
  seqs_.assign(m_, std::vector<std::uint32_t>(total));
  fn_seqs_.assign(m_ + 1, std::vector<std::uint32_t>(total));

  parallel_for(total, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> digits(n);
    {
      std::size_t rest = begin;
      for (int t = n - 1; t >= 0; --t) {
        digits[t] = rest % cells_;
        rest /= cells_;
      }
    }
    std::vector<int> counts(cells_);
    for (std::size_t j = begin; j < end; ++j) {
      std::fill(counts.begin(), counts.end(), 0);
      for (int t = 0; t < n; ++t) ++counts[digits[t]];
      double p = 1.0;
      for (std::size_t c = 0; c < cells_; ++c) p *= pow_table[c][counts[c]];
      probs_[j] = p;
      for (int i = 1; i <= m_; ++i) {
        const std::uint32_t a = src.alphabet_sizes()[i - 1];
        std::uint32_t s = 0;
        for (int t = 0; t < n; ++t) s = s * a + src.symbol(digits[t], i);
        seqs_[i - 1][j] = s;
      }
      for (int k = 0; k <= m_; ++k) {
        const auto& table = fns.tables[k];
        std::uint32_t s = 0;
        for (int t = 0; t < n; ++t) s = s * ranges[k] + table[digits[t]];
        fn_seqs_[k][j] = s;
      }
      for (int t = n - 1; t >= 0; --t) {
        if (++digits[t] < cells_) break;
        digits[t] = 0;
      }
    }
  });
}

std::size_t BlockModel::cell_at(std::size_t joint, int t) const {
  for (int s = n_ - 1; s > t; --s) joint /= cells_;
  return joint % cells_;
}

std::size_t BlockModel::sample(std::uint64_t seed, std::uint64_t trial) const {
  std::size_t last = cells_ - 1;
  while (last > 0 && (last == 0 ? cdf_[0] : cdf_[last] - cdf_[last - 1]) <= 0.0) --last;
  std::size_t joint = 0;
  for (int t = 0; t < n_; ++t) {
    const double u = rng::unit(rng::draw(seed, rng::Stream::kSample, trial, t));
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    std::size_t c = static_cast<std::size_t>(it - cdf_.begin());
    if (c > last) c = last;
    joint = joint * cells_ + c;
  }
  return joint;
}

std::uint32_t bin_count(int n, double rate) {
  if (!(rate >= 0.0)) throw Error(ErrorCode::kArgumentOutOfRange, "negative rate");
  const double r = std::ceil(std::exp2(n * rate) - 1e-9);
  if (r > 2147483648.0) {
    throw Error(ErrorCode::kEnumerationCapExceeded, "bin count exceeds 2^31");
  }
  return std::max<std::uint32_t>(1, static_cast<std::uint32_t>(r));
}

BinningCode build_binning_code(int terminal, std::uint32_t domain, int n,
                               double rate, std::uint64_t seed, rng::Stream stream,
                               std::uint64_t cap) {
  if (domain > cap) {
    throw Error(ErrorCode::kEnumerationCapExceeded, "binning domain exceeds cap");
  }
  BinningCode code;
  code.terminal = terminal;
  code.stream = stream;
  code.seed = seed;
  code.n = n;
  code.rate = rate;
  code.bins = bin_count(n, rate);
  code.map.resize(domain);
  const std::uint64_t tag = (static_cast<std::uint64_t>(terminal) << 32) |
                            static_cast<std::uint32_t>(n);
  for (std::uint32_t s = 0; s < domain; ++s) {
    code.map[s] = code.bins == 1 ? 0 : rng::below(rng::draw(seed, stream, tag, s), code.bins);
  }
  return code;
}

KeyMap build_key_map(int terminal, std::uint32_t domain, int n, std::uint32_t size,
                     std::uint64_t seed) {
  if (size < 1) throw Error(ErrorCode::kArgumentOutOfRange, "key size must be >= 1");
  KeyMap key;
  key.terminal = terminal;
  key.size = size;
  key.rate = std::log2(static_cast<double>(size)) / n;
  key.map.resize(domain);
  const std::uint64_t tag = (static_cast<std::uint64_t>(terminal) << 32) |
                            static_cast<std::uint32_t>(n);
  for (std::uint32_t s = 0; s < domain; ++s) {
    key.map[s] = size == 1 ? 0 : rng::below(rng::draw(seed, rng::Stream::kKey, tag, s), size);
  }
  return key;
}

std::size_t sw_decode(const BlockModel& block, const Observation& obs) {
  if (obs.columns.size() != obs.values.size()) {
    throw Error(ErrorCode::kShapeMismatch, "one observed value per column");
  }
  const auto probs = block.probs();
  std::size_t best = block.size();
  double best_p = -1.0;
  for (std::size_t j = 0; j < block.size(); ++j) {
    bool match = true;
    for (std::size_t c = 0; c < obs.columns.size() && match; ++c) {
      match = obs.columns[c][j] == obs.values[c];
    }
    if (match && probs[j] > best_p) {
      best = j;
      best_p = probs[j];
    }
  }
  if (best == block.size()) {
    throw Error(ErrorCode::kNoConsistentSequence, "no sequence matches the observation");
  }
  return best;
}

std::vector<std::uint32_t> sw_decode_all(
    const BlockModel& block, std::span<const std::span<const std::uint32_t>> columns) {
  std::size_t groups = 0;
  const auto ids = group_labels(columns, block.size(), &groups);
  const auto probs = block.probs();
  std::vector<std::uint32_t> best(groups, 0);
  std::vector<double> best_p(groups, -1.0);
  for (std::size_t j = 0; j < block.size(); ++j) {
    const auto g = ids[j];
    if (probs[j] > best_p[g]) {
      best_p[g] = probs[j];
      best[g] = static_cast<std::uint32_t>(j);
    }
  }
  std::vector<std::uint32_t> out(block.size());
  for (std::size_t j = 0; j < block.size(); ++j) out[j] = best[ids[j]];
  return out;
}

TranscriptLaw exact_transcript_law(const BlockModel& block,
                                   std::span<const Message> transcript) {
  TranscriptLaw tl;
  tl.n = block.n();
  tl.law = JointLaw(std::vector<double>(block.probs().begin(), block.probs().end()));
  for (int i = 1; i <= block.m(); ++i) {
    const auto s = block.seq(i);
    tl.seq_cols.push_back(tl.law.add_column("X" + std::to_string(i) + "^n",
                                            std::vector<std::uint32_t>(s.begin(), s.end())));
  }
  const auto g0 = block.fn_seq(0);
  tl.g0_col = tl.law.add_column("G0^n", std::vector<std::uint32_t>(g0.begin(), g0.end()));
  for (const auto& msg : transcript) {
    tl.message_cols.push_back(tl.law.add_column(msg.name, msg.values));
  }
  return tl;
}

bool is_interactive(const BlockModel& block, std::span<const Message> transcript) {
  for (std::size_t k = 0; k < transcript.size(); ++k) {
    const auto& msg = transcript[k];
    if (msg.sender < 1) continue;
    std::vector<std::span<const std::uint32_t>> cols{block.seq(msg.sender)};
    for (std::size_t e = 0; e < k; ++e) cols.emplace_back(transcript[e].values);
    std::size_t groups = 0;
    const auto ids = group_labels(cols, block.size(), &groups);
    std::vector<std::int64_t> value(groups, -1);
    for (std::size_t j = 0; j < block.size(); ++j) {
      auto& v = value[ids[j]];
      if (v < 0) {
        v = msg.values[j];
      } else if (v != msg.values[j]) {
        return false;
      }
    }
  }
  return true;
}

KeyQuality key_quality(const KeyMap& key, const TranscriptLaw& tl,
                       std::span<const int> conditioning) {
  const auto& law = tl.law;
  const auto xs = law.column(tl.seq_cols.at(key.terminal - 1));
  std::vector<std::uint32_t> k(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) k[j] = key.map.at(xs[j]);

  std::size_t cond_groups = 0;
  const auto cond = law.group(conditioning, &cond_groups);
  const std::span<const std::uint32_t> pair[] = {k, cond};
  std::size_t joint_groups = 0;
  const auto joint = group_labels(pair, k.size(), &joint_groups);

  const auto probs = law.probs();
  std::vector<double> mk(key.size, 0.0), mc(cond_groups, 0.0), mj(joint_groups, 0.0);
  for (std::size_t j = 0; j < k.size(); ++j) {
    mk[k[j]] += probs[j];
    mc[cond[j]] += probs[j];
    mj[joint[j]] += probs[j];
  }
  const double hk = entropy_bits(mk);
  const double info = std::max(0.0, hk + entropy_bits(mc) - entropy_bits(mj));
  KeyQuality q;
  q.uniformity_deficit = std::abs(hk / tl.n - key.rate);
  q.independence_leakage = info / tl.n;
  return q;
}

namespace {

double operating_rate(double vertex, double slack) {
  return vertex > kZeroRate ? vertex + slack : 0.0;
}

double exact_error(const BlockModel& block, const std::vector<char>& correct) {
  double e = 0.0;
  const auto probs = block.probs();
  for (std::size_t j = 0; j < block.size(); ++j) {
    if (!correct[j]) e += probs[j];
  }
  return e;
}

std::vector<char> agree(std::span<const std::uint32_t> labels,
                        const std::vector<std::uint32_t>& decoded) {
  std::vector<char> ok(labels.size());
  for (std::size_t j = 0; j < labels.size(); ++j) ok[j] = labels[decoded[j]] == labels[j];
  return ok;
}

}  // namespace

ProtocolRun run_protocol(const JointSource& src, const FunctionSpec& fns,
                         const ProtocolConfig& cfg) {
  check_spec(src, fns);
  if (cfg.trials < 0) throw Error(ErrorCode::kArgumentOutOfRange, "trials must be >= 0");
  if (!(cfg.slack >= 0.0)) throw Error(ErrorCode::kArgumentOutOfRange, "slack must be >= 0");
  const int m = src.m();
  const int n = cfg.n;
  const CaseTag tag = fns.case_tag;
  const bool two_stage = tag != CaseTag::kCase3;
  const int m0 = two_stage ? fns.m0 : 0;

  const ConstraintSet cs = build_constraints(src, fns);
  RateVector base;
  if (cfg.rates) {
    if (cfg.rates->values.size() != cs.variables.size()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "rate vector needs " + std::to_string(cs.variables.size()) + " entries");
    }
    if (!cfg.allow_infeasible_rates && !is_feasible(cs, *cfg.rates)) {
      throw Error(ErrorCode::kRateVectorInfeasible,
                  "rates violate the case constraint set");
    }
    base = *cfg.rates;
  } else {
    base = min_sum_rate(cs).argmin;
  }

  const BlockModel block(src, fns, n, cfg.enumeration_cap, cfg.threads);
  ProtocolRun run;
  RunReport& rep = run.report;
  rep.case_tag = tag;
  rep.n = n;
  rep.seed = cfg.seed;
  rep.slack = cfg.slack;
  rep.trials = cfg.trials;
  rep.encrypt = tag == CaseTag::kCase1 && cfg.encrypt;
  auto& transcript = run.transcript;

  // Stage 1: every terminal bins its own sequence.
  for (int i = 1; i <= m; ++i) {
    const double rate = operating_rate(base.values[i - 1], cfg.slack);
    const auto code = build_binning_code(i, block.seq_count(i), n, rate, cfg.seed,
                                         rng::Stream::kSourceBinning, cfg.enumeration_cap);
    Message msg{"F" + std::to_string(i), i, code.bins, {}};
    const auto s = block.seq(i);
    msg.values.resize(block.size());
    for (std::size_t j = 0; j < block.size(); ++j) msg.values[j] = code(s[j]);
    rep.rate_names.push_back(cs.variables[i - 1]);
    rep.rates.push_back(rate);
    transcript.push_back(std::move(msg));
  }
  const std::size_t stage1 = transcript.size();
  auto stage1_columns = [&](int own) {
    std::vector<std::span<const std::uint32_t>> cols{block.seq(own)};
    for (std::size_t k = 0; k < stage1; ++k) cols.emplace_back(transcript[k].values);
    return cols;
  };

  // Omniscience decoding; G_0^n is decoder side information for terminals
  // outside [1, m0] (all terminals in case 3).
  std::vector<std::vector<std::uint32_t>> plain_decode(m + 1);
  rep.terminals.resize(m);
  for (int i = 1; i <= m; ++i) {
    auto cols = stage1_columns(i);
    plain_decode[i] = sw_decode_all(block, cols);
    const bool genie = !two_stage || i > m0;
    std::vector<std::uint32_t> omni;
    if (genie) {
      cols.emplace_back(block.fn_seq(0));
      omni = sw_decode_all(block, cols);
    }
    const auto& dec = genie ? omni : plain_decode[i];
    double miss = 0.0;
    for (std::size_t j = 0; j < block.size(); ++j) {
      if (dec[j] != j) miss += block.probs()[j];
    }
    rep.terminals[i - 1].terminal = i;
    rep.terminals[i - 1].omniscience_error = miss;
  }

  std::vector<std::vector<char>> correct(m + 1);
  std::vector<KeyMap> keys;
  std::vector<std::size_t> key_msg;  // transcript index of each key's ciphertext
  if (two_stage) {
    for (int i = 1; i <= m0; ++i) correct[i] = agree(block.fn_seq(i), plain_decode[i]);
    const EntropyEngine eng(src, fns);
    const auto& sender_view = plain_decode[1];
    for (int j = m0 + 1; j <= m; ++j) {
      double vertex = 0.0;
      if (tag == CaseTag::kCase1) {
        vertex = eng.cond_entropy(RvExpr::g(func_bit(j)), RvExpr::x(term_bit(j)));
      } else {
        vertex = base.values[m + (j - m0 - 1)];
      }
      const double rate = operating_rate(vertex, cfg.slack);
      const auto code = build_binning_code(j, block.fn_seq_count(j), n, rate, cfg.seed,
                                           rng::Stream::kCodeword, cfg.enumeration_cap);
      const auto gj = block.fn_seq(j);
      const auto xj = block.seq(j);
      std::vector<std::uint32_t> sent(block.size()), seen(block.size());
      const bool pad = rep.encrypt;
      KeyMap key;
      if (pad) key = build_key_map(j, block.seq_count(j), n, code.bins, cfg.seed);
      for (std::size_t x = 0; x < block.size(); ++x) {
        const std::uint32_t hat = sender_view[x];
        const std::uint32_t word = code(gj[hat]);
        if (pad) {
          const std::uint32_t r = code.bins;
          sent[x] = static_cast<std::uint32_t>((std::uint64_t{word} + key.map[xj[hat]]) % r);
          seen[x] = static_cast<std::uint32_t>((std::uint64_t{sent[x]} + r - key.map[xj[x]]) % r);
        } else {
          sent[x] = word;
          seen[x] = word;
        }
      }
      auto cols = stage1_columns(j);
      cols.emplace_back(seen);
      correct[j] = agree(gj, sw_decode_all(block, cols));
      rep.rate_names.push_back("R'" + std::to_string(j));
      rep.rates.push_back(rate);
      if (pad) {
        key_msg.push_back(transcript.size());
        keys.push_back(std::move(key));
      }
      transcript.push_back(Message{(pad ? "C" : "Fhat") + std::to_string(j), 1,
                                   code.bins, std::move(sent)});
    }
  } else {
    for (int i = 1; i <= m; ++i) correct[i] = agree(block.fn_seq(i), plain_decode[i]);
  }

  run.law = exact_transcript_law(block, transcript);
  rep.leakage_per_symbol = run.law.leakage_per_symbol();
  for (const auto& msg : transcript) {
    rep.message_names.push_back(msg.name);
    rep.message_sizes.push_back(msg.cardinality);
    rep.transcript_rate += std::log2(static_cast<double>(msg.cardinality)) / n;
  }

  for (std::size_t k = 0; k < keys.size(); ++k) {
    std::vector<int> cond{run.law.g0_col};
    for (std::size_t e = 0; e < key_msg[k]; ++e) cond.push_back(run.law.message_cols[e]);
    const auto q = key_quality(keys[k], run.law, cond);
    rep.keys.push_back({keys[k].terminal, keys[k].size, keys[k].rate,
                        q.uniformity_deficit, q.independence_leakage});
  }

  std::vector<std::size_t> misses(m + 1, 0);
  for (int t = 0; t < cfg.trials; ++t) {
    const std::size_t j = block.sample(cfg.seed, static_cast<std::uint64_t>(t));
    for (int i = 1; i <= m; ++i) misses[i] += correct[i][j] ? 0 : 1;
  }
  for (int i = 1; i <= m; ++i) {
    auto& ts = rep.terminals[i - 1];
    ts.error_exact = exact_error(block, correct[i]);
    ts.error_freq = cfg.trials > 0 ? static_cast<double>(misses[i]) / cfg.trials : 0.0;
    rep.mean_error_freq += ts.error_freq / m;
    rep.mean_error_exact += ts.error_exact / m;
  }

  if (m == 2) {
    rep.has_interactive_check = true;
    rep.interactive_slack = check_interactive_inequality(run.law).slack;
  }
  return run;
}

namespace {

void require_case(const FunctionSpec& fns, CaseTag tag) {
  if (fns.case_tag != tag) {
    throw Error(ErrorCode::kWrongCaseTag, "protocol runner does not match spec case");
  }
}

}  // namespace

RunReport run_case1_protocol(const JointSource& src, const FunctionSpec& fns,
                             const ProtocolConfig& cfg) {
  require_case(fns, CaseTag::kCase1);
  return run_protocol(src, fns, cfg).report;
}

RunReport run_case2_protocol(const JointSource& src, const FunctionSpec& fns,
                             const ProtocolConfig& cfg) {
  require_case(fns, CaseTag::kCase2);
  return run_protocol(src, fns, cfg).report;
}

RunReport run_case3_protocol(const JointSource& src, const FunctionSpec& fns,
                             const ProtocolConfig& cfg) {
  require_case(fns, CaseTag::kCase3);
  return run_protocol(src, fns, cfg).report;
}

}  // namespace secomp
