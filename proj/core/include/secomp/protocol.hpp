#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "secomp/law.hpp"
#include "secomp/rate_region.hpp"
#include "secomp/rng.hpp"
#include "secomp/source.hpp"

namespace secomp {

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;

// The i.i.d. extension of (src, fns) to block length n, fully enumerated.
// Joint sequence index J encodes the cell at position 0 most significantly,
// so increasing J is lexicographic order on sequences of joint symbols.
class BlockModel {
 public:
  BlockModel(const JointSource& src, const FunctionSpec& fns, int n,
             std::uint64_t cap = kDefaultEnumerationCap, int threads = 1);

  int n() const { return n_; }
  int m() const { return m_; }
  std::size_t size() const { return probs_.size(); }
  std::span<const double> probs() const { return probs_; }
  // X_i^n as an index in [0, |X_i|^n), per joint sequence.
  std::span<const std::uint32_t> seq(int terminal) const { return seqs_.at(terminal - 1); }
  std::uint32_t seq_count(int terminal) const { return seq_counts_.at(terminal - 1); }
  // G_k^n as an index in [0, |Y_k|^n), per joint sequence.
  std::span<const std::uint32_t> fn_seq(int k) const { return fn_seqs_.at(k); }
  std::uint32_t fn_seq_count(int k) const { return fn_counts_.at(k); }
  // Joint symbol at position t of sequence J.
  std::size_t cell_at(std::size_t joint, int t) const;
  // Draws a joint sequence from the block law (inverse CDF per position).
  std::size_t sample(std::uint64_t seed, std::uint64_t trial) const;

 private:
  int n_;
  int m_;
  std::size_t cells_;
  std::vector<double> cdf_;
  std::vector<double> probs_;
  std::vector<std::vector<std::uint32_t>> seqs_;
  std::vector<std::uint32_t> seq_counts_;
  std::vector<std::vector<std::uint32_t>> fn_seqs_;
  std::vector<std::uint32_t> fn_counts_;
};

// Random binning of a finite domain into r = ceil(2^{n*rate}) bins; each
// domain point gets an independent uniform bin from the counter generator
// keyed by (seed, stream, terminal, n, point).
struct BinningCode {
  int terminal = 0;
  rng::Stream stream = rng::Stream::kSourceBinning;
  std::uint64_t seed = 0;
  int n = 1;
  double rate = 0.0;
  std::uint32_t bins = 1;
  std::vector<std::uint32_t> map;  // domain point -> bin

  std::uint32_t operator()(std::uint32_t point) const { return map[point]; }
};

std::uint32_t bin_count(int n, double rate);

BinningCode build_binning_code(int terminal, std::uint32_t domain, int n,
                               double rate, std::uint64_t seed,
                               rng::Stream stream = rng::Stream::kSourceBinning,
                               std::uint64_t cap = kDefaultEnumerationCap);

// Key extracted by terminal j from X_j^n; a binning under the key stream.
struct KeyMap {
  int terminal = 0;
  double rate = 0.0;  // log2(size) / n
  std::uint32_t size = 1;
  std::vector<std::uint32_t> map;
};

KeyMap build_key_map(int terminal, std::uint32_t domain, int n,
                     std::uint32_t size, std::uint64_t seed);

// A public message: one value per joint sequence, sent by `sender`
// (0 for a message attributed to no terminal, used only in tests).
struct Message {
  std::string name;
  int sender = 0;
  std::uint32_t cardinality = 1;
  std::vector<std::uint32_t> values;
};

// Observations of a decoder, each a per-sequence label column and the
// observed value of that column.
struct Observation {
  std::vector<std::span<const std::uint32_t>> columns;
  std::vector<std::uint32_t> values;
};

// MAP joint sequence among those matching every observation; ties go to the
// smallest index. Throws kNoConsistentSequence if nothing matches.
std::size_t sw_decode(const BlockModel& block, const Observation& obs);

// The MAP decision for every joint sequence at once: result[J] is the MAP
// sequence given the observation columns evaluated at J.
std::vector<std::uint32_t> sw_decode_all(
    const BlockModel& block, std::span<const std::span<const std::uint32_t>> columns);

// Exact law of (X_1^n..X_m^n, G_0^n, messages).
TranscriptLaw exact_transcript_law(const BlockModel& block,
                                   std::span<const Message> transcript);

// Each message is a function of its sender's sequence and earlier messages.
bool is_interactive(const BlockModel& block, std::span<const Message> transcript);

struct KeyQuality {
  double uniformity_deficit = 0.0;    // |H(K)/n - rate|
  double independence_leakage = 0.0;  // (1/n) I(K ∧ conditioning)
};

// `conditioning` are column indices of `law` (G_0^n, earlier messages).
KeyQuality key_quality(const KeyMap& key, const TranscriptLaw& law,
                       std::span<const int> conditioning);

struct ProtocolConfig {
  int n = 8;
  double slack = 0.15;
  std::uint64_t seed = 1;
  int trials = 10000;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
  bool encrypt = true;  // case 1 stage 2 one-time pad
  // Overrides the LP vertex; indexed like the case's ConstraintSet variables.
  std::optional<RateVector> rates;
  bool allow_infeasible_rates = false;
  int threads = 1;
};

struct TerminalStats {
  int terminal = 0;
  double error_freq = 0.0;      // Monte Carlo over `trials` blocks
  double error_exact = 0.0;     // exact probability by enumeration
  double omniscience_error = 0.0;  // stage-1 recovery of X_M^n (exact)
};

struct KeyStats {
  int terminal = 0;
  std::uint32_t size = 1;
  double rate = 0.0;
  double uniformity_deficit = 0.0;
  double independence_leakage = 0.0;
};

struct RunReport {
  CaseTag case_tag = CaseTag::kCase1;
  int n = 0;
  std::uint64_t seed = 0;
  double slack = 0.0;
  int trials = 0;
  bool encrypt = true;
  std::vector<std::string> rate_names;
  std::vector<double> rates;            // operating rates, slack included
  std::vector<std::string> message_names;
  std::vector<std::uint32_t> message_sizes;
  std::vector<TerminalStats> terminals;
  double mean_error_freq = 0.0;
  double mean_error_exact = 0.0;
  double leakage_per_symbol = 0.0;      // (1/n) I(G_0^n ∧ F)
  std::vector<KeyStats> keys;
  double transcript_rate = 0.0;         // (1/n) log ||F||
  bool has_interactive_check = false;
  double interactive_slack = 0.0;
};

struct ProtocolRun {
  RunReport report;
  std::vector<Message> transcript;
  TranscriptLaw law;
};

RunReport run_case1_protocol(const JointSource& src, const FunctionSpec& fns,
                             const ProtocolConfig& cfg);
RunReport run_case2_protocol(const JointSource& src, const FunctionSpec& fns,
                             const ProtocolConfig& cfg);
RunReport run_case3_protocol(const JointSource& src, const FunctionSpec& fns,
                             const ProtocolConfig& cfg);

// Dispatches on fns.case_tag and keeps the transcript and its law.
ProtocolRun run_protocol(const JointSource& src, const FunctionSpec& fns,
                         const ProtocolConfig& cfg);

}  // namespace secomp
