#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace secomp {

// A finite joint distribution stored column-wise: every outcome has a
// probability and one label per column. Each column is one random variable;
// entropies of any sub-collection are obtained by grouping outcomes on the
// selected labels. All quantities are in bits.
class JointLaw {
 public:
  JointLaw() = default;
  explicit JointLaw(std::vector<double> probs);

  std::size_t outcomes() const { return probs_.size(); }
  std::size_t columns() const { return cols_.size(); }
  std::span<const double> probs() const { return probs_; }

  // Appends a column; labels must have one entry per outcome.
  int add_column(std::string name, std::vector<std::uint32_t> labels);
  std::span<const std::uint32_t> column(int c) const { return cols_.at(c); }
  const std::string& name(int c) const { return names_.at(c); }
  int find(std::string_view name) const;  // -1 if absent

  // Dense group ids (first-occurrence order) for the tuple of columns.
  // Returns the number of groups through `groups`.
  std::vector<std::uint32_t> group(std::span<const int> cols,
                                   std::size_t* groups) const;

  double entropy(std::span<const int> cols) const;
  double cond_entropy(std::span<const int> target,
                      std::span<const int> given) const;
  // I(a ∧ b | given), clamped at 0 when rounding makes it slightly negative.
  double mutual_information(std::span<const int> a, std::span<const int> b,
                            std::span<const int> given = {}) const;

 private:
  void check_cols(std::span<const int> cols) const;

  std::vector<double> probs_;
  std::vector<std::vector<std::uint32_t>> cols_;
  std::vector<std::string> names_;
};

// Exact law of a block-length-n run: the per-terminal sequences X_i^n,
// the private function sequence G_0^n, and the public messages.
struct TranscriptLaw {
  JointLaw law;
  int n = 1;
  std::vector<int> seq_cols;      // seq_cols[i-1] is X_i^n
  int g0_col = -1;
  std::vector<int> message_cols;  // F, in transmission order

  // (1/n) I(G_0^n ∧ F)
  double leakage_per_symbol() const;
};

// Dense ids (first-occurrence order) for the tuple of label columns, all of
// equal length. `groups` receives the number of distinct tuples.
std::vector<std::uint32_t> group_labels(
    std::span<const std::span<const std::uint32_t>> cols, std::size_t length,
    std::size_t* groups);

// Entropy of a probability vector, 0 log 0 = 0.
double entropy_bits(std::span<const double> masses);

}  // namespace secomp
