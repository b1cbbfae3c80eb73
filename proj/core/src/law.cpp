#include "secomp/law.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "secomp/error.hpp"

namespace secomp {

double entropy_bits(std::span<const double> masses) {
  double h = 0.0;
  for (double p : masses) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

std::vector<std::uint32_t> group_labels(
    std::span<const std::span<const std::uint32_t>> cols, std::size_t length,
    std::size_t* groups) {
  std::vector<std::uint32_t> ids(length, 0);
  std::size_t count = length == 0 ? 0 : 1;
  std::unordered_map<std::uint64_t, std::uint32_t> dense;
  for (const auto& col : cols) {
    if (col.size() != length) {
      throw Error(ErrorCode::kShapeMismatch, "label columns differ in length");
    }
    dense.clear();
    dense.reserve(std::min<std::size_t>(length, count * 64));
    for (std::size_t k = 0; k < length; ++k) {
      const std::uint64_t key =
          (static_cast<std::uint64_t>(ids[k]) << 32) | col[k];
      auto [it, inserted] =
          dense.try_emplace(key, static_cast<std::uint32_t>(dense.size()));
      ids[k] = it->second;
    }
    count = dense.size();
  }
  if (groups != nullptr) *groups = count;
  return ids;
}

JointLaw::JointLaw(std::vector<double> probs) : probs_(std::move(probs)) {}

int JointLaw::add_column(std::string name, std::vector<std::uint32_t> labels) {
  if (labels.size() != probs_.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "column '" + name + "' has " + std::to_string(labels.size()) +
                    " labels for " + std::to_string(probs_.size()) +
                    " outcomes");
  }
  cols_.push_back(std::move(labels));
  names_.push_back(std::move(name));
  return static_cast<int>(cols_.size()) - 1;
}

int JointLaw::find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
}

void JointLaw::check_cols(std::span<const int> cols) const {
  for (int c : cols) {
    if (c < 0 || static_cast<std::size_t>(c) >= cols_.size()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "column " + std::to_string(c) + " not in law");
    }
  }
}

std::vector<std::uint32_t> JointLaw::group(std::span<const int> cols,
                                           std::size_t* groups) const {
  check_cols(cols);
  std::vector<std::span<const std::uint32_t>> views;
  for (int c : cols) views.emplace_back(cols_[c]);
  return group_labels(views, probs_.size(), groups);
}

double JointLaw::entropy(std::span<const int> cols) const {
  if (cols.empty()) return 0.0;
  std::size_t groups = 0;
  const auto ids = group(cols, &groups);
  std::vector<double> mass(groups, 0.0);
  for (std::size_t k = 0; k < probs_.size(); ++k) mass[ids[k]] += probs_[k];
  return entropy_bits(mass);
}

double JointLaw::cond_entropy(std::span<const int> target,
                              std::span<const int> given) const {
  if (target.empty()) return 0.0;
  std::vector<int> both(given.begin(), given.end());
  both.insert(both.end(), target.begin(), target.end());
  const double h = entropy(both) - entropy(given);
  return h < 0.0 ? 0.0 : h;
}

double JointLaw::mutual_information(std::span<const int> a,
                                    std::span<const int> b,
                                    std::span<const int> given) const {
  std::vector<int> bg(given.begin(), given.end());
  bg.insert(bg.end(), b.begin(), b.end());
  const double i = cond_entropy(a, given) - cond_entropy(a, bg);
  return i < 0.0 ? 0.0 : i;
}

}  // namespace secomp

namespace secomp {

double TranscriptLaw::leakage_per_symbol() const {
  const int g0[] = {g0_col};
  return law.mutual_information(g0, message_cols) / n;
}

}  // namespace secomp
