#pragma once

#include <span>
#include <string>
#include <vector>

#include "mdd/metric.hpp"

namespace mdd {

/// Per-observation class codes 0..R-1 with derived class counts n_r.
/// R is inferred from the data, so every class is non-empty.
class LabelVector {
 public:
  explicit LabelVector(std::vector<int> codes);

  /// Same as above, but rejects a declared class count the data does not
  /// support instead of silently dropping empty classes.
  LabelVector(std::vector<int> codes, int declared_classes);

  /// Maps arbitrary raw labels to dense codes. Labels sort numerically when
  /// they all parse as numbers, lexicographically otherwise.
  static LabelVector encode(const std::vector<std::string>& raw);

  Index size() const { return static_cast<Index>(codes_.size()); }
  int classes() const { return static_cast<int>(counts_.size()); }
  std::span<const int> codes() const { return codes_; }
  std::span<const Index> counts() const { return counts_; }
  Index count(int r) const { return counts_[static_cast<std::size_t>(r)]; }
  double proportion(int r) const { return static_cast<double>(count(r)) / static_cast<double>(size()); }

  /// Raw label text per class code; empty unless built by encode().
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<int> codes_;
  std::vector<Index> counts_;
  std::vector<std::string> names_;
};

}  // namespace mdd
