#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mdd/labels.hpp"
#include "mdd/metric.hpp"

namespace mdd {

/// The MDD statistic
///
///   (1/n^2) sum_r sum_i sum_j p_r [F_r(X_i, X_j) - F(X_i, X_j)]^2
///
/// where F(X_i, X_j) is the fraction of the sample inside the closed ball
/// centred at X_i with radius d(X_i, X_j) and F_r is the same fraction taken
/// within class r. per_class[r] holds the r-th term of the outer sum, so
/// value == sum(per_class).
struct MddEstimate {
  double value = 0.0;
  std::vector<double> per_class;
  Index n = 0;
  int classes = 0;
};

struct EstimatorOptions {
  /// Drop the i == j pairs from the double sum and normalise by n(n-1).
  /// Off by default, which keeps the literal V-statistic.
  bool exclude_diagonal = false;
};

/// Literal O(R n^3) evaluation. Serves as the reference for the rank engine.
MddEstimate estimate_naive(const DistanceMatrix& d, const LabelVector& y, EstimatorOptions options = {});

/// Per-row ascending order of distances with tie-aware inclusive counts
/// c[i][j] = #{k : d(i,k) <= d(i,j)}. Ties are exact floating-point
/// equality.
class RankStructure {
 public:
  RankStructure() = default;

  Index size() const { return n_; }

  /// Column indices of row i sorted by distance (ties keep index order).
  std::span<const std::uint32_t> order(Index i) const { return row(order_, i); }

  /// Inclusive count at each sorted position of row i. A tie group ends at
  /// position p exactly when sorted_counts(i)[p] == p + 1.
  std::span<const std::uint32_t> sorted_counts(Index i) const { return row(sorted_counts_, i); }

  /// c[i][j] by original column index.
  std::uint32_t count(Index i, Index j) const {
    return count_[static_cast<std::size_t>(i * n_ + j)];
  }

 private:
  friend RankStructure build_ranks(const DistanceMatrix& d, unsigned threads);

  std::span<const std::uint32_t> row(const std::vector<std::uint32_t>& v, Index i) const {
    return {v.data() + static_cast<std::size_t>(i * n_), static_cast<std::size_t>(n_)};
  }

  Index n_ = 0;
  std::vector<std::uint32_t> order_;
  std::vector<std::uint32_t> sorted_counts_;
  std::vector<std::uint32_t> count_;
};

/// O(n^2 log n); rows are sorted in parallel.
RankStructure build_ranks(const DistanceMatrix& d, unsigned threads = 1);

/// Rank-based evaluation in O(R n^2) given the ranks. Agrees with
/// estimate_naive to rounding.
MddEstimate estimate_fast(const RankStructure& ranks, const LabelVector& y, EstimatorOptions options = {},
                          unsigned threads = 1);

/// Hot path for resampling: the statistic alone, for codes that share the
/// class counts `counts`. Single-threaded, allocation-free given `scratch`
/// of at least counts.size() entries.
double mdd_value(const RankStructure& ranks, std::span<const int> codes, std::span<const Index> counts,
                 EstimatorOptions options, std::span<Index> scratch);

/// Empirical ball CDFs for centre i: unconditional(j) = F(X_i, X_j) and
/// conditional(j, r) = F_r(X_i, X_j).
struct BallCdfTable {
  Eigen::VectorXd unconditional;
  Eigen::MatrixXd conditional;
};

BallCdfTable conditional_cdfs(const RankStructure& ranks, const LabelVector& y, Index i);

}  // namespace mdd
