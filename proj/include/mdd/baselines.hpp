#pragma once

#include <span>
#include <string>

#include "mdd/estimator.hpp"
#include "mdd/labels.hpp"
#include "mdd/metric.hpp"

namespace mdd {

struct BaselineStatistic {
  std::string name;
  double value = 0.0;
};

/// Discrete metric on classes: d(y_i, y_j) = 1 if the labels differ.
DistanceMatrix discrete_label_distances(std::span<const int> codes);
inline DistanceMatrix discrete_label_distances(const LabelVector& y) { return discrete_label_distances(y.codes()); }

/// Double-centring of a distance matrix: d_ij - row mean - column mean + grand mean.
Eigen::MatrixXd double_centered(const DistanceMatrix& d);

/// Squared sample distance covariance (V-statistic): mean of A_ij * B_ij over
/// the double-centred matrices.
BaselineStatistic dcov_statistic(const DistanceMatrix& dx, const DistanceMatrix& dy);

/// Sum over ordered pairs i != j of the Pearson chi-square of the 2x2 table
/// that cross-classifies k not in {i, j} by d_x(i,k) <= d_x(i,j) and
/// d_y(i,k) <= d_y(i,j). Tables with an empty margin add nothing. O(n^3).
BaselineStatistic hhg_statistic(const DistanceMatrix& dx, const DistanceMatrix& dy);

/// dCov against the discrete label metric, re-evaluated per labelling in
/// O(n^2). Because A has zero row and column sums, sum A_ij B_ij reduces to
/// sum A_ij [y_i != y_j].
class DcovPlan {
 public:
  explicit DcovPlan(const DistanceMatrix& dx);
  double value(std::span<const int> codes) const;

 private:
  Eigen::MatrixXd centered_;
};

/// HHG against the discrete label metric from the ranks of d_x. Only pairs
/// with y_i == y_j have a non-degenerate table, and its cells follow from
/// the inclusive ball counts, so one pass per row suffices.
double hhg_categorical(const RankStructure& ranks, std::span<const int> codes, std::span<const Index> counts);

}  // namespace mdd
