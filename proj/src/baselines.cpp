#include "mdd/baselines.hpp"

#include <vector>

namespace mdd {

namespace {

void require_same_size(Index a, Index b) {
  if (a != b)
    throw Error(ErrorCode::SizeMismatch, "sizes differ: " + std::to_string(a) + " vs " + std::to_string(b));
}

// Pearson chi-square of [[a11, a12], [a21, a22]]; zero when a margin is empty.
double pearson_2x2(double a11, double a12, double a21, double a22) {
  const double r1 = a11 + a12, r2 = a21 + a22, c1 = a11 + a21, c2 = a12 + a22;
  const double denom = r1 * r2 * c1 * c2;
  if (denom == 0.0) return 0.0;
  const double cross = a12 * a21 - a11 * a22;
  return (r1 + r2) * cross * cross / denom;
}

}  // namespace

DistanceMatrix discrete_label_distances(std::span<const int> codes) {
  const auto n = static_cast<Index>(codes.size());
  Eigen::MatrixXd d(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) d(i, j) = codes[static_cast<std::size_t>(i)] != codes[static_cast<std::size_t>(j)];
  return DistanceMatrix(std::move(d));
}

Eigen::MatrixXd double_centered(const DistanceMatrix& d) {
  const Eigen::MatrixXd& m = d.matrix();
  const Eigen::VectorXd row_mean = m.rowwise().mean();
  const Eigen::RowVectorXd col_mean = m.colwise().mean();
  Eigen::MatrixXd a = m.colwise() - row_mean;
  a.rowwise() -= col_mean;
  a.array() += m.mean();
  return a;
}

BaselineStatistic dcov_statistic(const DistanceMatrix& dx, const DistanceMatrix& dy) {
  require_same_size(dx.size(), dy.size());
  const auto n = static_cast<double>(dx.size());
  const double v = (double_centered(dx).array() * double_centered(dy).array()).sum() / (n * n);
  // The V-statistic is a squared norm; clip rounding noise below zero.
  return {"dcov", std::max(0.0, v)};
}

BaselineStatistic hhg_statistic(const DistanceMatrix& dx, const DistanceMatrix& dy) {
  require_same_size(dx.size(), dy.size());
  const Index n = dx.size();
  if (n < 3) throw Error(ErrorCode::TooFewSamples, "HHG needs n >= 3, got " + std::to_string(n));
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      double a11 = 0, a12 = 0, a21 = 0, a22 = 0;
      for (Index k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const bool in_x = dx(i, k) <= dx(i, j);
        const bool in_y = dy(i, k) <= dy(i, j);
        (in_x ? (in_y ? a11 : a12) : (in_y ? a21 : a22)) += 1.0;
      }
      total += pearson_2x2(a11, a12, a21, a22);
    }
  }
  return {"hhg", total};
}

DcovPlan::DcovPlan(const DistanceMatrix& dx) : centered_(double_centered(dx)) {}

double DcovPlan::value(std::span<const int> codes) const {
  const Index n = centered_.rows();
  require_same_size(n, static_cast<Index>(codes.size()));
  double total = 0.0;
  for (Index j = 0; j < n; ++j) {
    const int cj = codes[static_cast<std::size_t>(j)];
    double col = 0.0;
    for (Index i = 0; i < n; ++i)
      if (codes[static_cast<std::size_t>(i)] != cj) col += centered_(i, j);
    total += col;
  }
  const auto nd = static_cast<double>(n);
  return std::max(0.0, total / (nd * nd));
}

double hhg_categorical(const RankStructure& ranks, std::span<const int> codes, std::span<const Index> counts) {
  const Index n = ranks.size();
  require_same_size(n, static_cast<Index>(codes.size()));
  if (n < 3) throw Error(ErrorCode::TooFewSamples, "HHG needs n >= 3, got " + std::to_string(n));
  const double others = static_cast<double>(n - 2);
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    const auto order = ranks.order(i);
    const auto cumulative = ranks.sorted_counts(i);
    const int own = codes[static_cast<std::size_t>(i)];
    // Class-mates of i other than i and j.
    const double same_class = static_cast<double>(counts[static_cast<std::size_t>(own)] - 2);
    std::uint32_t same_in_ball = 0;
    std::uint32_t partners = 0;  // class-mates j != i in the current tie group
    for (std::uint32_t pos = 0; pos < static_cast<std::uint32_t>(n); ++pos) {
      const std::uint32_t k = order[pos];
      if (codes[k] == own) {
        ++same_in_ball;
        if (static_cast<Index>(k) != i) ++partners;
      }
      if (cumulative[pos] != pos + 1) continue;
      if (partners > 0) {
        // Cells over k not in {i, j}; both i and j sit inside the x-ball and
        // share i's class.
        const double a11 = same_in_ball - 2.0;
        const double in_ball = cumulative[pos] - 2.0;
        const double a12 = in_ball - a11;
        const double a21 = same_class - a11;
        const double a22 = others - in_ball - a21;
        total += partners * pearson_2x2(a11, a12, a21, a22);
      }
      partners = 0;
    }
  }
  return total;
}

}  // namespace mdd
