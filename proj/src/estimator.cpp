#include "mdd/estimator.hpp"

#include <algorithm>
#include <numeric>

namespace mdd {

namespace {

void require_same_size(Index a, Index b) {
  if (a != b)
    throw Error(ErrorCode::SizeMismatch, "distance matrix has " + std::to_string(a) + " observations but " +
                                             std::to_string(b) + " labels were given");
}

double normaliser(Index n, const EstimatorOptions& options) {
  const auto nn = static_cast<double>(n);
  return options.exclude_diagonal ? nn * (nn - 1.0) : nn * nn;
}

// Walks row i of the rank structure once, calling sink(r, term) with the
// contribution of every (tie group, class) pair. class_counts is scratch.
template <class Sink>
void for_each_row_term(const RankStructure& ranks, Index i, std::span<const int> codes,
                       std::span<const Index> counts, const EstimatorOptions& options,
                       std::span<Index> class_counts, Sink&& sink) {
  const Index n = ranks.size();
  const auto nd = static_cast<double>(n);
  const auto order = ranks.order(i);
  const auto cumulative = ranks.sorted_counts(i);
  const std::size_t classes = counts.size();
  std::fill(class_counts.begin(), class_counts.begin() + static_cast<std::ptrdiff_t>(classes), 0);

  std::uint32_t group_start = 0;
  for (std::uint32_t pos = 0; pos < static_cast<std::uint32_t>(n); ++pos) {
    ++class_counts[static_cast<std::size_t>(codes[order[pos]])];
    if (cumulative[pos] != pos + 1) continue;  // tie group continues

    double multiplicity = static_cast<double>(pos + 1 - group_start);
    // The centre always sits in the first (zero-radius) group.
    if (options.exclude_diagonal && group_start == 0) multiplicity -= 1.0;
    group_start = pos + 1;
    if (multiplicity == 0.0) continue;

    const double ball = static_cast<double>(cumulative[pos]) / nd;
    for (std::size_t r = 0; r < classes; ++r) {
      const auto nr = static_cast<double>(counts[r]);
      const double diff = static_cast<double>(class_counts[r]) / nr - ball;
      sink(r, multiplicity * (nr / nd) * diff * diff);
    }
  }
}

}  // namespace

MddEstimate estimate_naive(const DistanceMatrix& d, const LabelVector& y, EstimatorOptions options) {
  require_same_size(d.size(), y.size());
  const Index n = d.size();
  const int classes = y.classes();
  const auto codes = y.codes();
  const auto nd = static_cast<double>(n);

  MddEstimate est;
  est.n = n;
  est.classes = classes;
  est.per_class.assign(static_cast<std::size_t>(classes), 0.0);
  std::vector<Index> in_class(static_cast<std::size_t>(classes));

  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (options.exclude_diagonal && i == j) continue;
      const double radius = d(i, j);
      std::fill(in_class.begin(), in_class.end(), 0);
      Index in_ball = 0;
      for (Index k = 0; k < n; ++k) {
        if (d(i, k) <= radius) {
          ++in_ball;
          ++in_class[static_cast<std::size_t>(codes[static_cast<std::size_t>(k)])];
        }
      }
      const double f = static_cast<double>(in_ball) / nd;
      for (int r = 0; r < classes; ++r) {
        const double fr = static_cast<double>(in_class[static_cast<std::size_t>(r)]) / static_cast<double>(y.count(r));
        est.per_class[static_cast<std::size_t>(r)] += y.proportion(r) * (fr - f) * (fr - f);
      }
    }
  }
  const double norm = normaliser(n, options);
  for (auto& v : est.per_class) v /= norm;
  est.value = std::accumulate(est.per_class.begin(), est.per_class.end(), 0.0);
  return est;
}

RankStructure build_ranks(const DistanceMatrix& d, unsigned threads) {
  RankStructure rs;
  const Index n = d.size();
  const auto nn = static_cast<std::size_t>(n);
  rs.n_ = n;
  rs.order_.resize(nn * nn);
  rs.sorted_counts_.resize(nn * nn);
  rs.count_.resize(nn * nn);

  parallel_for(nn, threads, [&](std::size_t i) {
    std::uint32_t* order = rs.order_.data() + i * nn;
    std::uint32_t* sorted = rs.sorted_counts_.data() + i * nn;
    std::uint32_t* count = rs.count_.data() + i * nn;
    const auto row = d.matrix().row(static_cast<Index>(i));
    std::iota(order, order + nn, 0u);
    std::stable_sort(order, order + nn, [&](std::uint32_t a, std::uint32_t b) { return row(a) < row(b); });

    std::size_t start = 0;
    while (start < nn) {
      std::size_t end = start + 1;
      while (end < nn && row(order[end]) == row(order[start])) ++end;
      const auto inclusive = static_cast<std::uint32_t>(end);
      for (std::size_t p = start; p < end; ++p) {
        sorted[p] = inclusive;
        count[order[p]] = inclusive;
      }
      start = end;
    }
  });
  return rs;
}

MddEstimate estimate_fast(const RankStructure& ranks, const LabelVector& y, EstimatorOptions options,
                          unsigned threads) {
  require_same_size(ranks.size(), y.size());
  const Index n = ranks.size();
  const auto classes = static_cast<std::size_t>(y.classes());

  // Row-major, class-major partial sums, reduced in row order afterwards so
  // the result does not depend on the thread count.
  std::vector<double> partial(static_cast<std::size_t>(n) * classes, 0.0);
  const auto codes = y.codes();
  const auto counts = y.counts();
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
    std::vector<Index> scratch(classes);
    double* out = partial.data() + i * classes;
    for_each_row_term(ranks, static_cast<Index>(i), codes, counts, options, scratch,
                      [&](std::size_t r, double term) { out[r] += term; });
  });

  MddEstimate est;
  est.n = n;
  est.classes = y.classes();
  est.per_class.assign(classes, 0.0);
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i)
    for (std::size_t r = 0; r < classes; ++r) est.per_class[r] += partial[i * classes + r];
  const double norm = normaliser(n, options);
  for (auto& v : est.per_class) v /= norm;
  est.value = std::accumulate(est.per_class.begin(), est.per_class.end(), 0.0);
  return est;
}

double mdd_value(const RankStructure& ranks, std::span<const int> codes, std::span<const Index> counts,
                 EstimatorOptions options, std::span<Index> scratch) {
  require_same_size(ranks.size(), static_cast<Index>(codes.size()));
  double total = 0.0;
  for (Index i = 0; i < ranks.size(); ++i) {
    double row = 0.0;
    for_each_row_term(ranks, i, codes, counts, options, scratch, [&](std::size_t, double term) { row += term; });
    total += row;
  }
  return total / normaliser(ranks.size(), options);
}

BallCdfTable conditional_cdfs(const RankStructure& ranks, const LabelVector& y, Index i) {
  require_same_size(ranks.size(), y.size());
  const Index n = ranks.size();
  if (i < 0 || i >= n)
    throw Error(ErrorCode::IndexOutOfRange, "centre " + std::to_string(i) + " outside [0, " + std::to_string(n) + ")");
  const int classes = y.classes();
  const auto order = ranks.order(i);
  const auto cumulative = ranks.sorted_counts(i);
  const auto codes = y.codes();

  BallCdfTable table{Eigen::VectorXd(n), Eigen::MatrixXd(n, classes)};
  Eigen::VectorXd running = Eigen::VectorXd::Zero(classes);
  std::size_t group_start = 0;
  for (std::size_t pos = 0; pos < static_cast<std::size_t>(n); ++pos) {
    running(codes[order[pos]]) += 1.0;
    if (cumulative[pos] != pos + 1) continue;
    for (std::size_t p = group_start; p <= pos; ++p) {
      const auto j = static_cast<Index>(order[p]);
      table.unconditional(j) = static_cast<double>(cumulative[pos]) / static_cast<double>(n);
      for (int r = 0; r < classes; ++r) table.conditional(j, r) = running(r) / static_cast<double>(y.count(r));
    }
    group_start = pos + 1;
  }
  return table;
}

}  // namespace mdd
