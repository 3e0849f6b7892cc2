#include "mdd/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mdd {

double permutation_p_value(double observed, std::span<const double> permuted) {
  const auto exceed = std::count_if(permuted.begin(), permuted.end(), [&](double s) { return s >= observed; });
  return (1.0 + static_cast<double>(exceed)) / (static_cast<double>(permuted.size()) + 1.0);
}

void shuffle_codes(std::span<int> codes, std::uint64_t seed, std::uint64_t b) {
  Philox eng(seed, b);
  for (std::size_t k = codes.size(); k > 1; --k) {
    const auto j = static_cast<std::size_t>(uniform_index(eng, k));
    std::swap(codes[k - 1], codes[j]);
  }
}

TestResult permutation_test(const RankStructure& ranks, const LabelVector& y, const PermutationOptions& options) {
  if (ranks.size() != y.size())
    throw Error(ErrorCode::SizeMismatch, "distance matrix has " + std::to_string(ranks.size()) +
                                             " observations but " + std::to_string(y.size()) + " labels were given");
  if (options.permutations == 0) throw Error(ErrorCode::InvalidB, "number of permutations must be at least 1");

  const auto counts = y.counts();
  auto statistic = [&](std::span<const int> codes) {
    std::vector<Index> scratch(counts.size());
    return mdd_value(ranks, codes, counts, options.estimator, scratch);
  };

  TestResult result;
  result.n = y.size();
  result.classes = y.classes();
  result.permutations = options.permutations;
  result.seed = options.seed;
  // Observed value through the same code path as the permuted ones, so an
  // identity permutation ties exactly.
  result.statistic = statistic(y.codes());
  result.scaled = static_cast<double>(result.n) * result.statistic;
  result.per_class = estimate_fast(ranks, y, options.estimator).per_class;

  auto stats = permutation_statistics(y.codes(), options.permutations, options.seed, options.threads, statistic);
  result.p_value = permutation_p_value(result.statistic, stats);
  if (options.keep_statistics) result.permutation_stats = std::move(stats);
  if (y.classes() == 1) result.warnings.emplace_back("DegenerateLabels: only one class observed");
  return result;
}

std::vector<std::size_t> AdjustedPValues::rejected() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < adjusted.size(); ++i)
    if (adjusted[i] <= level) out.push_back(i);
  return out;
}

AdjustedPValues bh_adjust(std::span<const double> raw, double level) {
  if (raw.empty()) throw Error(ErrorCode::OutOfRangePValue, "need at least one p-value");
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (!(raw[i] >= 0.0 && raw[i] <= 1.0))
      throw Error(ErrorCode::OutOfRangePValue, "p-value " + std::to_string(raw[i]) + " at position " +
                                                   std::to_string(i) + " is outside [0, 1]");

  const std::size_t m = raw.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return raw[a] < raw[b]; });

  AdjustedPValues out;
  out.raw.assign(raw.begin(), raw.end());
  out.adjusted.resize(m);
  out.level = level;
  double running = 1.0;
  for (std::size_t rank = m; rank >= 1; --rank) {
    const std::size_t idx = order[rank - 1];
    running = std::min(running, raw[idx] * (static_cast<double>(m) / static_cast<double>(rank)));
    out.adjusted[idx] = running;
  }
  return out;
}

}  // namespace mdd
