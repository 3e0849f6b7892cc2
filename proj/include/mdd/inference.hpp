#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mdd/estimator.hpp"
#include "mdd/parallel.hpp"
#include "mdd/random.hpp"
#include "mdd/simgen.hpp"

namespace mdd {

struct TestResult {
  double statistic = 0.0;
  double scaled = 0.0;  // n * statistic
  double p_value = 1.0;
  std::size_t permutations = 0;
  std::uint64_t seed = 0;
  std::string method = "permutation";
  Index n = 0;
  int classes = 0;
  std::vector<double> per_class;
  std::vector<double> permutation_stats;  // empty unless retained
  std::vector<std::string> warnings;
};

struct PermutationOptions {
  std::size_t permutations = 499;
  std::uint64_t seed = 0;
  bool keep_statistics = false;
  unsigned threads = 1;
  EstimatorOptions estimator{};
};

/// Add-one permutation p-value (1 + #{stat_b >= observed}) / (B + 1).
double permutation_p_value(double observed, std::span<const double> permuted);

/// Fisher-Yates shuffle of `codes` driven by permutation b's own substream.
/// Permutation b is identical no matter which thread draws it.
void shuffle_codes(std::span<int> codes, std::uint64_t seed, std::uint64_t b);

/// Evaluates `statistic(codes)` on B label permutations. The functor must be
/// safe to call concurrently.
template <class Statistic>
std::vector<double> permutation_statistics(std::span<const int> codes, std::size_t permutations,
                                           std::uint64_t seed, unsigned threads, Statistic&& statistic) {
  if (permutations == 0) throw Error(ErrorCode::InvalidB, "number of permutations must be at least 1");
  std::vector<double> stats(permutations);
  parallel_for(permutations, threads, [&](std::size_t b) {
    std::vector<int> shuffled(codes.begin(), codes.end());
    shuffle_codes(shuffled, seed, b);
    stats[b] = statistic(std::span<const int>(shuffled));
  });
  return stats;
}

/// MDD permutation test reusing one rank structure for every replicate.
TestResult permutation_test(const RankStructure& ranks, const LabelVector& y, const PermutationOptions& options);

struct AdjustedPValues {
  std::vector<double> raw;
  std::vector<double> adjusted;
  std::string method = "BH";
  double level = 0.05;

  /// Indices whose adjusted value is at or below the level.
  std::vector<std::size_t> rejected() const;
};

/// Benjamini-Hochberg step-up adjustment; output keeps the input order.
AdjustedPValues bh_adjust(std::span<const double> raw, double level = 0.05);

/// Median of n * statistic per sample size; growth under dependence,
/// stability under independence.
struct ScalingReport {
  std::vector<Index> n_grid;
  std::vector<double> median_scaled;
  bool strictly_increasing = false;  // only meaningful with >= 2 grid points
  double max_min_ratio = 1.0;
};

ScalingReport scaling_diagnostic(const ScenarioSpec& scenario, std::span<const Index> n_grid, std::size_t reps,
                                 std::uint64_t seed, unsigned threads = 1);

/// Estimator variance at n and 2n; the ratio is near 2 under root-n
/// asymptotics.
struct CltReport {
  Index n = 0;
  double mean_estimate = 0.0;
  double standard_error = 0.0;
  double variance_n = 0.0;
  double variance_2n = 0.0;
  double variance_ratio = 0.0;
  bool h0_like = false;
  std::string note;
};

CltReport clt_diagnostic(const ScenarioSpec& scenario, Index n, std::size_t reps, std::uint64_t seed,
                         unsigned threads = 1);

}  // namespace mdd
