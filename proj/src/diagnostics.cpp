#include <algorithm>
#include <cmath>
#include <numeric>

#include "mdd/inference.hpp"

namespace mdd {

namespace {

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

// MDD estimates over `reps` independent draws of the scenario at size n.
std::vector<double> replicate_estimates(ScenarioSpec spec, Index n, std::size_t reps, std::uint64_t seed,
                                        unsigned threads) {
  spec.n = n;
  spec.validate();
  std::vector<double> out(reps);
  parallel_for(reps, threads, [&](std::size_t r) {
    ScenarioSpec local = spec;
    local.seed = derive_seed(seed, static_cast<std::uint64_t>(n), r);
    const Dataset data = generate(local);
    const RankStructure ranks = build_ranks(dataset_distances(data, kDefaultCoordinateMetric));
    out[r] = estimate_fast(ranks, data.labels).value;
  });
  return out;
}

void mean_and_variance(const std::vector<double>& v, double& mean, double& variance) {
  mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  variance = ss / static_cast<double>(v.size() - 1);
}

}  // namespace

ScalingReport scaling_diagnostic(const ScenarioSpec& scenario, std::span<const Index> n_grid, std::size_t reps,
                                 std::uint64_t seed, unsigned threads) {
  if (reps < 20) throw Error(ErrorCode::InvalidReps, "scaling diagnostic needs at least 20 replicates");
  if (n_grid.empty()) throw Error(ErrorCode::InvalidSpec, "empty sample-size grid");
  if (!std::is_sorted(n_grid.begin(), n_grid.end()) ||
      std::adjacent_find(n_grid.begin(), n_grid.end()) != n_grid.end())
    throw Error(ErrorCode::InvalidSpec, "sample-size grid must be strictly ascending");

  ScalingReport report;
  report.n_grid.assign(n_grid.begin(), n_grid.end());
  for (const Index n : n_grid) {
    auto estimates = replicate_estimates(scenario, n, reps, seed, threads);
    for (auto& e : estimates) e *= static_cast<double>(n);
    report.median_scaled.push_back(median(std::move(estimates)));
  }
  const auto& m = report.median_scaled;
  report.strictly_increasing = m.size() >= 2 && std::adjacent_find(m.begin(), m.end(), std::greater_equal<>()) == m.end();
  const auto [lo, hi] = std::minmax_element(m.begin(), m.end());
  report.max_min_ratio = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
  return report;
}

CltReport clt_diagnostic(const ScenarioSpec& scenario, Index n, std::size_t reps, std::uint64_t seed,
                         unsigned threads) {
  if (reps < 100) throw Error(ErrorCode::InvalidReps, "CLT diagnostic needs at least 100 replicates");
  CltReport report;
  report.n = n;
  double mean_2n = 0.0;
  mean_and_variance(replicate_estimates(scenario, n, reps, seed, threads), report.mean_estimate, report.variance_n);
  mean_and_variance(replicate_estimates(scenario, 2 * n, reps, seed, threads), mean_2n, report.variance_2n);
  report.standard_error = std::sqrt(report.variance_n);
  report.variance_ratio = report.variance_n / report.variance_2n;
  report.h0_like = report.mean_estimate < 3.0 * report.standard_error;
  report.note = report.h0_like ? "H0-like, CLT ratio not applicable" : "H1 regime, expected ratio near 2";
  return report;
}

}  // namespace mdd
