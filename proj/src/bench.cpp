#include <chrono>
#include <cmath>

#include "mdd/estimator.hpp"
#include "mdd/harness.hpp"
#include "mdd/random.hpp"

namespace mdd {

namespace {

template <class Fn>
double seconds_per_call(Fn&& fn, double budget = 0.05) {
  using clock = std::chrono::steady_clock;
  std::size_t calls = 0;
  const auto start = clock::now();
  double elapsed = 0.0;
  do {
    fn();
    ++calls;
    elapsed = std::chrono::duration<double>(clock::now() - start).count();
  } while (elapsed < budget);
  return elapsed / static_cast<double>(calls);
}

double loglog_slope(const std::vector<BenchRow>& rows, double BenchRow::*field) {
  if (rows.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rows) {
    const double x = std::log(static_cast<double>(r.n)), y = std::log(r.*field);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(rows.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

BenchReport bench_estimators(const std::vector<Index>& n_grid, int classes, std::uint64_t seed) {
  if (n_grid.empty()) throw Error(ErrorCode::InvalidGrid, "empty n grid");
  BenchReport report;
  report.classes = classes;
  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    const Index n = n_grid[k];
    if (n < 2 * classes)
      throw Error(ErrorCode::TooFewSamples, "n = " + std::to_string(n) + " is too small for R = " +
                                                std::to_string(classes));
    Philox eng(derive_seed(seed, k), 1);
    Eigen::MatrixXd x(n, 3);
    for (Index i = 0; i < n; ++i)
      for (Index c = 0; c < 3; ++c) x(i, c) = standard_normal(eng);
    const LabelVector y = gen_labels(classes, n, derive_seed(seed, k));
    const DistanceMatrix d = euclidean_distances(PointSet::euclidean(x));

    MddEstimate naive, fast;
    BenchRow row;
    row.n = n;
    row.naive_seconds = seconds_per_call([&] { naive = estimate_naive(d, y); });
    row.fast_seconds = seconds_per_call([&] { fast = estimate_fast(build_ranks(d), y); });
    row.max_abs_difference = std::abs(naive.value - fast.value);
    for (std::size_t r = 0; r < naive.per_class.size(); ++r)
      row.max_abs_difference = std::max(row.max_abs_difference, std::abs(naive.per_class[r] - fast.per_class[r]));
    row.agree = row.max_abs_difference <= 1e-12;
    report.rows.push_back(row);
  }
  report.naive_exponent = loglog_slope(report.rows, &BenchRow::naive_seconds);
  report.fast_exponent = loglog_slope(report.rows, &BenchRow::fast_seconds);
  return report;
}

nlohmann::json to_json(const BenchReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"n", r.n},
                    {"naive_seconds", r.naive_seconds},
                    {"fast_seconds", r.fast_seconds},
                    {"max_abs_difference", r.max_abs_difference},
                    {"agree", r.agree}});
  return {{"R", report.classes},
          {"rows", rows},
          {"naive_exponent", report.naive_exponent},
          {"fast_exponent", report.fast_exponent}};
}

}  // namespace mdd
