#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdd/simgen.hpp"

namespace mdd {

enum class TestKind { Mdd, Dcov, Hhg };

std::string to_string(TestKind t);
TestKind parse_test_kind(const std::string& name);

struct GridCell {
  ScenarioSpec spec;
  std::size_t reps = 200;
};

/// A Monte Carlo study: every cell is simulated `reps` times and each
/// requested test is run with `permutations` label permutations at level
/// `alpha`. Replicate seeds derive from the master seed and the
/// (cell, replicate) index only.
struct ExperimentGrid {
  std::string name = "grid";
  std::vector<GridCell> cells;
  std::size_t permutations = 199;
  double alpha = 0.05;
  std::vector<TestKind> tests{TestKind::Mdd, TestKind::Dcov, TestKind::Hhg};
  std::uint64_t master_seed = 0;
  bool seed_from_entropy = false;
  CoordinateMetric coordinate_metric = kDefaultCoordinateMetric;

  void validate() const;
};

/// Parses a grid config. Cell fields may be arrays, which expand to their
/// cross product. Errors are InvalidGrid with a JSON-pointer path.
/// `seed_override` replaces the config's master seed; with neither, a seed
/// is drawn from system entropy and recorded.
ExperimentGrid parse_grid(const nlohmann::json& config, std::optional<std::uint64_t> seed_override = std::nullopt);
ExperimentGrid load_grid(const std::filesystem::path& path,
                         std::optional<std::uint64_t> seed_override = std::nullopt);

struct CellResult {
  GridCell cell;
  std::string metric;
  std::vector<std::size_t> rejections;  // parallel to ExperimentGrid::tests
  double seconds = 0.0;

  double frequency(std::size_t test) const {
    return static_cast<double>(rejections[test]) / static_cast<double>(cell.reps);
  }
};

struct TableReport {
  ExperimentGrid grid;
  std::vector<CellResult> cells;
  double seconds = 0.0;
};

/// Called after each finished cell with (cells done, cells total).
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

TableReport run_grid(const ExperimentGrid& grid, unsigned threads = 1, const ProgressFn& progress = {});

/// Outcome of one replicate: p-value per requested test.
std::vector<double> run_replicate(const ExperimentGrid& grid, std::size_t cell_index, std::size_t replicate,
                                  unsigned permutation_threads = 1);

/// Wall-clock figures appear only with include_timing.
nlohmann::json to_json(const TableReport& report, bool include_timing = false);
std::string to_text(const TableReport& report);
std::string to_csv(const TableReport& report);

/// Notes that accompany every report about choices the comparison depends on.
nlohmann::json report_conventions(const ExperimentGrid& grid);

struct BenchRow {
  Index n = 0;
  double naive_seconds = 0.0;
  double fast_seconds = 0.0;
  double max_abs_difference = 0.0;
  bool agree = false;
};

struct BenchReport {
  int classes = 0;
  std::vector<BenchRow> rows;
  double naive_exponent = 0.0;  // least-squares slope of log time vs log n
  double fast_exponent = 0.0;
};

/// Times estimate_naive against build_ranks + estimate_fast on Gaussian
/// data and checks they agree within 1e-12.
BenchReport bench_estimators(const std::vector<Index>& n_grid, int classes, std::uint64_t seed);
nlohmann::json to_json(const BenchReport& report);

}  // namespace mdd
