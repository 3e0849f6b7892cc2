#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "mdd/harness.hpp"
#include "mdd/inference.hpp"
#include "mdd/io.hpp"
#include "mdd/random.hpp"

namespace mdd::cli {

namespace fs = std::filesystem;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned threads = 0;
  std::string output;
  std::string format;
};

struct TestArgs {
  std::string points;
  std::string metric = "euclidean";
  std::string matrix;
  std::string labels;
  std::string label_column = "0";
  std::string labels_header = "detect";
  std::size_t permutations = 499;
  double alpha = 0.05;
  bool exclude_diagonal = false;
  bool keep_statistics = false;
};

struct SimulateArgs {
  std::string config;
  std::optional<std::size_t> reps;
  std::optional<std::size_t> permutations;
  std::string sphere_metric;
  bool timing = false;
  bool quiet = false;
};

struct BenchArgs {
  std::vector<Index> n{50, 100, 200, 400};
  int classes = 5;
};

struct AdjustArgs {
  std::string input;
  std::string column;
  double level = 0.05;
};

std::uint64_t resolve_seed(const Globals& g, std::ostream& err) {
  if (g.seed_given) return g.seed;
  const std::uint64_t seed = entropy_seed();
  err << "seed " << seed << " drawn from system entropy\n";
  return seed;
}

void write_text_file(const std::string& path, const std::string& content) {
  if (path == "-") return;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path);
  f << content;
  if (!f) throw Error(ErrorCode::IoError, "write failed for " + path);
}

// Without --output the human-readable form goes to stdout unless --format
// asks for something else; with --output the requested form (json when
// unspecified) goes to the file and the human form still goes to stdout.
void emit(const Globals& g, const std::string& human, const std::string& default_format,
          const std::function<std::string(const std::string&)>& render, std::ostream& out) {
  if (g.output.empty() || g.output == "-") {
    const std::string fmt = g.format.empty() ? default_format : g.format;
    out << (fmt == "text" ? human : render(fmt));
    return;
  }
  out << human;
  write_text_file(g.output, render(g.format.empty() ? "json" : g.format));
}

HeaderMode header_mode(const std::string& s) {
  if (s == "yes") return HeaderMode::Present;
  if (s == "no") return HeaderMode::Absent;
  return HeaderMode::Detect;
}

int cmd_test(const Globals& g, const TestArgs& a, std::ostream& out, std::ostream& err) {
  if (a.points.empty() == a.matrix.empty())
    throw Error(ErrorCode::InvalidSpec, "give exactly one of --points or --matrix");
  const unsigned threads = resolve_threads(g.threads);
  const DistanceMatrix d = a.matrix.empty() ? [&] {
    const Metric metric = parse_metric(a.metric);
    return distances(read_points(a.points, metric), metric, threads);
  }()
                                            : read_precomputed(a.matrix);
  const LabelVector y = read_labels(a.labels, a.label_column, header_mode(a.labels_header));
  if (y.size() != d.size())
    throw Error(ErrorCode::SizeMismatch, "label count " + std::to_string(y.size()) + " does not match " +
                                             (a.matrix.empty() ? "point" : "matrix") + " count " +
                                             std::to_string(d.size()));

  PermutationOptions opts;
  opts.permutations = a.permutations;
  opts.seed = resolve_seed(g, err);
  opts.keep_statistics = a.keep_statistics;
  opts.threads = threads;
  opts.estimator.exclude_diagonal = a.exclude_diagonal;
  const TestResult r = permutation_test(build_ranks(d, threads), y, opts);
  for (const auto& w : r.warnings) err << "warning: " << w << "\n";

  std::ostringstream human;
  human << "MDD=" << format_double(r.statistic) << ", p=" << format_double(r.p_value) << ", n=" << r.n
        << ", R=" << r.classes << "\n";
  emit(g, human.str(), "text",
       [&](const std::string& fmt) {
         if (fmt == "json") return to_json(r).dump(2) + "\n";
         CsvTable t;
         t.header = {"statistic", "scaled", "p_value", "n", "R", "permutations", "seed", "reject"};
         t.rows.push_back({format_double(r.statistic), format_double(r.scaled), format_double(r.p_value),
                           std::to_string(r.n), std::to_string(r.classes), std::to_string(r.permutations),
                           std::to_string(r.seed), r.p_value <= a.alpha ? "true" : "false"});
         std::ostringstream os;
         write_csv(os, t);
         return os.str();
       },
       out);
  return kOk;
}

fs::path find_config(const std::string& name) {
  fs::path p(name);
  if (fs::exists(p)) return p;
#ifdef MDD_PRESET_DIR
  for (const fs::path& candidate : {fs::path(MDD_PRESET_DIR) / name, fs::path(MDD_PRESET_DIR) / (name + ".json")})
    if (fs::exists(candidate)) return candidate;
#endif
  throw Error(ErrorCode::IoError, "cannot open " + name);
}

int cmd_simulate(const Globals& g, const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  std::optional<std::uint64_t> seed;
  if (g.seed_given) seed = g.seed;
  ExperimentGrid grid = load_grid(find_config(a.config), seed);
  if (grid.seed_from_entropy) err << "seed " << grid.master_seed << " drawn from system entropy\n";
  if (a.reps)
    for (auto& c : grid.cells) c.reps = *a.reps;
  if (a.permutations) grid.permutations = *a.permutations;
  if (!a.sphere_metric.empty()) grid.coordinate_metric = parse_coordinate_metric(a.sphere_metric);
  grid.validate();

  ProgressFn progress;
  if (!a.quiet)
    progress = [&err](std::size_t done, std::size_t total) { err << "cell " << done << "/" << total << " done\n"; };
  const TableReport report = run_grid(grid, g.threads, progress);
  emit(g, to_text(report), "text",
       [&](const std::string& fmt) { return fmt == "json" ? to_json(report, a.timing).dump(2) + "\n" : to_csv(report); },
       out);
  return kOk;
}

int cmd_bench(const Globals& g, const BenchArgs& a, std::ostream& out, std::ostream& err) {
  if (!std::is_sorted(a.n.begin(), a.n.end()) || std::adjacent_find(a.n.begin(), a.n.end()) != a.n.end())
    throw Error(ErrorCode::InvalidGrid, "--n values must be strictly ascending");
  const std::uint64_t seed = resolve_seed(g, err);
  const BenchReport report = bench_estimators(a.n, a.classes, seed);
  std::ostringstream human;
  human << std::setw(8) << "n" << std::setw(14) << "naive [s]" << std::setw(14) << "fast [s]" << std::setw(14)
        << "max |diff|" << std::setw(7) << "agree" << "\n";
  for (const auto& r : report.rows)
    human << std::setw(8) << r.n << std::setw(14) << std::setprecision(4) << r.naive_seconds << std::setw(14)
          << r.fast_seconds << std::setw(14) << r.max_abs_difference << std::setw(7) << (r.agree ? "yes" : "NO")
          << "\n";
  human << "scaling exponent: naive " << std::setprecision(3) << report.naive_exponent << ", fast "
        << report.fast_exponent << " (R = " << report.classes << ", seed " << seed << ")\n";
  emit(g, human.str(), "text",
       [&](const std::string& fmt) {
         if (fmt == "json") {
           auto j = to_json(report);
           j["seed"] = seed;
           return j.dump(2) + "\n";
         }
         CsvTable t;
         t.header = {"n", "naive_seconds", "fast_seconds", "max_abs_difference", "agree"};
         for (const auto& r : report.rows)
           t.rows.push_back({std::to_string(r.n), format_double(r.naive_seconds), format_double(r.fast_seconds),
                             format_double(r.max_abs_difference), r.agree ? "true" : "false"});
         std::ostringstream os;
         write_csv(os, t);
         return os.str();
       },
       out);
  return std::all_of(report.rows.begin(), report.rows.end(), [](const BenchRow& r) { return r.agree; })
             ? kOk
             : kInternalError;
}

int cmd_adjust(const Globals& g, const AdjustArgs& a, std::ostream& out, std::ostream&) {
  CsvTable table;
  std::size_t col = 0;
  const fs::path input(a.input);
  if (fs::is_directory(input)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(input))
      if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error(ErrorCode::IoError, "no .json result files in " + a.input);
    table.header = {"file", "p_value"};
    for (std::size_t k = 0; k < files.size(); ++k) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(read_file(files[k]));
      } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::ParseError, files[k].string() + ": " + e.what());
      }
      const TestResult r = test_result_from_json(j);
      table.rows.push_back({files[k].filename().string(), format_double(r.p_value)});
      table.line_numbers.push_back(k + 1);
    }
    col = 1;
  } else {
    table = read_csv(input);
    if (!a.column.empty()) {
      col = table.column_index(a.column);
    } else if (!table.header.empty() &&
               std::find(table.header.begin(), table.header.end(), "p_value") != table.header.end()) {
      col = table.column_index("p_value");
    } else if (table.rows.front().size() != 1) {
      throw Error(ErrorCode::ParseError, a.input + " has several columns; choose one with --column");
    }
  }

  std::vector<double> raw;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    double v;
    const std::string where = a.input + ": row " + std::to_string(table.line_numbers[r]) + ", column " +
                              std::to_string(col + 1);
    if (!parse_number(table.rows[r][col], v))
      throw Error(ErrorCode::ParseError, where + ": '" + table.rows[r][col] + "' is not a number");
    if (!(v >= 0.0 && v <= 1.0))
      throw Error(ErrorCode::OutOfRangePValue, where + ": p-value " + table.rows[r][col] + " outside [0, 1]");
    raw.push_back(v);
  }
  const AdjustedPValues adj = bh_adjust(raw, a.level);

  if (!table.header.empty()) table.header.push_back("p_adjusted");
  for (std::size_t r = 0; r < table.rows.size(); ++r) table.rows[r].push_back(format_double(adj.adjusted[r]));
  std::ostringstream csv;
  write_csv(csv, table);

  std::ostringstream human;
  human << "BH adjustment of " << raw.size() << " p-values at level " << format_double(a.level) << ": "
        << adj.rejected().size() << " rejected\n";
  const std::string fmt = g.format.empty() ? "csv" : g.format;
  auto render = [&](const std::string& f) -> std::string {
    if (f == "csv") return csv.str();
    nlohmann::json j{{"method", adj.method}, {"level", adj.level}, {"raw", adj.raw}, {"adjusted", adj.adjusted}};
    return j.dump(2) + "\n";
  };
  if (g.output.empty() || g.output == "-") {
    out << (fmt == "text" ? human.str() + csv.str() : render(fmt));
  } else {
    out << human.str();
    write_text_file(g.output, render(fmt == "text" ? "csv" : fmt));
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Metric distributional discrepancy tests of independence between a metric-space X and a "
               "categorical Y",
               "mdd"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Master RNG seed (default: drawn from system entropy and reported)");
  app.add_option("--threads", g.threads, "Worker threads, 0 = all hardware threads")->capture_default_str();
  app.add_option("--output", g.output, "Write the machine-readable result to this path");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));

  TestArgs ta;
  auto* test = app.add_subcommand("test", "Permutation test of independence on user data");
  auto* points = test->add_option("--points", ta.points, "CSV of points, one row per observation");
  test->add_option("--metric", ta.metric, "Metric for --points")
      ->check(CLI::IsMember({"euclidean", "geodesic", "sphere", "shape"}))
      ->capture_default_str();
  auto* matrix = test->add_option("--matrix", ta.matrix, "CSV of a precomputed n x n distance matrix");
  points->excludes(matrix);
  test->add_option("--labels", ta.labels, "CSV holding the class labels")->required();
  test->add_option("--label-column", ta.label_column, "Label column, by header name or 0-based index")
      ->capture_default_str();
  test->add_option("--labels-header", ta.labels_header, "Whether the label file has a header row")
      ->check(CLI::IsMember({"detect", "yes", "no"}))
      ->capture_default_str();
  test->add_option("--permutations,-B", ta.permutations, "Number of label permutations")->capture_default_str();
  test->add_option("--alpha", ta.alpha, "Level used for the reject column of CSV output")->capture_default_str();
  test->add_flag("--exclude-diagonal", ta.exclude_diagonal, "Drop i = j pairs from the estimator");
  test->add_flag("--keep-statistics", ta.keep_statistics, "Store the permuted statistics in the JSON result");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo grid of simulated scenarios");
  simulate->add_option("config", sa.config, "Grid config JSON, or a bundled preset name such as table1")
      ->required();
  simulate->add_option("--reps", sa.reps, "Override the replicate count of every cell");
  simulate->add_option("--permutations,-B", sa.permutations, "Override the permutation count");
  simulate->add_option("--sphere-metric", sa.sphere_metric, "Metric for (1, theta, phi...) coordinate tuples")
      ->check(CLI::IsMember({"euclidean_raw", "geodesic"}));
  simulate->add_flag("--timing", sa.timing, "Include wall-clock seconds in the JSON report");
  simulate->add_flag("--quiet", sa.quiet, "No progress messages");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Time the naive and rank-based estimators");
  bench->add_option("--n", ba.n, "Sample sizes, ascending")->delimiter(',')->capture_default_str();
  bench->add_option("--classes,-R", ba.classes, "Number of classes")->capture_default_str();

  AdjustArgs aa;
  auto* adjust = app.add_subcommand("adjust", "Benjamini-Hochberg adjustment of p-values");
  adjust->add_option("input", aa.input, "CSV of p-values, or a directory of JSON test results")->required();
  adjust->add_option("--column", aa.column, "p-value column by header name or 0-based index");
  adjust->add_option("--level", aa.level, "Target false discovery rate")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    g.seed_given = app.count("--seed") > 0;
    if (*test) return cmd_test(g, ta, out, err);
    if (*simulate) return cmd_simulate(g, sa, out, err);
    if (*bench) return cmd_bench(g, ba, out, err);
    if (*adjust) return cmd_adjust(g, aa, out, err);
    return kInternalError;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_domain_error(e.code()) ? kDomainError : kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace mdd::cli
