#include "mdd/harness.hpp"

#include <chrono>
#include <iomanip>
#include <set>
#include <sstream>

#include "mdd/baselines.hpp"
#include "mdd/inference.hpp"
#include "mdd/io.hpp"

namespace mdd {

namespace {

using nlohmann::json;

constexpr std::uint64_t kPermutationTag = 0x7065726d;  // "perm"

[[noreturn]] void grid_error(const std::string& pointer, const std::string& what) {
  throw Error(ErrorCode::InvalidGrid, (pointer.empty() ? std::string("/") : pointer) + ": " + what);
}

// Cell fields in expansion order (outermost first).
const std::vector<std::string> kCellFields{"classes", "n",     "dim",   "landmarks", "corr", "dependent",
                                           "kappa",   "mean_gap", "noise", "reps",      "column"};

std::int64_t get_int(const json& v, const std::string& ptr, std::int64_t min) {
  if (!v.is_number_integer()) grid_error(ptr, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < min) grid_error(ptr, "must be at least " + std::to_string(min));
  return x;
}

double get_number(const json& v, const std::string& ptr) {
  if (!v.is_number()) grid_error(ptr, "expected a number");
  return v.get<double>();
}

std::size_t get_reps(const json& v, const std::string& ptr) {
  if (v.is_number_integer() && v.get<std::int64_t>() < 1)
    throw Error(ErrorCode::InvalidReps, ptr + ": reps must be at least 1");
  return static_cast<std::size_t>(get_int(v, ptr, 1));
}

bool get_bool(const json& v, const std::string& ptr) {
  if (!v.is_boolean()) grid_error(ptr, "expected true or false");
  return v.get<bool>();
}

void apply_field(GridCell& cell, const std::string& field, const json& v, const std::string& ptr) {
  ScenarioSpec& s = cell.spec;
  if (field == "classes") s.classes = static_cast<int>(get_int(v, ptr, 1));
  else if (field == "n") s.n = get_int(v, ptr, 2);
  else if (field == "dim") s.dim = static_cast<int>(get_int(v, ptr, 1));
  else if (field == "landmarks") s.landmarks = static_cast<int>(get_int(v, ptr, 3));
  else if (field == "corr") s.corr = get_number(v, ptr);
  else if (field == "dependent") s.dependent = get_bool(v, ptr);
  else if (field == "kappa") s.kappa = get_number(v, ptr);
  else if (field == "mean_gap") s.mean_gap = get_number(v, ptr);
  else if (field == "noise") s.noise = get_bool(v, ptr);
  else if (field == "reps") cell.reps = get_reps(v, ptr);
  else if (field == "column") s.column = static_cast<int>(get_int(v, ptr, 1));
}

void expand_cell(const json& obj, const std::string& ptr, std::size_t field_index, GridCell current,
                 std::vector<GridCell>& out) {
  if (field_index == kCellFields.size()) {
    try {
      current.spec.validate();
    } catch (const Error& e) {
      grid_error(ptr, e.detail());
    }
    out.push_back(current);
    return;
  }
  const std::string& field = kCellFields[field_index];
  if (!obj.contains(field)) {
    expand_cell(obj, ptr, field_index + 1, current, out);
    return;
  }
  const json& v = obj.at(field);
  const std::string fptr = ptr + "/" + field;
  if (v.is_array()) {
    if (v.empty()) grid_error(fptr, "empty list");
    for (std::size_t k = 0; k < v.size(); ++k) {
      GridCell next = current;
      apply_field(next, field, v[k], fptr + "/" + std::to_string(k));
      expand_cell(obj, ptr, field_index + 1, next, out);
    }
  } else {
    apply_field(current, field, v, fptr);
    expand_cell(obj, ptr, field_index + 1, current, out);
  }
}

std::string describe(const ScenarioSpec& s) {
  std::ostringstream os;
  os << to_string(s.scenario);
  if (s.scenario == Scenario::Sim4) {
    os << " L=" << s.landmarks << " corr=" << format_double(s.corr);
  } else {
    os << " col" << s.column;
    if (s.scenario == Scenario::Sim3) os << (s.dependent ? " II" : " I");
    os << " dim=" << s.dim;
  }
  os << " R=" << s.classes << " n=" << s.n;
  return os.str();
}

std::string cell_metric(const ScenarioSpec& s, CoordinateMetric coordinate_metric) {
  if (s.scenario == Scenario::Sim4) return std::string(to_string(Metric::Shape));
  if (s.column == 1) return to_string(coordinate_metric);
  return std::string(to_string(s.column == 2 ? Metric::Geodesic : Metric::Euclidean));
}

}  // namespace

std::string to_string(TestKind t) {
  switch (t) {
    case TestKind::Mdd: return "mdd";
    case TestKind::Dcov: return "dcov";
    case TestKind::Hhg: return "hhg";
  }
  return "unknown";
}

TestKind parse_test_kind(const std::string& name) {
  if (name == "mdd") return TestKind::Mdd;
  if (name == "dcov") return TestKind::Dcov;
  if (name == "hhg") return TestKind::Hhg;
  throw Error(ErrorCode::InvalidGrid, "unknown test '" + name + "'");
}

void ExperimentGrid::validate() const {
  if (cells.empty()) throw Error(ErrorCode::InvalidGrid, "grid has no cells");
  if (permutations == 0) throw Error(ErrorCode::InvalidB, "number of permutations must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidGrid, "alpha must lie in (0, 1)");
  if (tests.empty()) throw Error(ErrorCode::InvalidGrid, "no tests requested");
  for (const auto& c : cells) {
    if (c.reps == 0) throw Error(ErrorCode::InvalidReps, "reps must be at least 1");
    c.spec.validate();
  }
}

ExperimentGrid parse_grid(const json& config, std::optional<std::uint64_t> seed_override) {
  if (!config.is_object()) grid_error("", "grid config must be a JSON object");
  static const std::set<std::string> known{"name",  "master_seed", "reps",          "permutations",
                                           "alpha", "tests",       "sphere_metric", "cells"};
  for (const auto& [key, _] : config.items())
    if (!known.count(key)) grid_error("/" + key, "unknown field");

  ExperimentGrid grid;
  if (config.contains("name")) {
    if (!config["name"].is_string()) grid_error("/name", "expected a string");
    grid.name = config["name"].get<std::string>();
  }
  std::size_t default_reps = 200;
  if (config.contains("reps")) default_reps = get_reps(config["reps"], "/reps");
  if (config.contains("permutations"))
    grid.permutations = static_cast<std::size_t>(get_int(config["permutations"], "/permutations", 1));
  if (config.contains("alpha")) {
    grid.alpha = get_number(config["alpha"], "/alpha");
    if (!(grid.alpha > 0.0 && grid.alpha < 1.0)) grid_error("/alpha", "must lie in (0, 1)");
  }
  if (config.contains("tests")) {
    const json& t = config["tests"];
    if (!t.is_array() || t.empty()) grid_error("/tests", "expected a non-empty list");
    grid.tests.clear();
    for (std::size_t k = 0; k < t.size(); ++k) {
      const std::string ptr = "/tests/" + std::to_string(k);
      if (!t[k].is_string()) grid_error(ptr, "expected a string");
      try {
        grid.tests.push_back(parse_test_kind(t[k].get<std::string>()));
      } catch (const Error&) {
        grid_error(ptr, "unknown test '" + t[k].get<std::string>() + "' (expected mdd, dcov or hhg)");
      }
    }
  }
  if (config.contains("sphere_metric")) {
    if (!config["sphere_metric"].is_string()) grid_error("/sphere_metric", "expected a string");
    try {
      grid.coordinate_metric = parse_coordinate_metric(config["sphere_metric"].get<std::string>());
    } catch (const Error&) {
      grid_error("/sphere_metric", "expected euclidean_raw or geodesic");
    }
  }
  if (seed_override) {
    grid.master_seed = *seed_override;
  } else if (config.contains("master_seed")) {
    const json& s = config["master_seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
      grid_error("/master_seed", "expected a nonnegative integer");
    grid.master_seed = s.get<std::uint64_t>();
  } else {
    grid.master_seed = entropy_seed();
    grid.seed_from_entropy = true;
  }

  if (!config.contains("cells")) grid_error("/cells", "missing");
  const json& cells = config["cells"];
  if (!cells.is_array() || cells.empty()) grid_error("/cells", "expected a non-empty list");
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const std::string ptr = "/cells/" + std::to_string(k);
    const json& obj = cells[k];
    if (!obj.is_object()) grid_error(ptr, "expected an object");
    for (const auto& [key, _] : obj.items())
      if (key != "scenario" && std::find(kCellFields.begin(), kCellFields.end(), key) == kCellFields.end())
        grid_error(ptr + "/" + key, "unknown field");
    if (!obj.contains("scenario") || !obj["scenario"].is_string()) grid_error(ptr + "/scenario", "expected a string");
    GridCell base;
    base.reps = default_reps;
    try {
      base.spec.scenario = parse_scenario(obj["scenario"].get<std::string>());
    } catch (const Error&) {
      grid_error(ptr + "/scenario", "expected sim1, sim2, sim3 or sim4");
    }
    expand_cell(obj, ptr, 0, base, grid.cells);
  }
  grid.validate();
  return grid;
}

ExperimentGrid load_grid(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
  json config;
  try {
    config = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidGrid, path.string() + ": " + e.what());
  }
  return parse_grid(config, seed_override);
}

std::vector<double> run_replicate(const ExperimentGrid& grid, std::size_t cell_index, std::size_t replicate,
                                  unsigned permutation_threads) {
  ScenarioSpec spec = grid.cells.at(cell_index).spec;
  spec.seed = derive_seed(grid.master_seed, cell_index, replicate);
  const Dataset data = generate(spec);
  const DistanceMatrix d = dataset_distances(data, grid.coordinate_metric);
  const RankStructure ranks = build_ranks(d);
  const auto codes = data.labels.codes();
  const auto counts = data.labels.counts();
  const std::uint64_t perm_seed = derive_seed(spec.seed, kPermutationTag);

  auto p_value_of = [&](auto&& statistic) {
    const double observed = statistic(codes);
    const auto stats = permutation_statistics(codes, grid.permutations, perm_seed, permutation_threads, statistic);
    return permutation_p_value(observed, stats);
  };

  std::vector<double> p_values;
  for (const TestKind test : grid.tests) {
    switch (test) {
      case TestKind::Mdd:
        p_values.push_back(p_value_of([&](std::span<const int> c) {
          std::vector<Index> scratch(counts.size());
          return mdd_value(ranks, c, counts, {}, scratch);
        }));
        break;
      case TestKind::Dcov: {
        const DcovPlan plan(d);
        p_values.push_back(p_value_of([&](std::span<const int> c) { return plan.value(c); }));
        break;
      }
      case TestKind::Hhg:
        p_values.push_back(p_value_of([&](std::span<const int> c) { return hhg_categorical(ranks, c, counts); }));
        break;
    }
  }
  return p_values;
}

TableReport run_grid(const ExperimentGrid& grid, unsigned threads, const ProgressFn& progress) {
  grid.validate();
  const unsigned workers = resolve_threads(threads);
  TableReport report;
  report.grid = grid;
  const auto start = std::chrono::steady_clock::now();

  for (std::size_t c = 0; c < grid.cells.size(); ++c) {
    const GridCell& cell = grid.cells[c];
    const auto cell_start = std::chrono::steady_clock::now();
    // Parallelise over replicates when there are enough of them, otherwise
    // over permutations inside each replicate.
    const bool by_replicate = cell.reps >= workers;
    std::vector<std::vector<double>> p_values(cell.reps);
    auto one = [&](std::size_t r) {
      try {
        p_values[r] = run_replicate(grid, c, r, by_replicate ? 1u : workers);
      } catch (const Error& e) {
        throw Error(e.code(), "cell " + std::to_string(c) + " (" + describe(cell.spec) + "), replicate " +
                                  std::to_string(r) + ": " + e.detail());
      }
    };
    if (by_replicate) {
      parallel_for(cell.reps, workers, one);
    } else {
      for (std::size_t r = 0; r < cell.reps; ++r) one(r);
    }

    CellResult result;
    result.cell = cell;
    result.metric = cell_metric(cell.spec, grid.coordinate_metric);
    result.rejections.assign(grid.tests.size(), 0);
    for (const auto& pv : p_values)
      for (std::size_t t = 0; t < pv.size(); ++t)
        if (pv[t] <= grid.alpha) ++result.rejections[t];
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - cell_start).count();
    report.cells.push_back(std::move(result));
    if (progress) progress(c + 1, grid.cells.size());
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

json report_conventions(const ExperimentGrid& grid) {
  return {
      {"coordinate_metric", to_string(grid.coordinate_metric) == "geodesic"
                                ? "geodesic distance between embedded unit vectors"
                                : "euclidean distance between raw (1, theta, phi...) tuples"},
      {"sphere_embedding", "phi_1..phi_m polar angles, theta final azimuth"},
      {"y_encoding", "discrete metric d(y, y') = I(y != y')"},
      {"baselines", "re-implementation, encoding: discrete metric"},
      {"vmf_mean_direction", "normalize(cos mu_r, sin mu_r, 0, ..., 0)"},
      {"labels", "iid unbalanced proportions, redrawn until every class occurs"},
      {"p_value", "add-one permutation (1 + #{T_b >= T}) / (B + 1)"},
  };
}

json to_json(const TableReport& report, bool include_timing) {
  const ExperimentGrid& g = report.grid;
  json j;
  j["schema_version"] = kResultSchemaVersion;
  j["name"] = g.name;
  j["master_seed"] = g.master_seed;
  j["permutations"] = g.permutations;
  j["alpha"] = g.alpha;
  json tests = json::array();
  for (auto t : g.tests) tests.push_back(to_string(t));
  j["tests"] = tests;
  j["conventions"] = report_conventions(g);
  json cells = json::array();
  for (const auto& c : report.cells) {
    const ScenarioSpec& s = c.cell.spec;
    json cell{{"scenario", to_string(s.scenario)},
              {"classes", s.classes},
              {"n", s.n},
              {"metric", c.metric},
              {"reps", c.cell.reps}};
    if (s.scenario == Scenario::Sim4) {
      cell["landmarks"] = s.landmarks;
      cell["corr"] = s.corr;
    } else {
      cell["column"] = s.column;
      cell["dim"] = s.dim;
      if (s.scenario == Scenario::Sim3) cell["dependent"] = s.dependent;
      if (s.column == 2) cell["kappa"] = s.kappa;
      if (s.mean_gap) cell["mean_gap"] = *s.mean_gap;
    }
    if (!s.noise) cell["noise"] = false;
    json results;
    for (std::size_t t = 0; t < g.tests.size(); ++t)
      results[to_string(g.tests[t])] = {{"rejections", c.rejections[t]}, {"frequency", c.frequency(t)}};
    cell["results"] = results;
    if (include_timing) cell["seconds"] = c.seconds;
    cells.push_back(cell);
  }
  j["cells"] = cells;
  if (include_timing) j["seconds"] = report.seconds;
  return j;
}

std::string to_text(const TableReport& report) {
  const ExperimentGrid& g = report.grid;
  std::ostringstream os;
  os << "study " << g.name << ": master seed " << g.master_seed << ", B = " << g.permutations
     << ", alpha = " << format_double(g.alpha) << "\n";
  os << std::left << std::setw(40) << "cell" << std::setw(15) << "metric" << std::right << std::setw(6) << "reps";
  for (auto t : g.tests) {
    std::string name = to_string(t);
    for (auto& ch : name) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    os << std::setw(8) << name;
  }
  os << std::setw(10) << "seconds" << "\n";
  for (const auto& c : report.cells) {
    os << std::left << std::setw(40) << describe(c.cell.spec) << std::setw(15) << c.metric << std::right
       << std::setw(6) << c.cell.reps;
    for (std::size_t t = 0; t < g.tests.size(); ++t)
      os << std::setw(8) << std::fixed << std::setprecision(3) << c.frequency(t);
    os << std::setw(10) << std::setprecision(1) << c.seconds << "\n";
  }
  os << "total " << std::setprecision(1) << report.seconds << " s\n";
  const json conventions = report_conventions(g);
  for (const auto& [key, value] : conventions.items())
    os << "  " << key << ": " << value.get<std::string>() << "\n";
  return os.str();
}

std::string to_csv(const TableReport& report) {
  CsvTable t;
  t.header = {"scenario", "column", "classes", "n", "dim", "landmarks", "corr", "dependent", "metric",
              "reps",     "test",   "rejections", "frequency"};
  for (const auto& c : report.cells) {
    const ScenarioSpec& s = c.cell.spec;
    for (std::size_t k = 0; k < report.grid.tests.size(); ++k) {
      t.rows.push_back({to_string(s.scenario), std::to_string(s.column), std::to_string(s.classes),
                        std::to_string(s.n), std::to_string(s.dim), std::to_string(s.landmarks),
                        format_double(s.corr), s.dependent ? "true" : "false", c.metric,
                        std::to_string(c.cell.reps), to_string(report.grid.tests[k]),
                        std::to_string(c.rejections[k]), format_double(c.frequency(k))});
    }
  }
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

}  // namespace mdd
