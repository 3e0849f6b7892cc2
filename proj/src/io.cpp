#include "mdd/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace mdd {

namespace {

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char ch = line[k];
    if (quoted) {
      if (ch == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        cell += '"';
        ++k;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cell += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(trim(cell));
      cell.clear();
    } else {
      cell += ch;
    }
  }
  cells.push_back(trim(cell));
  return cells;
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

std::string cell_position(const CsvTable& t, std::size_t row, std::size_t col) {
  return "row " + std::to_string(t.line_numbers[row]) + ", column " + std::to_string(col + 1);
}

}  // namespace

bool parse_number(std::string_view text, double& out) { return parse_double(text, out); }

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::size_t CsvTable::column_index(std::string_view spec) const {
  for (std::size_t k = 0; k < header.size(); ++k)
    if (header[k] == spec) return k;
  std::size_t idx = 0;
  const auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), idx);
  if (ec != std::errc() || ptr != spec.data() + spec.size())
    throw Error(ErrorCode::ParseError, "no column named '" + std::string(spec) + "'");
  const std::size_t width = !header.empty() ? header.size() : (rows.empty() ? 0 : rows.front().size());
  if (idx >= width)
    throw Error(ErrorCode::ParseError, "column " + std::to_string(idx) + " out of range (" + std::to_string(width) +
                                           " columns)");
  return idx;
}

CsvTable parse_csv(std::string_view text, HeaderMode mode) {
  CsvTable table;
  auto& line_numbers = table.line_numbers;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const auto line = text.substr(start, end - start);
    if (!trim(line).empty()) {
      table.rows.push_back(split_line(line));
      line_numbers.push_back(line_no);
    }
    start = end + 1;
  }
  if (table.rows.empty()) throw Error(ErrorCode::ParseError, "empty CSV input");
  if (table.rows.front().size() > 0 && table.rows.front().front().starts_with("\xEF\xBB\xBF"))
    table.rows.front().front().erase(0, 3);

  bool has_header = mode == HeaderMode::Present;
  if (mode == HeaderMode::Detect) {
    double dummy;
    for (const auto& cell : table.rows.front()) has_header = has_header || !parse_double(cell, dummy);
  }
  if (has_header) {
    table.header = std::move(table.rows.front());
    table.rows.erase(table.rows.begin());
    line_numbers.erase(line_numbers.begin());
  }

  const std::size_t width = !table.header.empty() ? table.header.size() : (table.rows.empty() ? 0 : table.rows[0].size());
  for (std::size_t r = 0; r < table.rows.size(); ++r)
    if (table.rows[r].size() != width)
      throw Error(ErrorCode::ParseError, "row " + std::to_string(line_numbers[r]) + " has " +
                                             std::to_string(table.rows[r].size()) + " columns, expected " +
                                             std::to_string(width));
  return table;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CsvTable read_csv(const std::filesystem::path& path, HeaderMode mode) {
  try {
    return parse_csv(read_file(path), mode);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ParseError) throw;
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.detail());
  }
}

void write_csv(std::ostream& out, const CsvTable& table) {
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << quote_if_needed(row[k]);
    out << '\n';
  };
  if (!table.header.empty()) emit(table.header);
  for (const auto& row : table.rows) emit(row);
}

Eigen::MatrixXd numeric_matrix(const CsvTable& table) {
  if (table.rows.empty()) throw Error(ErrorCode::ParseError, "no data rows");
  const auto rows = static_cast<Index>(table.rows.size());
  const auto cols = static_cast<Index>(table.rows.front().size());
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (std::size_t c = 0; c < table.rows[r].size(); ++c) {
      double v;
      if (!parse_double(table.rows[r][c], v))
        throw Error(ErrorCode::ParseError, cell_position(table, r, c) + ": '" + table.rows[r][c] + "' is not a number");
      m(static_cast<Index>(r), static_cast<Index>(c)) = v;
    }
  }
  return m;
}

PointSet read_points(const std::filesystem::path& path, Metric metric) {
  Eigen::MatrixXd m = numeric_matrix(read_csv(path));
  const std::string what = path.filename().string();
  switch (metric) {
    case Metric::Euclidean:
      return PointSet::euclidean(std::move(m), what);
    case Metric::Geodesic:
      return PointSet::sphere(std::move(m), what);
    case Metric::Shape: {
      if (m.cols() % 2 != 0)
        throw Error(ErrorCode::ParseError, what + ": shape files need an even number of columns (x1,y1,...,xL,yL)");
      Eigen::MatrixXcd z(m.rows(), m.cols() / 2);
      for (Index i = 0; i < m.rows(); ++i)
        for (Index l = 0; l < z.cols(); ++l) z(i, l) = {m(i, 2 * l), m(i, 2 * l + 1)};
      return PointSet::shape(std::move(z), what);
    }
  }
  throw Error(ErrorCode::InvalidSpec, "unknown metric");
}

DistanceMatrix read_precomputed(const std::filesystem::path& path) {
  return DistanceMatrix::load_precomputed(numeric_matrix(read_csv(path)));
}

LabelVector read_labels(const std::filesystem::path& path, const std::string& column, HeaderMode mode) {
  const std::string text = read_file(path);
  CsvTable table = parse_csv(text, HeaderMode::Absent);
  bool by_index = !column.empty() && column.find_first_not_of("0123456789") == std::string::npos;
  if (mode == HeaderMode::Present || !by_index) {
    table = parse_csv(text, HeaderMode::Present);
  } else if (mode == HeaderMode::Detect && table.rows.size() > 1) {
    // Header when the first label is text but every later one is numeric.
    const std::size_t c = table.column_index(column);
    double v;
    bool rest_numeric = true;
    for (std::size_t r = 1; r < table.rows.size() && rest_numeric; ++r) rest_numeric = parse_double(table.rows[r][c], v);
    if (!parse_double(table.rows[0][c], v) && rest_numeric) table = parse_csv(text, HeaderMode::Present);
  }
  const std::size_t c = table.column_index(column);
  std::vector<std::string> raw;
  raw.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r][c].empty())
      throw Error(ErrorCode::ParseError, path.filename().string() + ": " + cell_position(table, r, c) + ": empty label");
    raw.push_back(table.rows[r][c]);
  }
  return LabelVector::encode(raw);
}

void write_dataset_csv(std::ostream& out, const Dataset& data, CoordinateMetric coordinate_metric) {
  const bool use_raw = data.raw && coordinate_metric == CoordinateMetric::EuclideanRaw;
  const PointSet& p = use_raw ? *data.raw : data.points;
  const auto codes = data.labels.codes();
  for (Index i = 0; i < p.size(); ++i) {
    if (p.representation() == Representation::Shape) {
      const auto& z = p.configurations();
      for (Index l = 0; l < z.cols(); ++l)
        out << format_double(z(i, l).real()) << ',' << format_double(z(i, l).imag()) << ',';
    } else {
      const auto& x = p.coordinates();
      for (Index k = 0; k < x.cols(); ++k) out << format_double(x(i, k)) << ',';
    }
    out << codes[static_cast<std::size_t>(i)] << '\n';
  }
}

nlohmann::json to_json(const TestResult& r) {
  nlohmann::json j;
  j["schema_version"] = kResultSchemaVersion;
  j["method"] = r.method;
  j["statistic"] = r.statistic;
  j["scaled"] = r.scaled;
  j["n"] = r.n;
  j["R"] = r.classes;
  j["p_value"] = r.p_value;
  j["permutations"] = r.permutations;
  j["seed"] = r.seed;
  j["per_class"] = r.per_class;
  j["warnings"] = r.warnings;
  if (!r.permutation_stats.empty()) j["permutation_stats"] = r.permutation_stats;
  return j;
}

TestResult test_result_from_json(const nlohmann::json& j) {
  TestResult r;
  try {
    r.method = j.at("method").get<std::string>();
    r.statistic = j.at("statistic").get<double>();
    r.scaled = j.value("scaled", 0.0);
    r.n = j.at("n").get<Index>();
    r.classes = j.at("R").get<int>();
    r.p_value = j.at("p_value").get<double>();
    r.permutations = j.at("permutations").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.per_class = j.value("per_class", std::vector<double>{});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed result JSON: ") + e.what());
  }
  return r;
}

}  // namespace mdd
