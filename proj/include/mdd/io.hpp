#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mdd/inference.hpp"
#include "mdd/labels.hpp"
#include "mdd/metric.hpp"
#include "mdd/simgen.hpp"

namespace mdd {

inline constexpr int kResultSchemaVersion = 1;

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// Strict decimal parse of a whole cell; a leading '+' is accepted.
bool parse_number(std::string_view text, double& out);

enum class HeaderMode { Detect, Present, Absent };

/// Comma-separated table. `line_numbers[r]` is the 1-based file line of
/// rows[r], used in diagnostics.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;

  /// Column index from a name (header) or a 0-based integer string.
  std::size_t column_index(std::string_view spec) const;
};

/// With HeaderMode::Detect the first row is a header when any of its cells
/// is non-numeric.
CsvTable parse_csv(std::string_view text, HeaderMode mode = HeaderMode::Detect);
CsvTable read_csv(const std::filesystem::path& path, HeaderMode mode = HeaderMode::Detect);
void write_csv(std::ostream& out, const CsvTable& table);

/// All cells as numbers; ParseError names the offending row and column.
Eigen::MatrixXd numeric_matrix(const CsvTable& table);

/// Points for the requested metric. Shape files carry 2L columns
/// x1,y1,...,xL,yL per configuration.
PointSet read_points(const std::filesystem::path& path, Metric metric);
DistanceMatrix read_precomputed(const std::filesystem::path& path);

/// One label per row taken from `column` (name or 0-based index).
LabelVector read_labels(const std::filesystem::path& path, const std::string& column = "0",
                        HeaderMode mode = HeaderMode::Detect);

/// Dumps a generated dataset (points or raw tuples, then the label) at
/// full precision.
void write_dataset_csv(std::ostream& out, const Dataset& data, CoordinateMetric coordinate_metric);

nlohmann::json to_json(const TestResult& result);
TestResult test_result_from_json(const nlohmann::json& j);

std::string read_file(const std::filesystem::path& path);

}  // namespace mdd
