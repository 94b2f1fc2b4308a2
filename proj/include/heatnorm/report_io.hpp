#pragma once

// CSV / JSON serialization of heatnorm results and run manifests.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "heatnorm/bg_check.hpp"
#include "heatnorm/extremizer.hpp"
#include "heatnorm/grid.hpp"
#include "heatnorm/sharp_constant.hpp"

namespace heatnorm::io
{

using Json = nlohmann::ordered_json;

/// Shortest decimal string that parses back to exactly `x`.
std::string format_number(double x);

using Cell = std::variant<std::monostate, double, std::int64_t, std::string, bool>;

/// Column-ordered records that serialize to either CSV or JSON.
class Table
{
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<Cell> row);
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

  /// Header row then one line per record; absent cells are empty strings.
  void write_csv(std::ostream& os) const;
  /// Array of objects, or a single object when `single` and there is exactly one row.
  Json to_json(bool single = false) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

struct RunManifest
{
  std::string subcommand;
  Json parameters = Json::object();
  std::string version;
  double duration_seconds = 0.0;

  Json to_json() const;
  /// `# key: value` lines for CSV output.
  void write_csv_comments(std::ostream& os) const;
};

std::string tool_version();

Table sweep_table(const std::vector<BoundCurveSample<double>>& samples);

Table extremizer_table(const std::vector<ExtremizerReport<double>>& reports);
Table bg_table(const std::vector<BGReport<double>>& reports);

Json to_json(const ExtremizerReport<double>& report);
Json to_json(const BGReport<double>& report);

}  // namespace heatnorm::io
