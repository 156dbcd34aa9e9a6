#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "hylent/config.hpp"

namespace hylent {

inline constexpr int kSchemaVersion = 1;

using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

/// Result of one subcommand. `ok` is false when a verification check failed.
struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  bool ok = true;
};

using Logger = std::function<void(const std::string&)>;

Table cmd_solve(const RunConfig& config, const Logger& log = {});
Table cmd_entropy(const RunConfig& config, const Logger& log = {});
Table cmd_extrapolate(const RunConfig& config, const Logger& log = {});
Table cmd_sweep(const RunConfig& config, const Logger& log = {});
Table cmd_verify(const RunConfig& config, const Logger& log = {});

/// Default sweep grid for an axis.
std::vector<double> default_grid(SweepAxis axis);

/// CSV with a schema_version column first; doubles use the shortest
/// representation that reads back to the same value.
void write_csv(std::ostream& out, const Table& table);
/// {"schema_version", "command", "columns", "rows": [{column: value}], "ok"}.
void write_json(std::ostream& out, const Table& table, const RunConfig& config);

/// Shortest round-trip text of a double.
std::string format_real(double v);

/// Reads "omega,value[,value...]" rows; a non-numeric first line is a header.
struct SeriesFile {
  std::vector<std::string> names;
  std::vector<int> omegas;
  std::vector<std::vector<double>> columns;
};
SeriesFile read_series_file(const std::string& path);

}  // namespace hylent
