#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace cavmag {

using Cell = std::variant<double, bool, std::string>;

/// Column-labelled rows, written as CSV with a JSON mirror.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double v);

std::string to_csv(const Table& t);
/// Array of row objects. Non-finite numbers become null.
nlohmann::json to_json(const Table& t);

/// Writes `<stem>.csv` and `<stem>.json` into dir (created if missing) and returns both paths.
std::vector<std::filesystem::path> write_table(const Table& t, const std::filesystem::path& dir,
                                               const std::string& stem);

void write_text(const std::filesystem::path& path, const std::string& content);

struct RunManifest {
  std::string command;
  std::string config_source;
  std::string config_snapshot;
  std::vector<std::filesystem::path> outputs;
  std::size_t nan_count = 0;
  std::size_t points = 0;
  std::size_t threads = 1;
  std::vector<std::string> warnings;
};

std::string software_version();

/// Writes manifest.json (with an ISO-8601 UTC timestamp) and returns its path.
std::filesystem::path write_manifest(const RunManifest& m, const std::filesystem::path& dir);

} // namespace cavmag
