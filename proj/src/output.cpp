#include "cavmag/output.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <stdexcept>

#ifndef CAVMAG_VERSION
#define CAVMAG_VERSION "0.0.0"
#endif

namespace cavmag {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

nlohmann::json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return nullptr;
    return *d;
  }
  if (const auto* b = std::get_if<bool>(&c)) return *b;
  return std::get<std::string>(c);
}

} // namespace

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += t.columns[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_text(row[i]);
    }
    out += '\n';
  }
  return out;
}

nlohmann::json to_json(const Table& t) {
  auto arr = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i)
      obj[t.columns[i]] = cell_json(row[i]);
    arr.push_back(std::move(obj));
  }
  return arr;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << content;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

std::vector<std::filesystem::path> write_table(const Table& t, const std::filesystem::path& dir,
                                               const std::string& stem) {
  const auto csv = dir / (stem + ".csv");
  const auto json = dir / (stem + ".json");
  write_text(csv, to_csv(t));
  write_text(json, to_json(t).dump(2) + "\n");
  return {csv, json};
}

std::string software_version() { return CAVMAG_VERSION; }

std::filesystem::path write_manifest(const RunManifest& m, const std::filesystem::path& dir) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);

  nlohmann::json j;
  j["software"] = "cavmag";
  j["version"] = software_version();
  j["timestamp"] = stamp;
  j["command"] = m.command;
  j["config_source"] = m.config_source;
  j["config_snapshot"] = m.config_snapshot;
  auto outs = nlohmann::json::array();
  for (const auto& p : m.outputs) outs.push_back(p.filename().string());
  j["outputs"] = outs;
  j["points"] = m.points;
  j["nan_count"] = m.nan_count;
  j["threads"] = m.threads;
  j["warnings"] = m.warnings;
  const auto path = dir / "manifest.json";
  write_text(path, j.dump(2) + "\n");
  return path;
}

} // namespace cavmag
