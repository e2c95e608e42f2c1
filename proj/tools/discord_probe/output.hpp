#pragma once

// Result records and their on-disk form. Files are written to a temporary
// name and renamed into place.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"

namespace probe {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kSummarySchema = "discord-probe/summary/1";

/// One time series: columns are a subset of time, d_t, d_min_t, bound.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct RunResult {
  std::vector<std::pair<std::string, double>> scalars;
  ordered_json details = ordered_json::object();
  std::vector<Table> tables;
  std::string verdict;
  std::vector<std::string> violations;  // soundness failures

  void add(std::string name, double value) { scalars.emplace_back(std::move(name), value); }
  [[nodiscard]] bool sound() const { return violations.empty(); }
};

/// Table from a witness series with a constant bound column.
inline Table series_table(std::string name, const discord::WitnessSeries& s, const char* value_column) {
  Table t{std::move(name), {"time", value_column, "bound"}, {}};
  const double bound = s.bound_ref.value_or(0.0);
  for (std::size_t i = 0; i < s.times.size(); ++i) t.rows.push_back({s.times[i], s.d_t[i], bound});
  return t;
}

inline void check_sound(RunResult& r, const discord::WitnessSeries& s, const std::string& what) {
  if (!s.sound()) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: d_max = %.17g exceeds bound %.17g", what.c_str(), s.d_max,
                  s.bound_ref.value_or(0.0));
    r.violations.emplace_back(buf);
  }
}

inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_short(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline std::string csv_text(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) out += (c ? "," : "") + t.columns[c];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_number(row[c]);
    }
    out += '\n';
  }
  return out;
}

/// Thrown when an output file cannot be written.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw OutputError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) throw OutputError("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw OutputError("cannot rename " + tmp.string() + ": " + ec.message());
}

/// Config as recorded and hashed: sorted keys, seed filled in, output
/// location dropped so that the record does not depend on where it is written.
inline json canonical_config(json doc, std::uint64_t seed) {
  doc.erase("output");
  doc["seed"] = seed;
  return doc;
}

inline std::string config_hash(const json& canonical) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical.dump())));
  return buf;
}

inline ordered_json summary_json(const json& canonical, const std::string& model, const RunResult& r) {
  ordered_json s;
  s["schema"] = kSummarySchema;
  s["version"] = kVersion;
  s["model"] = model;
  s["seed"] = canonical.at("seed");
  s["config_hash"] = config_hash(canonical);
  s["config"] = ordered_json::parse(canonical.dump());
  s["sound"] = r.sound();
  s["violations"] = r.violations;
  s["verdict"] = r.verdict;
  ordered_json scalars = ordered_json::object();
  for (const auto& [k, v] : r.scalars) scalars[k] = v;
  s["scalars"] = scalars;
  s["details"] = r.details;
  ordered_json series = ordered_json::array();
  for (const auto& t : r.tables) {
    series.push_back({{"name", t.name}, {"file", t.name + ".csv"}, {"columns", t.columns},
                      {"rows", t.rows.size()}});
  }
  s["series"] = series;
  return s;
}

/// summary.json plus one CSV per table under `dir`.
inline void write_record(const std::filesystem::path& dir, const json& canonical, const std::string& model,
                         const RunResult& r) {
  for (const auto& t : r.tables) write_atomic(dir / (t.name + ".csv"), csv_text(t));
  write_atomic(dir / "summary.json", summary_json(canonical, model, r).dump(2) + "\n");
}

}  // namespace probe
