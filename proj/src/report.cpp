// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <fstream>
#include <system_error>

#include "pointer_lab/runner.hpp"

namespace pointer_lab {

namespace fs = std::filesystem;

bool RunReport::all_ok() const {
  for (const TaskResult& t : tasks)
    if (!t.ok) return false;
  return true;
}

OutputFormat parse_format(const std::string& s) {
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  if (s == "both") return OutputFormat::both;
  throw Error("unknown format \"" + s + "\" (expected json, csv or both)");
}

json report_to_json(const RunReport& report, bool include_plot_data) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["artifact_version"] = kArtifactVersion;
  j["config"] = config_to_json(report.config);
  json tasks = json::array();
  for (const TaskResult& t : report.tasks) {
    json tj = {{"task", to_string(t.task)}, {"status", t.ok ? "ok" : "failed"}, {"wall_clock_s", t.wall_clock_s}};
    if (!t.ok) tj["error"] = t.error;
    if (!t.result.is_null()) tj["result"] = t.result;
    tasks.push_back(std::move(tj));
  }
  j["tasks"] = std::move(tasks);
  if (include_plot_data) {
    json plots = json::array();
    for (const CsvSeries& s : report.series) {
      plots.push_back({{"file", report.config.name + "." + s.stem + ".csv"},
                       {"columns", s.columns},
                       {"description", s.description},
                       {"rows", s.rows.size()}});
    }
    j["plot_data"] = std::move(plots);
  }
  return j;
}

std::string series_to_csv(const CsvSeries& s) {
  std::string out;
  for (std::size_t c = 0; c < s.columns.size(); ++c) {
    if (c) out += ',';
    out += s.columns[c];
  }
  out += '\n';
  char buf[32];
  for (const auto& row : s.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", row[c]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot rename into " + path.string());
  }
}

std::vector<fs::path> emit_report(const RunReport& report, const fs::path& dir, OutputFormat format) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error("cannot create output directory " + dir.string());

  const bool csv = format != OutputFormat::json;
  std::vector<fs::path> written;
  const fs::path json_path = dir / (report.config.name + ".report.json");
  write_file_atomic(json_path, report_to_json(report, csv).dump(2) + "\n");
  written.push_back(json_path);
  if (csv) {
    for (const CsvSeries& s : report.series) {
      const fs::path p = dir / (report.config.name + "." + s.stem + ".csv");
      write_file_atomic(p, series_to_csv(s));
      written.push_back(p);
    }
  }
  return written;
}

}  // namespace pointer_lab
