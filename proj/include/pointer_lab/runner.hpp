// SPDX-License-Identifier: Apache-2.0
//
// Scenario execution and report files.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pointer_lab/scenario_config.hpp"

namespace pointer_lab {

inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

// One CSV file's worth of plot data.
struct CsvSeries {
  std::string stem;  // file name is <config name>.<stem>.csv
  std::string description;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct TaskResult {
  TaskKind task = TaskKind::redundancy;
  bool ok = false;
  std::string error;  // set when !ok
  double wall_clock_s = 0.0;
  json result;
};

struct RunReport {
  ScenarioConfig config;
  std::vector<TaskResult> tasks;
  std::vector<CsvSeries> series;

  bool all_ok() const;
};

// Task failures are recorded per task; the run itself does not throw for them.
RunReport run_scenario(const ScenarioConfig& config);

enum class OutputFormat { json, csv, both };

OutputFormat parse_format(const std::string& s);

// With include_plot_data the report lists the CSV files and their columns.
json report_to_json(const RunReport& report, bool include_plot_data);

// Writes <name>.report.json and, unless format is json, one CSV per series.
// Every file is written to a temporary name and renamed into place.
std::vector<std::filesystem::path> emit_report(const RunReport& report, const std::filesystem::path& dir,
                                               OutputFormat format);

void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

std::string series_to_csv(const CsvSeries& s);

}  // namespace pointer_lab
