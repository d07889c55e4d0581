#pragma once

#include <map>
#include <string>
#include <vector>

#include "memsest/countest.hpp"
#include "memsest/stats.hpp"

namespace memsest {

struct ReportFile {
  std::string name;       // relative path inside the bundle, e.g. "series/bubble.csv"
  std::string contents;
};

struct ReportInput {
  std::vector<AnalysisRow> rows;
  std::vector<AnalysisRow> compare;             // optional second set for speedup.csv
  std::map<std::string, Estimate> estimates;    // program -> static estimate
};

/// Builds the bundle: summary.txt, rows.csv, path_table.csv, correlations.csv,
/// buckets.csv, series/<program>.csv, and estimates.csv / speedup.csv when
/// their inputs are present. Byte-identical for identical input.
std::vector<ReportFile> report(const ReportInput& in);

/// Writes the bundle below `dir`, creating directories as needed.
void write_report(const std::vector<ReportFile>& files, const std::string& dir);

} // namespace memsest
