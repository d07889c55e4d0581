#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace memsest {

/// One (program, input) cell of an experiment.
struct AnalysisRow {
  std::string program;
  std::string input;
  std::int64_t n = 0;   // input size
  std::int64_t path_len = 0;
  std::int64_t mems = 0;
  std::optional<double> time_ms;     // mean over repeats (native runs)
  std::optional<std::int64_t> steps; // interpreter statement count
  std::string bucket;
};

enum class CostMeasure { Steps, Time };

inline constexpr const char* kRowCsvHeader = "program,input,n,path_len,mems,time_ms,steps,bucket";

std::string rows_to_csv(const std::vector<AnalysisRow>& rows);
std::vector<AnalysisRow> rows_from_csv(const std::string& text);

/// Sample Pearson correlation. Throws DegenerateInput for mismatched or short
/// series or when either series is constant.
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

/// Magnitude buckets over [lo, hi): <1K, 1K-10K, 10K-100K, 100K-1M, 1M-10M, >10M.
const std::vector<std::string>& bucket_labels();
std::string bucket_label(std::int64_t mems);

/// Steps or time of a row; throws InvalidInput when the row lacks it.
double cost_of(const AnalysisRow& row, CostMeasure m);
/// Steps when every row has them, time otherwise.
CostMeasure default_measure(const std::vector<AnalysisRow>& rows);

double correlate_within_program(const std::vector<AnalysisRow>& rows, const std::string& program,
                                CostMeasure m = CostMeasure::Steps);
/// Pearson over all rows regardless of program.
double correlate_across(const std::vector<AnalysisRow>& rows, CostMeasure m = CostMeasure::Steps);

struct BucketStat {
  std::string bucket;
  std::size_t rows = 0;
  double mean_mems = 0;
  double mean_cost = 0;
};

/// Non-empty buckets in magnitude order.
std::vector<BucketStat> bucket_table(const std::vector<AnalysisRow>& rows, CostMeasure m);

struct SpeedupRow {
  std::string bucket;
  double mean_a = 0;
  double mean_b = 0;
  double ratio = 0;   // mean_a / mean_b
};

/// Per-bucket mean cost ratio over buckets present in both sets. Throws
/// NoOverlappingBuckets when none is.
std::vector<SpeedupRow> bucket_speedup(const std::vector<AnalysisRow>& a, const std::vector<AnalysisRow>& b,
                                       CostMeasure m = CostMeasure::Time);

} // namespace memsest
