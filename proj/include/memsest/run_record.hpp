#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace memsest {

enum class RunSource { Interpreter, Native };

const char* run_source_name(RunSource s);

struct RunRecord {
  std::string program;
  std::string input;                 // e.g. "n=10;mode=5;a=random:42"
  RunSource source = RunSource::Interpreter;
  std::int64_t path_len = 0;
  std::int64_t mems = 0;
  std::optional<double> time_ms;
  std::optional<std::int64_t> steps;
  std::vector<std::string> trace;    // lines printed inside the entry function's block
};

/// Fixed CSV header for persisted run records.
inline constexpr const char* kRunCsvHeader = "program,input,source,path_len,mems,time_ms,steps";

std::string run_records_to_csv(const std::vector<RunRecord>& records);
std::vector<RunRecord> run_records_from_csv(const std::string& text);

} // namespace memsest
