#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "memsest/run_record.hpp"
#include "memsest/stats.hpp"

namespace memsest {

enum class Executor { Interpreter, Native };

struct ProgramSpec {
  std::string name;
  std::string file;
  std::string fn;          // defaults to the section name
  std::string size_param;  // defaults to the first scalar parameter
  /// Grid per parameter: integer expressions for scalars (they may use earlier
  /// parameters, e.g. "n/2"; division floors), generator specs for arrays.
  std::vector<std::pair<std::string, std::vector<std::string>>> grid;
};

struct SweepSpec {
  std::vector<ProgramSpec> programs;
  int repeat = 5;
  Executor executor = Executor::Interpreter;
  std::string cc = "cc -O0 -o {bin} {src}";
  std::string output;        // rows CSV, relative to the config file
  std::string runs_output;   // optional run-record CSV
  std::int64_t max_steps = 100'000'000;
  bool parallel_native = false;   // native timing runs are serialized unless set
};

/// Reads the sweep config:
///
///   repeat = 5
///   executor = "interpreter"
///   [program.test]
///   file = "corpus/test.c"
///   n = [10, 50]
///   mode = ["0", "n/2", "n"]
///
/// Relative paths are resolved against `base_dir`.
SweepSpec parse_sweep_spec(const std::string& text, const std::string& base_dir = ".");

/// Runs every grid cell; interpreter cells run in parallel. Errors name the cell.
std::vector<AnalysisRow> sweep(const SweepSpec& spec, std::vector<RunRecord>* runs = nullptr);

/// One cell at a time; the reference the parallel sweep is tested against.
std::vector<AnalysisRow> sweep_serial(const SweepSpec& spec, std::vector<RunRecord>* runs = nullptr);

} // namespace memsest
