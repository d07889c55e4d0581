#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "memsest/run_record.hpp"

namespace memsest {

struct NativeOptions {
  /// Shell command with `{src}` and `{bin}` placeholders.
  std::string compile_cmd = "cc -O0 -o {bin} {src}";
  int repeat = 5;
  std::string program;   // copied into the records
  std::string input;     // copied into the records
};

/// Compiles an instrumented program (which must carry a harness main) once in
/// a private temporary directory and runs it `repeat` times with `argv`.
/// Counts and traces must agree across runs; times may differ.
std::vector<RunRecord> run_native(std::string_view instrumented_source, const std::vector<std::string>& argv,
                                  const NativeOptions& opts);

/// First of cc, gcc, clang found on PATH, if any.
std::optional<std::string> find_c_compiler();

} // namespace memsest
