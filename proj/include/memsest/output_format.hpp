#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace memsest {

struct ParsedRun {
  std::int64_t path_len = 0;
  std::int64_t mems = 0;
  std::optional<double> time_ms;
  std::vector<std::string> trace;
};

/// Parses the stdout of an instrumented program. Blocks nest when instrumented
/// functions call each other; the first outermost block is returned and lines
/// of nested blocks are skipped. Throws OutputFormatMismatch.
ParsedRun parse_run_output(std::string_view text);

} // namespace memsest
