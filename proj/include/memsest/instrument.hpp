#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "memsest/ast.hpp"

namespace memsest {

enum class TimerMode { Monotonic, None };
enum class TraceMode { Full, CountsOnly };

struct InstrumentConfig {
  char cond_marker = '#';
  TimerMode timer = TimerMode::Monotonic;
  TraceMode trace = TraceMode::Full;
  std::vector<std::string> target_functions;  // empty: every user function except main
  std::optional<std::string> harness_entry;   // emit an argv-driven main() calling this function
};

/// Trailing comment on every inserted line.
inline constexpr std::string_view kInsertedTag = "/* @mems */";
/// Trailing comment on original lines rewritten in place; carries the original text.
inline constexpr std::string_view kRewrittenTagPrefix = "/* @mems-orig: ";

/// Target functions in source order after applying the config rules (main is
/// always excluded). Throws TargetNotFound for unknown names.
std::vector<std::string> resolve_targets(const Ast& ast, const InstrumentConfig& cfg);

/// Rewrites the program so each target function prints its path trace, path
/// length, mems and elapsed time.
std::string instrument(const Ast& ast, const InstrumentConfig& cfg);

/// Removes everything `instrument` inserted; the result equals pretty_print of
/// the original program. Throws NotInstrumentedByUs when no tags are present.
std::string strip(std::string_view instrumented);

/// Text of one trace line as the instrumented program prints it, without '\n'.
std::string cond_trace_line(char marker, const Expr& cond, bool taken);

} // namespace memsest
