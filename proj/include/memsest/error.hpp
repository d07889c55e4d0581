#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace memsest {

enum class Errc {
  // cfront
  SyntaxError,
  UnsupportedConstruct,
  UnresolvedName,
  // instrument
  TargetNotFound,
  NotInstrumentedByUs,
  // pathex / countest
  PathLimitExceeded,
  UnrollLimitExceeded,
  DataDependentBranch,
  UnboundedDomain,
  BudgetExceeded,
  CountOverflow,
  EmptyOrZeroWeight,
  // dynexec
  StepLimitExceeded,
  DivisionByZero,
  IndexOutOfBounds,
  CompileFailed,
  OutputFormatMismatch,
  NonDeterministicCounts,
  ExternalToolFailure,
  // lab
  DegenerateInput,
  NoOverlappingBuckets,
  // generic bad input (malformed files, bad argument lists)
  InvalidInput,
};

std::string_view errc_name(Errc code);

/// True for errors caused by a failing external program (compiler, binary).
bool is_external(Errc code);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

struct Diagnostic {
  Errc kind = Errc::SyntaxError;
  std::uint32_t line = 0;
  std::uint32_t column = 0;
  std::string message;
};

/// `file:line:col: error: message`
std::string format_diagnostic(const Diagnostic& d, std::string_view file);

class ParseError : public Error {
public:
  explicit ParseError(std::vector<Diagnostic> diags);

  const std::vector<Diagnostic>& diagnostics() const noexcept { return diags_; }

private:
  std::vector<Diagnostic> diags_;
};

} // namespace memsest
