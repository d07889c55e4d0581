#include "memsest/error.hpp"

namespace memsest {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnsupportedConstruct: return "UnsupportedConstruct";
    case Errc::UnresolvedName: return "UnresolvedName";
    case Errc::TargetNotFound: return "TargetNotFound";
    case Errc::NotInstrumentedByUs: return "NotInstrumentedByUs";
    case Errc::PathLimitExceeded: return "PathLimitExceeded";
    case Errc::UnrollLimitExceeded: return "UnrollLimitExceeded";
    case Errc::DataDependentBranch: return "DataDependentBranch";
    case Errc::UnboundedDomain: return "UnboundedDomain";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::CountOverflow: return "CountOverflow";
    case Errc::EmptyOrZeroWeight: return "EmptyOrZeroWeight";
    case Errc::StepLimitExceeded: return "StepLimitExceeded";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::IndexOutOfBounds: return "IndexOutOfBounds";
    case Errc::CompileFailed: return "CompileFailed";
    case Errc::OutputFormatMismatch: return "OutputFormatMismatch";
    case Errc::NonDeterministicCounts: return "NonDeterministicCounts";
    case Errc::ExternalToolFailure: return "ExternalToolFailure";
    case Errc::DegenerateInput: return "DegenerateInput";
    case Errc::NoOverlappingBuckets: return "NoOverlappingBuckets";
    case Errc::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

bool is_external(Errc code) {
  return code == Errc::CompileFailed || code == Errc::OutputFormatMismatch ||
         code == Errc::NonDeterministicCounts || code == Errc::ExternalToolFailure;
}

std::string format_diagnostic(const Diagnostic& d, std::string_view file) {
  std::string out(file);
  out += ':' + std::to_string(d.line) + ':' + std::to_string(d.column) + ": error: ";
  out += d.message;
  return out;
}

static std::string first_message(const std::vector<Diagnostic>& diags) {
  if (diags.empty())
    return "parse failed";
  const auto& d = diags.front();
  return std::to_string(d.line) + ":" + std::to_string(d.column) + ": " + d.message;
}

ParseError::ParseError(std::vector<Diagnostic> diags)
    : Error(diags.empty() ? Errc::SyntaxError : diags.front().kind, first_message(diags)),
      diags_(std::move(diags)) {}

} // namespace memsest
