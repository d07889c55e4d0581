#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "memsest/ast.hpp"
#include "memsest/error.hpp"
#include "memsest/instrument.hpp"
#include "memsest/run_record.hpp"

namespace memsest {

struct ArgValue {
  bool is_array = false;
  std::int64_t scalar = 0;
  std::vector<std::int64_t> array;
};

/// Arguments for one call of an entry function, in every form the runners need.
struct BoundInput {
  std::vector<ArgValue> args;
  std::vector<std::string> argv;   // command line for the native harness
  std::string description;         // "n=10;mode=5;a=random:42"
};

/// Binds scalar values (in scalar-parameter order) and array generator specs
/// (by parameter name) to `f`'s parameters. Declared array sizes such as
/// `int a[n]` are evaluated from the scalar arguments.
BoundInput bind_input(const FunctionDef& f, const std::vector<std::int64_t>& scalars,
                      const std::map<std::string, std::string>& arrays);

struct InterpOptions {
  std::int64_t max_steps = 100'000'000;
  char cond_marker = '#';
  TraceMode trace = TraceMode::Full;
  std::vector<std::string> target_functions;   // same selection rule as the instrumenter
  bool emulate_instrumentation = true;          // false: stdout holds only the program's own output
};

struct InterpResult {
  RunRecord record;
  std::string stdout_text;
  std::int64_t return_value = 0;
};

/// Raised for runtime failures; carries what was observed up to the failure.
class InterpError : public Error {
public:
  InterpError(Errc code, const std::string& message, RunRecord partial, std::string stdout_text)
      : Error(code, message), partial_(std::move(partial)), stdout_(std::move(stdout_text)) {}

  const RunRecord& partial() const noexcept { return partial_; }
  const std::string& stdout_text() const noexcept { return stdout_; }

private:
  RunRecord partial_;
  std::string stdout_;
};

/// Runs `fn` on `args`. Values are 64-bit two's complement with truncating
/// division. Counters follow exactly what the instrumented program reports:
/// mems per memscount rules at each evaluated access, path_len where the
/// instrumenter increments it, and the printed trace of the entry function.
/// `steps` counts executed statements plus loop condition evaluations.
InterpResult interpret(const Ast& ast, std::string_view fn, const std::vector<ArgValue>& args,
                       const InterpOptions& opts = {});

} // namespace memsest
