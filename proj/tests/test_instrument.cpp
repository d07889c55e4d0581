#include <doctest.h>

#include "memsest/error.hpp"
#include "memsest/instrument.hpp"
#include "memsest/parser.hpp"
#include "memsest/printer.hpp"
#include "test_support.hpp"

using namespace memsest;

namespace {

std::vector<InstrumentConfig> configs() {
  std::vector<InstrumentConfig> out;
  for (char marker : {'#', '@'})
    for (auto timer : {TimerMode::Monotonic, TimerMode::None})
      for (auto trace : {TraceMode::Full, TraceMode::CountsOnly}) {
        InstrumentConfig c;
        c.cond_marker = marker;
        c.timer = timer;
        c.trace = trace;
        out.push_back(c);
      }
  return out;
}

void check_strip(const Ast& ast) {
  std::string pretty = pretty_print(ast);
  for (auto cfg : configs()) {
    std::string text = instrument(ast, cfg);
    std::string back = strip(text);
    CHECK(back == pretty);
    CHECK(equal(parse(back), ast));
    if (!ast.functions.empty() && !ast.find("main")) {
      cfg.harness_entry = ast.functions[0].name;
      CHECK(strip(instrument(ast, cfg)) == pretty);
    }
  }
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

} // namespace

TEST_CASE("test.c instrumentation") {
  Ast ast = parse(testsupport::corpus("test.c"));
  std::string text = instrument(ast, {});
  CHECK(contains(text, "printf(\"#(mode > 0)\\n\");"));
  CHECK(contains(text, "printf(\"#(!(mode > 0))\\n\");"));
  CHECK(contains(text, "printf(\"#(i < n)\\n\");"));
  CHECK(contains(text, "mems = mems + 2;"));
  CHECK(contains(text, "printf(\"arr[i] = i * 2 + arr[i];\\n\");"));
  CHECK(contains(text, "Total path length: %lld"));
  CHECK(contains(text, "Total memory accesses: %lld"));
  CHECK(contains(text, "CLOCK_MONOTONIC"));

  InstrumentConfig cfg;
  cfg.cond_marker = '@';
  cfg.timer = TimerMode::None;
  text = instrument(ast, cfg);
  CHECK(contains(text, "printf(\"@(mode > 0)\\n\");"));
  CHECK(!contains(text, "CLOCK_MONOTONIC"));
  cfg.trace = TraceMode::CountsOnly;
  text = instrument(ast, cfg);
  CHECK(!contains(text, "printf(\"@(mode > 0)"));
  CHECK(!contains(text, "printf(\"arr[i]"));
  CHECK(contains(text, "mems = mems + 2;"));
}

TEST_CASE("the else side of an if without else charges nothing and logs nothing") {
  Ast ast = parse("void f(int n, int a[n]) {\n    if (a[0] > n) {\n        a[0] = 1;\n    }\n}\n");
  std::string text = instrument(ast, {});
  CHECK(contains(text, "printf(\"#(a[0] > n)\\n\");"));
  CHECK(!contains(text, "!(a[0] > n)"));
  CHECK(contains(text, "else") == false);
}

TEST_CASE("cond_trace_line") {
  ExprPtr c = parse_expression("mode > 0");
  CHECK(cond_trace_line('#', *c, true) == "#(mode > 0)");
  CHECK(cond_trace_line('#', *c, false) == "#(!(mode > 0))");
  CHECK(cond_trace_line('@', *c, true) == "@(mode > 0)");
}

TEST_CASE("target selection") {
  Ast ast = parse("int g(int x) {\n    return x;\n}\n\nint h(int x) {\n    return g(x);\n}\n\nint main() {\n    return h(1);\n}\n");
  CHECK(resolve_targets(ast, {}) == std::vector<std::string>{"g", "h"});
  InstrumentConfig cfg;
  cfg.target_functions = {"h"};
  CHECK(resolve_targets(ast, cfg) == std::vector<std::string>{"h"});
  cfg.target_functions = {"nope"};
  CHECK_THROWS_AS(resolve_targets(ast, cfg), Error);
  try {
    resolve_targets(ast, cfg);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TargetNotFound);
  }
  cfg.target_functions = {};
  check_strip(ast);
}

TEST_CASE("strip rejects text it did not produce") {
  try {
    strip(testsupport::corpus("test.c"));
    FAIL("expected NotInstrumentedByUs");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotInstrumentedByUs);
  }
}

TEST_CASE("strip inverts instrument on the corpus") {
  for (const auto& file : testsupport::corpus_files()) {
    CAPTURE(file);
    check_strip(parse(testsupport::corpus(file)));
  }
}

TEST_CASE("strip inverts instrument on random programs") {
  testsupport::Rng rng(17);
  testsupport::ProgramGen gen(rng);
  for (int i = 0; i < 150; ++i) {
    std::string src = gen.program();
    CAPTURE(src);
    check_strip(parse(src));
  }
}
