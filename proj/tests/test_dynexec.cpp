#include <doctest.h>

#include "memsest/error.hpp"
#include "memsest/generators.hpp"
#include "memsest/instrument.hpp"
#include "memsest/interp.hpp"
#include "memsest/native.hpp"
#include "memsest/output_format.hpp"
#include "memsest/parser.hpp"
#include "test_support.hpp"

using namespace memsest;

namespace {

InterpResult run(const std::string& src, const std::string& fn, const std::vector<std::int64_t>& scalars,
                 const std::map<std::string, std::string>& arrays = {}, const InterpOptions& opts = {}) {
  Ast ast = parse(src);
  BoundInput in = bind_input(*ast.find(fn), scalars, arrays);
  return interpret(ast, fn, in.args, opts);
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::InvalidInput;
}

} // namespace

TEST_CASE("bubble sort on four reversed elements, simulated by hand") {
  // Every one of the 3 + 2 + 1 comparisons reads two cells and swaps (4 mems).
  // path_len: 3 outer + 6 inner loop entries + 6 taken ifs. Steps: 3 leading
  // statements, 4 outer condition checks and 4 + 6k per outer pass, k = 3, 2, 1.
  RunRecord r = run(testsupport::corpus("bubble.c"), "bubble", {4}, {{"a", "reversed"}}).record;
  CHECK(r.mems == 36);
  CHECK(r.path_len == 15);
  CHECK(r.steps == 55);

  r = run(testsupport::corpus("bubble.c"), "bubble", {4}, {{"a", "sorted"}}).record;
  CHECK(r.mems == 12);
  CHECK(r.path_len == 9);
  CHECK(r.steps == 37);
}

TEST_CASE("bubble sort trace on two elements") {
  InterpResult r = run(testsupport::corpus("bubble.c"), "bubble", {2}, {{"a", "list:2,1"}});
  CHECK(r.stdout_text ==
        "Path:\n"
        "#(i < n - 1)\n"
        "#(j < n - 1 - i)\n"
        "#(a[j] > a[j + 1])\n"
        "t = a[j];\n"
        "a[j] = a[j + 1];\n"
        "a[j + 1] = t;\n"
        "Total path length: 3\n"
        "Total memory accesses: 6\n");
  CHECK(r.record.trace.size() == 6);
}

TEST_CASE("test.c reports len 2n and mems 2 mode") {
  std::string src = testsupport::corpus("test.c");
  for (auto [n, mode] : std::vector<std::pair<int, int>>{{10, 0}, {10, 5}, {10, 10}, {50, 25}, {100, 100}, {7, 30}, {7, -3}}) {
    CAPTURE(n);
    CAPTURE(mode);
    RunRecord r = run(src, "test", {n, mode}).record;
    CHECK(r.path_len == 2 * n);
    CHECK(r.mems == 2 * std::clamp(mode, 0, n));
  }
}

TEST_CASE("generators") {
  CHECK(generate(parse_array_gen("sorted"), 4) == std::vector<std::int64_t>{0, 1, 2, 3});
  CHECK(generate(parse_array_gen("reversed"), 4) == std::vector<std::int64_t>{3, 2, 1, 0});
  CHECK(generate(parse_array_gen("const:7@3"), 10) == std::vector<std::int64_t>{7, 7, 7});
  CHECK(generate(parse_array_gen("list:5,-1"), std::nullopt) == std::vector<std::int64_t>{5, -1});
  CHECK(generate(parse_array_gen("list:5,-1"), 3) == std::vector<std::int64_t>{5, -1, 0});
  CHECK(generate(parse_array_gen("random:42"), 6) == std::vector<std::int64_t>{334, 26, 538, 503, 294, 156});
  CHECK(generate(parse_array_gen("random:0"), 3) == std::vector<std::int64_t>{807, 424, 937});
  CHECK(code_of([] { parse_array_gen("shuffled"); }) == Errc::InvalidInput);
  CHECK(code_of([] { generate(parse_array_gen("sorted"), std::nullopt); }) == Errc::InvalidInput);
}

TEST_CASE("input binding") {
  Ast ast = parse(testsupport::corpus("bubble.c"));
  BoundInput in = bind_input(*ast.find("bubble"), {3}, {{"a", "random:42"}});
  CHECK(in.description == "n=3;a=random:42");
  REQUIRE(in.args.size() == 2);
  CHECK(in.args[1].array == std::vector<std::int64_t>{334, 26, 538});
  CHECK(code_of([&] { bind_input(*ast.find("bubble"), {3}, {}); }) == Errc::InvalidInput);
  CHECK(code_of([&] { bind_input(*ast.find("bubble"), {3, 4}, {{"a", "sorted"}}); }) == Errc::InvalidInput);
}

TEST_CASE("runtime errors") {
  CHECK(code_of([] { run("int f(int x) {\n    return 10 / x;\n}\n", "f", {0}); }) == Errc::DivisionByZero);
  CHECK(code_of([] { run("int f(int x) {\n    return 10 % x;\n}\n", "f", {0}); }) == Errc::DivisionByZero);
  CHECK(code_of([] { run("void f(int n, int a[n]) {\n    a[n] = 1;\n}\n", "f", {3}, {{"a", "sorted"}}); }) ==
        Errc::IndexOutOfBounds);
  InterpOptions opts;
  opts.max_steps = 1000;
  try {
    run("void f(int n) {\n    while (n >= 0) {\n        n = n + 1;\n    }\n}\n", "f", {0}, {}, opts);
    FAIL("expected StepLimitExceeded");
  } catch (const InterpError& e) {
    CHECK(e.code() == Errc::StepLimitExceeded);
    CHECK(e.partial().path_len > 0);
    CHECK(e.stdout_text().rfind("Path:\n#(n >= 0)\n", 0) == 0);
  }
}

TEST_CASE("arithmetic wraps at 64 bits and divides toward zero") {
  std::string src = "int f(int x, int y) {\n    return x / y * 100 + x % y;\n}\n";
  CHECK(run(src, "f", {-7, 2}).return_value == -301);
  CHECK(run(src, "f", {7, -2}).return_value == -299);
  CHECK(run("int f(int x) {\n    return x * x;\n}\n", "f", {INT64_C(1) << 32}).return_value == 0);
}

TEST_CASE("printf and nested calls") {
  std::string src = "#include <stdio.h>\n\nint g(int a[], int i) {\n    return a[i] + 1;\n}\n\n"
                    "int f(int n, int a[n]) {\n    int s = 0;\n    for (int i = 0; i < n; i++) {\n"
                    "        s = s + g(a, i);\n    }\n    printf(\"s=%d %s\\n\", s, \"ok\");\n    return s;\n}\n";
  InterpOptions plain;
  plain.emulate_instrumentation = false;
  InterpResult r = run(src, "f", {3}, {{"a", "sorted"}}, plain);
  CHECK(r.stdout_text == "s=6 ok\n");
  CHECK(r.return_value == 6);

  InterpResult inst = run(src, "f", {3}, {{"a", "sorted"}});
  // g keeps its own counters; f's block only sees its own statements.
  CHECK(inst.record.mems == 0);
  CHECK(inst.record.path_len == 3);
  ParsedRun parsed = parse_run_output(inst.stdout_text);
  CHECK(parsed.mems == 0);
  CHECK(parsed.trace == inst.record.trace);
}

TEST_CASE("output parser") {
  ParsedRun r = parse_run_output("hello\nPath:\n#(x > 1)\nTotal path length: 1\nTotal memory accesses: 4\n"
                                 "Execution time: 0.001500 ms\n");
  CHECK(r.path_len == 1);
  CHECK(r.mems == 4);
  REQUIRE(r.time_ms);
  CHECK(*r.time_ms == doctest::Approx(0.0015));
  CHECK(r.trace == std::vector<std::string>{"#(x > 1)"});

  r = parse_run_output("Path:\n#(a)\nPath:\n#(b)\nTotal path length: 1\nTotal memory accesses: 0\n"
                       "Total path length: 2\nTotal memory accesses: 5\n");
  CHECK(r.path_len == 2);
  CHECK(r.trace == std::vector<std::string>{"#(a)"});

  CHECK(code_of([] { parse_run_output("Total path length: 1\n"); }) == Errc::OutputFormatMismatch);
  CHECK(code_of([] { parse_run_output("Path:\nTotal path length: x\n"); }) == Errc::OutputFormatMismatch);
  CHECK(code_of([] { parse_run_output("nothing\n"); }) == Errc::OutputFormatMismatch);
}

TEST_CASE("native runs agree with the interpreter") {
  auto cc = find_c_compiler();
  if (!cc) {
    MESSAGE("no C compiler on PATH; native equivalence skipped");
    return;
  }
  NativeOptions opts;
  opts.compile_cmd = *cc + " -O0 -o {bin} {src}";
  opts.repeat = 2;
  auto check = [&](const Ast& ast, const std::string& fn, const std::vector<std::int64_t>& scalars,
                   const std::map<std::string, std::string>& arrays) {
    BoundInput in = bind_input(*ast.find(fn), scalars, arrays);
    RunRecord ref = interpret(ast, fn, in.args).record;
    InstrumentConfig cfg;
    cfg.harness_entry = fn;
    auto native = run_native(instrument(ast, cfg), in.argv, opts);
    REQUIRE(native.size() == 2);
    CHECK(native[0].mems == ref.mems);
    CHECK(native[0].path_len == ref.path_len);
    CHECK(native[0].trace == ref.trace);
    CHECK(native[0].time_ms.has_value());
  };
  for (const auto& c : testsupport::benchmark_cases()) {
    CAPTURE(c.fn);
    CAPTURE(c.scalars[0]);
    check(parse(testsupport::corpus(c.file)), c.fn, c.scalars, c.arrays);
  }
  testsupport::Rng rng(41);
  testsupport::ProgramGen gen(rng);
  for (int i = 0; i < 25; ++i) {
    std::string src = gen.program();
    CAPTURE(src);
    check(parse(src), "f", {rng.in(4, 6)}, {{"a", "random:" + std::to_string(i)}});
  }
}

TEST_CASE("native failures") {
  auto cc = find_c_compiler();
  if (!cc)
    return;
  Ast ast = parse(testsupport::corpus("test.c"));
  InstrumentConfig cfg;
  cfg.harness_entry = "test";
  NativeOptions opts;
  opts.compile_cmd = "false {src} {bin}";
  CHECK(code_of([&] { run_native(instrument(ast, cfg), {"3", "1"}, opts); }) == Errc::CompileFailed);
  opts.compile_cmd = *cc + " -O0 -o {bin} {src}";
  CHECK(code_of([&] { run_native("int main(void) { return 3; }\n", {}, opts); }) == Errc::ExternalToolFailure);
  CHECK(is_external(Errc::CompileFailed));
  CHECK(!is_external(Errc::DivisionByZero));
}
