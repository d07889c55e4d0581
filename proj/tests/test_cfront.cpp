#include <doctest.h>

#include "memsest/lexer.hpp"
#include "memsest/parser.hpp"
#include "memsest/printer.hpp"
#include "test_support.hpp"

using namespace memsest;
using testsupport::Rng;

namespace {

Errc parse_error_kind(const std::string& src, std::uint32_t* line = nullptr) {
  try {
    parse(src);
  } catch (const ParseError& e) {
    REQUIRE(!e.diagnostics().empty());
    if (line)
      *line = e.diagnostics()[0].line;
    return e.diagnostics()[0].kind;
  }
  FAIL("expected a parse error for: " << src);
  return Errc::InvalidInput;
}

ExprPtr random_expr(Rng& rng, int depth) {
  static const std::vector<BinOp> ops = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Mod,
                                         BinOp::Lt,  BinOp::Le,  BinOp::Gt,  BinOp::Ge,  BinOp::Eq,
                                         BinOp::Ne,  BinOp::And, BinOp::Or};
  if (depth == 0 || rng.chance(25)) {
    switch (rng.in(0, 3)) {
      case 0: return make_int(rng.in(0, 50));
      case 1: return make_var(rng.pick(std::vector<std::string>{"x", "y", "n"}));
      case 2: return make_index("a", random_expr(rng, depth > 0 ? depth - 1 : 0));
      default: return make_call("g", {make_var("x"), make_int(rng.in(0, 3))});
    }
  }
  if (rng.chance(20))
    return make_unary(rng.chance(50) ? UnOp::Neg : UnOp::Not, random_expr(rng, depth - 1));
  return make_binary(rng.pick(ops), random_expr(rng, depth - 1), random_expr(rng, depth - 1));
}

} // namespace

TEST_CASE("test.c parses to one function with a for containing an if/else") {
  Ast ast = parse(testsupport::corpus("test.c"));
  REQUIRE(ast.functions.size() == 1);
  const FunctionDef& f = ast.functions[0];
  CHECK(f.name == "test");
  CHECK(f.ret == ReturnType::Void);
  REQUIRE(f.params.size() == 2);
  const auto& body = f.body->body;
  REQUIRE(body.size() == 2);
  CHECK(body[0]->kind == Stmt::Kind::Decl);
  CHECK(body[0]->decls.size() == 3);
  CHECK(body[0]->decls[0].is_array);
  REQUIRE(body[1]->kind == Stmt::Kind::For);
  const auto& loop_body = body[1]->then_branch->body;
  REQUIRE(loop_body.size() == 1);
  CHECK(loop_body[0]->kind == Stmt::Kind::If);
  CHECK(loop_body[0]->else_branch != nullptr);
}

TEST_CASE("lexer keeps offsets through comments and records includes") {
  LexResult r = lex("#include <stdio.h>\n/* a\n b */ int x; // tail\n");
  REQUIRE(r.includes.size() == 1);
  CHECK(r.includes[0] == "stdio.h");
  REQUIRE(r.tokens.size() == 4);
  CHECK(r.tokens[0].text == "int");
  CHECK(r.tokens[0].line == 3);
  CHECK(r.tokens[0].column == 7);
  CHECK(r.tokens[1].kind == Tok::Ident);
  CHECK(r.tokens[3].kind == Tok::End);
}

TEST_CASE("literals") {
  LexResult r = lex("0x1F 017 'a' '\\n' 42");
  CHECK(r.tokens[0].value == 31);
  CHECK(r.tokens[1].value == 15);
  CHECK(r.tokens[2].value == 97);
  CHECK(r.tokens[3].value == 10);
  CHECK(r.tokens[4].value == 42);
}

TEST_CASE("diagnostics") {
  std::uint32_t line = 0;
  CHECK(parse_error_kind("void f() {\n  int x = 1\n  x = 2;\n}\n", &line) == Errc::SyntaxError);
  CHECK(line == 3);
  CHECK(parse_error_kind("void f() {\n  float x;\n}\n", &line) == Errc::UnsupportedConstruct);
  CHECK(line == 2);
  CHECK(parse_error_kind("void f() {\n  x = 1;\n}\n") == Errc::UnresolvedName);
  CHECK(parse_error_kind("#include <pthread.h>\nvoid f() {}\n") == Errc::UnsupportedConstruct);
  CHECK(parse_error_kind("void f() { int x; x = 1.5; }") == Errc::UnsupportedConstruct);
  CHECK(parse_error_kind("void f() { /* open") == Errc::SyntaxError);
  CHECK(parse_error_kind("void f() { int *p; }") != Errc::InvalidInput);
  CHECK(parse_error_kind("void f() { g(); }") == Errc::UnresolvedName);
}

TEST_CASE("printer parenthesizes only where needed") {
  CHECK(print_expr(*parse_expression("a - (b - c)")) == "a - (b - c)");
  CHECK(print_expr(*parse_expression("(a - b) - c")) == "a - b - c");
  CHECK(print_expr(*parse_expression("(a + b) * c")) == "(a + b) * c");
  CHECK(print_expr(*parse_expression("a || b && c")) == "a || b && c");
  CHECK(print_expr(*parse_expression("(a || b) && c")) == "(a || b) && c");
  CHECK(print_expr(*parse_expression("-(-x)")) == "-(-x)");
  CHECK(print_expr(*parse_expression("!(a < b)")) == "!(a < b)");
  CHECK(print_expr(*make_unary(UnOp::Neg, make_int(-1))) == "-(-1)");
}

TEST_CASE("pretty_print is a fixpoint on the corpus") {
  for (const auto& file : testsupport::corpus_files()) {
    CAPTURE(file);
    Ast original = parse(testsupport::corpus(file));
    std::string once = pretty_print(original);
    Ast reparsed = parse(once);
    CHECK(equal(original, reparsed));
    CHECK(pretty_print(reparsed) == once);
  }
}

TEST_CASE("pretty_print round-trips random programs") {
  Rng rng(7);
  testsupport::ProgramGen gen(rng);
  for (int i = 0; i < 300; ++i) {
    std::string src = gen.program();
    CAPTURE(src);
    Ast a = parse(src);
    std::string once = pretty_print(a);
    Ast b = parse(once);
    REQUIRE(equal(a, b));
    CHECK(pretty_print(b) == once);
  }
}

TEST_CASE("expressions print and re-parse to the same tree") {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    ExprPtr e = random_expr(rng, 4);
    std::string text = print_expr(*e);
    CAPTURE(text);
    ExprPtr back = parse_expression(text);
    CHECK(equal(*e, *back));
  }
}

TEST_CASE("mutated sources either parse or fail with diagnostics") {
  Rng rng(3);
  std::vector<std::string> sources;
  for (const auto& f : testsupport::corpus_files())
    sources.push_back(testsupport::corpus(f));
  const std::string alphabet = "(){}[];,=+-*/%<>!&|#\"'0123456789 \nabcxyz_";
  int failures = 0;
  for (int i = 0; i < 3000; ++i) {
    std::string s = rng.pick(sources);
    for (auto k = rng.in(1, 4); k > 0; --k) {
      auto pos = static_cast<std::size_t>(rng.in(0, static_cast<std::int64_t>(s.size()) - 1));
      switch (rng.in(0, 2)) {
        case 0: s.erase(pos, 1); break;
        case 1: s.insert(pos, 1, alphabet[static_cast<std::size_t>(rng.in(0, static_cast<std::int64_t>(alphabet.size()) - 1))]); break;
        default: s[pos] = alphabet[static_cast<std::size_t>(rng.in(0, static_cast<std::int64_t>(alphabet.size()) - 1))];
      }
    }
    try {
      Ast a = parse(s);
      CHECK(equal(a, parse(pretty_print(a))));
    } catch (const ParseError& e) {
      ++failures;
      CHECK(!e.diagnostics().empty());
    }
  }
  CHECK(failures > 0);
}
