#include <doctest.h>

#include <functional>

#include "memsest/memscount.hpp"
#include "memsest/parser.hpp"
#include "memsest/printer.hpp"
#include "test_support.hpp"

using namespace memsest;

namespace {

const Stmt& first_stmt(const Ast& ast) { return *ast.functions.at(0).body->body.at(0); }

MemsDelta stmt_delta(const std::string& stmt) {
  Ast ast = parse("int f(int i, int b, int n, int arr[n], int c[n]) {\n    " + stmt + "\n}\n");
  return count_stmt(first_stmt(ast));
}

// Every subscript in the text is one access; a compound update of an element
// reads it as well as writing it.
std::int64_t bracket_oracle(const Stmt& s) {
  std::string text;
  if (s.kind == Stmt::Kind::If || s.kind == Stmt::Kind::While || (s.kind == Stmt::Kind::For && s.cond))
    text = print_expr(*s.cond);
  else if (s.kind == Stmt::Kind::Return)
    text = s.value ? print_expr(*s.value) : "";
  else if (s.kind != Stmt::Kind::For && s.kind != Stmt::Kind::Block)
    text = print_simple_stmt(s);
  std::int64_t n = std::count(text.begin(), text.end(), '[');
  if (s.kind == Stmt::Kind::CompoundAssign && s.target->kind == Expr::Kind::Index)
    ++n;
  return n;
}

} // namespace

TEST_CASE("statement fixtures") {
  MemsDelta d = stmt_delta("arr[i] = i + 2;");
  CHECK(d.reads == 0);
  CHECK(d.writes == 1);
  CHECK(d.total() == 1);

  d = stmt_delta("arr[i + 1] = arr[i];");
  CHECK(d.reads == 1);
  CHECK(d.writes == 1);
  CHECK(d.total() == 2);

  d = stmt_delta("arr[i] = i * 2 + arr[i];");
  CHECK(d.reads == 1);
  CHECK(d.writes == 1);

  CHECK(stmt_delta("b = i * 3 + b;").total() == 0);
  CHECK(stmt_delta("arr[i] += 1;").total() == 2);
  CHECK(stmt_delta("arr[i]++;").total() == 2);
  CHECK(stmt_delta("b++;").total() == 0);
  CHECK(stmt_delta("arr[c[i]] = 0;").total() == 2);
  CHECK(stmt_delta("return arr[0] + c[1];").total() == 2);
  CHECK(stmt_delta("if (arr[i] > c[i] && b) { b = 1; }").total() == 2);
  CHECK(stmt_delta("while (arr[i] > 0) { i++; }").total() == 1);
  CHECK(stmt_delta("int t = arr[i];").total() == 1);
  CHECK(stmt_delta("int q[4] = {arr[0], 2, 3, 4};").total() == 1);
}

TEST_CASE("unconditional reads skip right operands of && and ||") {
  ExprPtr e = parse_expression("a[0] > 1 && b[1] || c[2]");
  CHECK(count_expr(*e).reads == 3);
  CHECK(unconditional_reads(*e) == 1);
  CHECK(unconditional_reads(*parse_expression("a[b[0]] + 1")) == 2);
}

TEST_CASE("counts agree with the subscript oracle on random programs") {
  testsupport::Rng rng(5);
  testsupport::ProgramGen gen(rng);
  for (int i = 0; i < 200; ++i) {
    Ast ast = parse(gen.program());
    std::function<void(const Stmt&)> walk = [&](const Stmt& s) {
      if (s.kind != Stmt::Kind::Block && s.kind != Stmt::Kind::Decl) {
        CAPTURE(print_stmt(s, 0));
        CHECK(count_stmt(s).total() == bracket_oracle(s));
      }
      for (const auto* c : {&s.init, &s.step, &s.then_branch, &s.else_branch})
        if (*c)
          walk(**c);
      for (const auto& c : s.body)
        walk(*c);
    };
    walk(*ast.functions[0].body);
  }
}
