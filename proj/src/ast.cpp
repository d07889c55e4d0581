#include "memsest/ast.hpp"

#include <algorithm>
#include <array>

namespace memsest {

const char* binop_text(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
  }
  return "?";
}

bool is_relational(BinOp op) {
  return op == BinOp::Lt || op == BinOp::Le || op == BinOp::Gt || op == BinOp::Ge ||
         op == BinOp::Eq || op == BinOp::Ne;
}

bool is_logical(BinOp op) { return op == BinOp::And || op == BinOp::Or; }

ExprPtr make_int(std::int64_t v, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::IntLit;
  e->value = v;
  e->span = s;
  return e;
}

ExprPtr make_var(std::string name, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Var;
  e->name = std::move(name);
  e->span = s;
  return e;
}

ExprPtr make_index(std::string base, ExprPtr index, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Index;
  e->name = std::move(base);
  e->args.push_back(std::move(index));
  e->span = s;
  return e;
}

ExprPtr make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Binary;
  e->bop = op;
  e->args = {std::move(lhs), std::move(rhs)};
  e->span = s;
  return e;
}

ExprPtr make_unary(UnOp op, ExprPtr operand, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Unary;
  e->uop = op;
  e->args.push_back(std::move(operand));
  e->span = s;
  return e;
}

ExprPtr make_call(std::string callee, std::vector<ExprPtr> args, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Call;
  e->name = std::move(callee);
  e->args = std::move(args);
  e->span = s;
  return e;
}

ExprPtr make_str(std::string text, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::StrLit;
  e->name = std::move(text);
  e->span = s;
  return e;
}

const FunctionDef* Ast::find(std::string_view name) const {
  for (const auto& f : functions)
    if (f.name == name)
      return &f;
  return nullptr;
}

namespace {

bool equal_ptr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b)
    return !a && !b;
  return equal(*a, *b);
}

bool equal_ptr(const StmtPtr& a, const StmtPtr& b) {
  if (!a || !b)
    return !a && !b;
  return equal(*a, *b);
}

template <typename T>
bool equal_list(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size())
    return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equal_ptr(a[i], b[i]))
      return false;
  return true;
}

bool equal_decl(const Declarator& a, const Declarator& b) {
  return a.name == b.name && a.is_array == b.is_array && equal_ptr(a.size, b.size) &&
         equal_ptr(a.init, b.init) && a.has_init_list == b.has_init_list &&
         equal_list(a.init_list, b.init_list);
}

} // namespace

bool equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind)
    return false;
  switch (a.kind) {
    case Expr::Kind::IntLit: return a.value == b.value;
    case Expr::Kind::StrLit:
    case Expr::Kind::Var: return a.name == b.name;
    case Expr::Kind::Index:
    case Expr::Kind::Call: return a.name == b.name && equal_list(a.args, b.args);
    case Expr::Kind::Binary: return a.bop == b.bop && equal_list(a.args, b.args);
    case Expr::Kind::Unary: return a.uop == b.uop && equal_list(a.args, b.args);
  }
  return false;
}

bool equal(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind)
    return false;
  if (a.decls.size() != b.decls.size())
    return false;
  for (std::size_t i = 0; i < a.decls.size(); ++i)
    if (!equal_decl(a.decls[i], b.decls[i]))
      return false;
  if (a.kind == Stmt::Kind::CompoundAssign && a.aop != b.aop)
    return false;
  return equal_ptr(a.target, b.target) && equal_ptr(a.value, b.value) &&
         equal_ptr(a.cond, b.cond) && equal_ptr(a.init, b.init) && equal_ptr(a.step, b.step) &&
         equal_ptr(a.then_branch, b.then_branch) && equal_ptr(a.else_branch, b.else_branch) &&
         equal_list(a.body, b.body);
}

bool equal(const FunctionDef& a, const FunctionDef& b) {
  if (a.ret != b.ret || a.name != b.name || a.params.size() != b.params.size())
    return false;
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    const auto& p = a.params[i];
    const auto& q = b.params[i];
    if (p.name != q.name || p.is_array != q.is_array || !equal_ptr(p.size, q.size))
      return false;
  }
  return equal_ptr(a.body, b.body);
}

bool equal(const Ast& a, const Ast& b) {
  if (a.includes != b.includes || a.functions.size() != b.functions.size())
    return false;
  for (std::size_t i = 0; i < a.functions.size(); ++i)
    if (!equal(a.functions[i], b.functions[i]))
      return false;
  return true;
}

bool is_extern_function(std::string_view name) {
  static constexpr std::array<std::string_view, 3> externs = {"printf", "puts", "putchar"};
  return std::find(externs.begin(), externs.end(), name) != externs.end();
}

bool is_allowed_header(std::string_view header) {
  static constexpr std::array<std::string_view, 4> headers = {"stdio.h", "stdlib.h", "string.h",
                                                              "time.h"};
  return std::find(headers.begin(), headers.end(), header) != headers.end();
}

} // namespace memsest
