#pragma once

// Syntax tree for MiniC: int scalars, one-dimensional int arrays, structured
// control flow and calls. Nodes are immutable once built and shared by
// pointer, so copying an Ast is cheap.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace memsest {

struct Span {
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
};

enum class BinOp { Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne, And, Or };
enum class UnOp { Neg, Not };

const char* binop_text(BinOp op);
bool is_relational(BinOp op);
bool is_logical(BinOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { IntLit, StrLit, Var, Index, Binary, Unary, Call };

  Kind kind = Kind::IntLit;
  Span span;
  std::int64_t value = 0;      // IntLit
  std::string name;            // Var, Index base, Call callee, StrLit contents (unescaped)
  BinOp bop = BinOp::Add;      // Binary
  UnOp uop = UnOp::Neg;        // Unary
  std::vector<ExprPtr> args;   // Index: {index}; Binary: {lhs, rhs}; Unary: {operand}; Call: arguments

  const Expr& lhs() const { return *args[0]; }
  const Expr& rhs() const { return *args[1]; }
  const Expr& operand() const { return *args[0]; }
  const Expr& index() const { return *args[0]; }
};

ExprPtr make_int(std::int64_t v, Span s = {});
ExprPtr make_var(std::string name, Span s = {});
ExprPtr make_index(std::string base, ExprPtr index, Span s = {});
ExprPtr make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs, Span s = {});
ExprPtr make_unary(UnOp op, ExprPtr operand, Span s = {});
ExprPtr make_call(std::string callee, std::vector<ExprPtr> args, Span s = {});
ExprPtr make_str(std::string text, Span s = {});

struct Declarator {
  std::string name;
  bool is_array = false;
  ExprPtr size;                     // array length expression, may be null for `int a[] = {...}`
  ExprPtr init;                     // scalar initializer
  bool has_init_list = false;
  std::vector<ExprPtr> init_list;   // `= {1, 2, 3}`
};

enum class AssignOp { Add, Sub, Mul, Div, Mod, Inc, Dec };

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct Stmt {
  enum class Kind { Decl, Assign, CompoundAssign, ExprStmt, If, For, While, Return, Block };

  Kind kind = Kind::Block;
  Span span;
  std::vector<Declarator> decls;   // Decl
  ExprPtr target;                  // Assign/CompoundAssign: Var or Index
  AssignOp aop = AssignOp::Add;    // CompoundAssign
  ExprPtr value;                   // Assign/CompoundAssign rhs (null for ++/--), ExprStmt, Return (nullable)
  ExprPtr cond;                    // If/While/For (For cond nullable)
  StmtPtr init;                    // For (nullable): Decl, Assign or CompoundAssign
  StmtPtr step;                    // For (nullable): Assign or CompoundAssign
  StmtPtr then_branch;             // If then-block, loop body
  StmtPtr else_branch;             // If else-block (nullable)
  std::vector<StmtPtr> body;       // Block
};

struct Param {
  std::string name;
  bool is_array = false;
  ExprPtr size;   // null for `int a[]`
};

enum class ReturnType { Int, Void };

struct FunctionDef {
  ReturnType ret = ReturnType::Void;
  std::string name;
  std::vector<Param> params;
  StmtPtr body;   // Block
  Span span;
};

struct Ast {
  std::vector<std::string> includes;   // allowlisted headers, e.g. "stdio.h"
  std::vector<FunctionDef> functions;

  const FunctionDef* find(std::string_view name) const;
};

// Structural equality; spans are ignored.
bool equal(const Expr& a, const Expr& b);
bool equal(const Stmt& a, const Stmt& b);
bool equal(const FunctionDef& a, const FunctionDef& b);
bool equal(const Ast& a, const Ast& b);

/// Externs callable from MiniC; they have no body and are opaque to analysis.
bool is_extern_function(std::string_view name);
bool is_allowed_header(std::string_view header);

} // namespace memsest
