#pragma once

#include <string>

#include "memsest/ast.hpp"

namespace memsest {

std::string print_expr(const Expr& e);

/// Single-line form of a simple statement without the trailing `;`
/// (Decl, Assign, CompoundAssign, ExprStmt). Used in for headers and traces.
std::string print_simple_stmt(const Stmt& s);

std::string print_stmt(const Stmt& s, int indent = 0);
/// `int name(int a, int b[n])`
std::string print_signature(const FunctionDef& f);
std::string print_function(const FunctionDef& f);
std::string pretty_print(const Ast& ast);

int precedence(BinOp op);

} // namespace memsest
