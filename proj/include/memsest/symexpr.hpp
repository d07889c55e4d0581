#pragma once

// Symbolic integer values for path exploration. A value is a small term tree
// over the function's scalar inputs; when the tree is affine its affine form is
// cached next to it. Values that depend on array contents or opaque calls are
// "tainted" and must never decide a branch.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "memsest/ast.hpp"

namespace memsest {

struct Affine {
  std::int64_t constant = 0;
  std::map<std::string, std::int64_t> coeffs;   // no zero entries

  bool is_const() const { return coeffs.empty(); }
  bool operator==(const Affine&) const = default;
};

struct SymNode;
using Sym = std::shared_ptr<const SymNode>;

struct SymNode {
  enum class Kind { Const, Input, Unknown, Binary, Unary };

  Kind kind = Kind::Const;
  std::int64_t value = 0;   // Const
  std::string name;         // Input
  BinOp bop = BinOp::Add;
  UnOp uop = UnOp::Neg;
  Sym a, b;
  std::optional<Affine> affine;
  bool tainted = false;
  std::set<std::string> vars;
};

Sym sym_const(std::int64_t v);
Sym sym_input(const std::string& name);
Sym sym_unknown();
/// Folds constants and keeps affine forms affine. Throws DivisionByZero on a
/// constant zero divisor.
Sym sym_binary(BinOp op, const Sym& a, const Sym& b);
Sym sym_unary(UnOp op, const Sym& a);

bool is_const(const Sym& s);
std::optional<std::int64_t> const_value(const Sym& s);

/// Canonical MiniC expression for the value: affine forms print as
/// `2 * x + y - 10`, other trees structurally.
ExprPtr sym_to_expr(const Sym& s);
std::string render(const Sym& s);

/// Reads an expression over input variables (every Var is an input).
Sym sym_from_expr(const Expr& e);

/// Evaluates at a point; nullopt when a division by zero occurs.
std::optional<std::int64_t> sym_eval(const Sym& s, const std::map<std::string, std::int64_t>& point);

enum class Rel { Lt, Le, Gt, Ge, Eq, Ne };

Rel negate(Rel r);
const char* rel_text(Rel r);
std::optional<Rel> rel_from_binop(BinOp op);
bool rel_holds(Rel r, std::int64_t lhs, std::int64_t rhs);

/// `lhs rel rhs`; semantically `lhs - rhs rel 0`.
struct Constraint {
  Sym lhs;
  Rel rel = Rel::Ne;
  Sym rhs;
};

struct PathCondition {
  std::vector<Constraint> constraints;
};

std::string render(const Constraint& c);
/// `(c1) && (c2) && ...`; `1` for the empty condition.
std::string render(const PathCondition& pc);

/// Parses `lhs rel rhs` (or any expression, read as `e != 0`).
Constraint parse_constraint(const std::string& text);
/// Splits a conjunction of relations into constraints.
std::vector<Constraint> parse_conjunction(const std::string& text);

std::set<std::string> vars_of(const PathCondition& pc);

} // namespace memsest
