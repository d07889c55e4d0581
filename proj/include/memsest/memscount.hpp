#pragma once

// Static mems rules: every evaluated array-element read or write costs one mem.
// Scalar traffic is free.

#include <cstdint>

#include "memsest/ast.hpp"

namespace memsest {

struct MemsDelta {
  Span span;
  std::int64_t reads = 0;
  std::int64_t writes = 0;

  std::int64_t total() const { return reads + writes; }
};

/// Reads in an expression evaluated in read position, assuming every operand is
/// evaluated (no short-circuit). Nested subscripts count each level.
MemsDelta count_expr(const Expr& e);

/// Per-statement delta. Branch statements (If/While/For) report the cost of one
/// evaluation of their condition; For init/step and bodies are separate statements.
MemsDelta count_stmt(const Stmt& s);

/// Reads that happen on every evaluation of `e`: those not inside the right
/// operand of `&&` or `||`.
std::int64_t unconditional_reads(const Expr& e);

} // namespace memsest
