#include "memsest/memscount.hpp"

namespace memsest {

namespace {

std::int64_t reads_in(const Expr& e) {
  std::int64_t n = e.kind == Expr::Kind::Index ? 1 : 0;
  for (const auto& a : e.args)
    n += reads_in(*a);
  return n;
}

// Cost of the lvalue itself, excluding the value being stored.
void count_target(const Expr& target, bool also_reads, MemsDelta& d) {
  if (target.kind != Expr::Kind::Index)
    return;
  d.writes += 1;
  if (also_reads)
    d.reads += 1;
  d.reads += reads_in(target.index());
}

} // namespace

MemsDelta count_expr(const Expr& e) {
  MemsDelta d;
  d.span = e.span;
  d.reads = reads_in(e);
  return d;
}

MemsDelta count_stmt(const Stmt& s) {
  MemsDelta d;
  d.span = s.span;
  switch (s.kind) {
    case Stmt::Kind::Decl:
      for (const auto& decl : s.decls) {
        if (decl.size)
          d.reads += reads_in(*decl.size);
        if (decl.init)
          d.reads += reads_in(*decl.init);
        for (const auto& e : decl.init_list)
          d.reads += reads_in(*e);
      }
      break;
    case Stmt::Kind::Assign:
      count_target(*s.target, false, d);
      d.reads += reads_in(*s.value);
      break;
    case Stmt::Kind::CompoundAssign:
      count_target(*s.target, true, d);
      if (s.value)
        d.reads += reads_in(*s.value);
      break;
    case Stmt::Kind::ExprStmt:
      d.reads += reads_in(*s.value);
      break;
    case Stmt::Kind::Return:
      if (s.value)
        d.reads += reads_in(*s.value);
      break;
    case Stmt::Kind::If:
    case Stmt::Kind::While:
    case Stmt::Kind::For:
      if (s.cond)
        d.reads += reads_in(*s.cond);
      break;
    case Stmt::Kind::Block:
      break;
  }
  return d;
}

std::int64_t unconditional_reads(const Expr& e) {
  if (e.kind == Expr::Kind::Binary && is_logical(e.bop))
    return unconditional_reads(e.lhs());
  std::int64_t n = e.kind == Expr::Kind::Index ? 1 : 0;
  for (const auto& a : e.args)
    n += unconditional_reads(*a);
  return n;
}

} // namespace memsest
