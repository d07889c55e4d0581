#include "memsest/symexpr.hpp"

#include <limits>

#include "memsest/error.hpp"
#include "memsest/parser.hpp"
#include "memsest/printer.hpp"

namespace memsest {

namespace {

std::int64_t wadd(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}
std::int64_t wsub(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
}
std::int64_t wmul(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

std::optional<std::int64_t> apply(BinOp op, std::int64_t a, std::int64_t b) {
  switch (op) {
    case BinOp::Add: return wadd(a, b);
    case BinOp::Sub: return wsub(a, b);
    case BinOp::Mul: return wmul(a, b);
    case BinOp::Div:
    case BinOp::Mod:
      if (b == 0)
        return std::nullopt;
      if (a == std::numeric_limits<std::int64_t>::min() && b == -1)
        return op == BinOp::Div ? a : 0;
      return op == BinOp::Div ? a / b : a % b;
    case BinOp::Lt: return a < b;
    case BinOp::Le: return a <= b;
    case BinOp::Gt: return a > b;
    case BinOp::Ge: return a >= b;
    case BinOp::Eq: return a == b;
    case BinOp::Ne: return a != b;
    case BinOp::And: return a != 0 && b != 0;
    case BinOp::Or: return a != 0 || b != 0;
  }
  return std::nullopt;
}

Affine scale(const Affine& x, std::int64_t k) {
  Affine out;
  if (k == 0)
    return out;
  out.constant = wmul(x.constant, k);
  for (const auto& [v, c] : x.coeffs)
    out.coeffs[v] = wmul(c, k);
  return out;
}

Affine combine(const Affine& x, const Affine& y, std::int64_t sign) {
  Affine out = x;
  out.constant = sign > 0 ? wadd(out.constant, y.constant) : wsub(out.constant, y.constant);
  for (const auto& [v, c] : y.coeffs) {
    std::int64_t n = sign > 0 ? wadd(out.coeffs[v], c) : wsub(out.coeffs[v], c);
    if (n == 0)
      out.coeffs.erase(v);
    else
      out.coeffs[v] = n;
  }
  return out;
}

std::shared_ptr<SymNode> node(SymNode::Kind k) {
  auto n = std::make_shared<SymNode>();
  n->kind = k;
  return n;
}

// Affine form rebuilt as an expression tree, terms in variable-name order.
ExprPtr affine_expr(const Affine& a) {
  ExprPtr acc;
  auto term = [](std::int64_t c, const std::string& v) -> ExprPtr {
    if (c == 1)
      return make_var(v);
    return make_binary(BinOp::Mul, make_int(c), make_var(v));
  };
  for (const auto& [v, c] : a.coeffs) {
    if (!acc) {
      acc = c == -1 ? make_unary(UnOp::Neg, make_var(v)) : term(c, v);
    } else if (c > 0) {
      acc = make_binary(BinOp::Add, acc, term(c, v));
    } else if (c != std::numeric_limits<std::int64_t>::min()) {
      acc = make_binary(BinOp::Sub, acc, term(-c, v));
    } else {
      acc = make_binary(BinOp::Add, acc, term(c, v));
    }
  }
  if (!acc)
    return make_int(a.constant);
  if (a.constant > 0)
    return make_binary(BinOp::Add, acc, make_int(a.constant));
  if (a.constant < 0 && a.constant != std::numeric_limits<std::int64_t>::min())
    return make_binary(BinOp::Sub, acc, make_int(-a.constant));
  if (a.constant < 0)
    return make_binary(BinOp::Add, acc, make_int(a.constant));
  return acc;
}

} // namespace

Sym sym_const(std::int64_t v) {
  auto n = node(SymNode::Kind::Const);
  n->value = v;
  n->affine = Affine{v, {}};
  return n;
}

Sym sym_input(const std::string& name) {
  auto n = node(SymNode::Kind::Input);
  n->name = name;
  n->affine = Affine{0, {{name, 1}}};
  n->vars.insert(name);
  return n;
}

Sym sym_unknown() {
  auto n = node(SymNode::Kind::Unknown);
  n->tainted = true;
  return n;
}

bool is_const(const Sym& s) { return s->kind == SymNode::Kind::Const; }

std::optional<std::int64_t> const_value(const Sym& s) {
  if (is_const(s))
    return s->value;
  return std::nullopt;
}

Sym sym_binary(BinOp op, const Sym& a, const Sym& b) {
  if (is_const(a) && is_const(b)) {
    auto v = apply(op, a->value, b->value);
    if (!v)
      throw Error(Errc::DivisionByZero, op == BinOp::Div ? "division by zero" : "modulo by zero");
    return sym_const(*v);
  }
  if ((op == BinOp::Div || op == BinOp::Mod) && is_const(b) && b->value == 0)
    throw Error(Errc::DivisionByZero, op == BinOp::Div ? "division by zero" : "modulo by zero");
  auto n = node(SymNode::Kind::Binary);
  n->bop = op;
  n->a = a;
  n->b = b;
  n->tainted = a->tainted || b->tainted;
  n->vars = a->vars;
  n->vars.insert(b->vars.begin(), b->vars.end());
  if (!n->tainted && a->affine && b->affine) {
    if (op == BinOp::Add || op == BinOp::Sub) {
      n->affine = combine(*a->affine, *b->affine, op == BinOp::Add ? 1 : -1);
    } else if (op == BinOp::Mul && (a->affine->is_const() || b->affine->is_const())) {
      n->affine = a->affine->is_const() ? scale(*b->affine, a->affine->constant) : scale(*a->affine, b->affine->constant);
    }
    if (n->affine && n->affine->is_const())
      return sym_const(n->affine->constant);
  }
  return n;
}

Sym sym_unary(UnOp op, const Sym& a) {
  if (is_const(a))
    return sym_const(op == UnOp::Neg ? wsub(0, a->value) : a->value == 0);
  auto n = node(SymNode::Kind::Unary);
  n->uop = op;
  n->a = a;
  n->tainted = a->tainted;
  n->vars = a->vars;
  if (op == UnOp::Neg && a->affine)
    n->affine = scale(*a->affine, -1);
  return n;
}

ExprPtr sym_to_expr(const Sym& s) {
  if (s->affine)
    return affine_expr(*s->affine);
  switch (s->kind) {
    case SymNode::Kind::Unknown: return make_var("?");
    case SymNode::Kind::Binary: return make_binary(s->bop, sym_to_expr(s->a), sym_to_expr(s->b));
    case SymNode::Kind::Unary: return make_unary(s->uop, sym_to_expr(s->a));
    default: break;
  }
  return make_int(s->value);
}

std::string render(const Sym& s) { return print_expr(*sym_to_expr(s)); }

Sym sym_from_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::IntLit: return sym_const(e.value);
    case Expr::Kind::Var: return sym_input(e.name);
    case Expr::Kind::Binary: return sym_binary(e.bop, sym_from_expr(e.lhs()), sym_from_expr(e.rhs()));
    case Expr::Kind::Unary: return sym_unary(e.uop, sym_from_expr(e.operand()));
    default: break;
  }
  throw Error(Errc::InvalidInput, "'" + print_expr(e) + "' is not an expression over input variables");
}

std::optional<std::int64_t> sym_eval(const Sym& s, const std::map<std::string, std::int64_t>& point) {
  switch (s->kind) {
    case SymNode::Kind::Const: return s->value;
    case SymNode::Kind::Input: {
      auto it = point.find(s->name);
      if (it == point.end())
        throw Error(Errc::UnboundedDomain, "no value for '" + s->name + "'");
      return it->second;
    }
    case SymNode::Kind::Unknown: throw Error(Errc::DataDependentBranch, "value depends on array contents");
    case SymNode::Kind::Unary: {
      auto v = sym_eval(s->a, point);
      if (!v)
        return v;
      return s->uop == UnOp::Neg ? wsub(0, *v) : *v == 0;
    }
    case SymNode::Kind::Binary: {
      auto x = sym_eval(s->a, point);
      if (!x)
        return x;
      if (s->bop == BinOp::And && *x == 0)
        return 0;
      if (s->bop == BinOp::Or && *x != 0)
        return 1;
      auto y = sym_eval(s->b, point);
      if (!y)
        return y;
      return apply(s->bop, *x, *y);
    }
  }
  return std::nullopt;
}

Rel negate(Rel r) {
  switch (r) {
    case Rel::Lt: return Rel::Ge;
    case Rel::Le: return Rel::Gt;
    case Rel::Gt: return Rel::Le;
    case Rel::Ge: return Rel::Lt;
    case Rel::Eq: return Rel::Ne;
    case Rel::Ne: return Rel::Eq;
  }
  return r;
}

const char* rel_text(Rel r) {
  switch (r) {
    case Rel::Lt: return "<";
    case Rel::Le: return "<=";
    case Rel::Gt: return ">";
    case Rel::Ge: return ">=";
    case Rel::Eq: return "==";
    case Rel::Ne: return "!=";
  }
  return "?";
}

std::optional<Rel> rel_from_binop(BinOp op) {
  switch (op) {
    case BinOp::Lt: return Rel::Lt;
    case BinOp::Le: return Rel::Le;
    case BinOp::Gt: return Rel::Gt;
    case BinOp::Ge: return Rel::Ge;
    case BinOp::Eq: return Rel::Eq;
    case BinOp::Ne: return Rel::Ne;
    default: return std::nullopt;
  }
}

bool rel_holds(Rel r, std::int64_t lhs, std::int64_t rhs) {
  switch (r) {
    case Rel::Lt: return lhs < rhs;
    case Rel::Le: return lhs <= rhs;
    case Rel::Gt: return lhs > rhs;
    case Rel::Ge: return lhs >= rhs;
    case Rel::Eq: return lhs == rhs;
    case Rel::Ne: return lhs != rhs;
  }
  return false;
}

std::string render(const Constraint& c) {
  // Same operator placement as the printer: relational operands bind tighter
  // than == / != and looser than arithmetic.
  auto side = [](const Sym& s, int min_prec) {
    ExprPtr e = sym_to_expr(s);
    std::string t = print_expr(*e);
    int p = e->kind == Expr::Kind::Binary ? precedence(e->bop) : 8;
    return p < min_prec ? "(" + t + ")" : t;
  };
  int p = (c.rel == Rel::Eq || c.rel == Rel::Ne) ? 3 : 4;
  return side(c.lhs, p) + " " + rel_text(c.rel) + " " + side(c.rhs, p + 1);
}

std::string render(const PathCondition& pc) {
  if (pc.constraints.empty())
    return "1";
  std::string out;
  for (std::size_t i = 0; i < pc.constraints.size(); ++i) {
    if (i)
      out += " && ";
    out += "(" + render(pc.constraints[i]) + ")";
  }
  return out;
}

namespace {

Constraint constraint_of(const Expr& e) {
  if (e.kind == Expr::Kind::Binary) {
    if (auto r = rel_from_binop(e.bop))
      return Constraint{sym_from_expr(e.lhs()), *r, sym_from_expr(e.rhs())};
  }
  if (e.kind == Expr::Kind::Unary && e.uop == UnOp::Not) {
    Constraint c = constraint_of(e.operand());
    c.rel = negate(c.rel);
    return c;
  }
  return Constraint{sym_from_expr(e), Rel::Ne, sym_const(0)};
}

void split(const Expr& e, std::vector<Constraint>& out) {
  if (e.kind == Expr::Kind::Binary && e.bop == BinOp::And) {
    split(e.lhs(), out);
    split(e.rhs(), out);
    return;
  }
  out.push_back(constraint_of(e));
}

} // namespace

Constraint parse_constraint(const std::string& text) { return constraint_of(*parse_expression(text)); }

std::vector<Constraint> parse_conjunction(const std::string& text) {
  std::vector<Constraint> out;
  split(*parse_expression(text), out);
  return out;
}

std::set<std::string> vars_of(const PathCondition& pc) {
  std::set<std::string> out;
  for (const auto& c : pc.constraints) {
    out.insert(c.lhs->vars.begin(), c.lhs->vars.end());
    out.insert(c.rhs->vars.begin(), c.rhs->vars.end());
  }
  return out;
}

} // namespace memsest
