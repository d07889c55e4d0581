#include "memsest/printer.hpp"

namespace memsest {

int precedence(BinOp op) {
  switch (op) {
    case BinOp::Or: return 1;
    case BinOp::And: return 2;
    case BinOp::Eq:
    case BinOp::Ne: return 3;
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge: return 4;
    case BinOp::Add:
    case BinOp::Sub: return 5;
    case BinOp::Mul:
    case BinOp::Div:
    case BinOp::Mod: return 6;
  }
  return 0;
}

namespace {

constexpr int kUnaryPrec = 7;

std::string escape_c(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '\0': out += "\\0"; break;
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      default: out += c;
    }
  }
  return out;
}

int expr_prec(const Expr& e) {
  if (e.kind == Expr::Kind::Binary)
    return precedence(e.bop);
  if (e.kind == Expr::Kind::Unary)
    return kUnaryPrec;
  return 8;
}

void print(const Expr& e, std::string& out);

void print_operand(const Expr& e, int min_prec, std::string& out) {
  if (expr_prec(e) < min_prec) {
    out += '(';
    print(e, out);
    out += ')';
  } else {
    print(e, out);
  }
}

void print(const Expr& e, std::string& out) {
  switch (e.kind) {
    case Expr::Kind::IntLit:
      out += std::to_string(e.value);
      break;
    case Expr::Kind::StrLit:
      out += '"' + escape_c(e.name) + '"';
      break;
    case Expr::Kind::Var:
      out += e.name;
      break;
    case Expr::Kind::Index:
      out += e.name;
      out += '[';
      print(e.index(), out);
      out += ']';
      break;
    case Expr::Kind::Binary: {
      int p = precedence(e.bop);
      print_operand(e.lhs(), p, out);
      out += ' ';
      out += binop_text(e.bop);
      out += ' ';
      // Left-associative: an equal-precedence right operand needs parentheses.
      print_operand(e.rhs(), p + 1, out);
      break;
    }
    case Expr::Kind::Unary: {
      out += e.uop == UnOp::Neg ? '-' : '!';
      const Expr& x = e.operand();
      // Keep `- -x` and `-(-1)` from fusing into `--`.
      bool wrap = expr_prec(x) < kUnaryPrec || x.kind == Expr::Kind::Unary ||
                  (x.kind == Expr::Kind::IntLit && x.value < 0);
      if (wrap)
        out += '(';
      print(x, out);
      if (wrap)
        out += ')';
      break;
    }
    case Expr::Kind::Call:
      out += e.name;
      out += '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i)
          out += ", ";
        print(*e.args[i], out);
      }
      out += ')';
      break;
  }
}

const char* assign_op_text(AssignOp op) {
  switch (op) {
    case AssignOp::Add: return " += ";
    case AssignOp::Sub: return " -= ";
    case AssignOp::Mul: return " *= ";
    case AssignOp::Div: return " /= ";
    case AssignOp::Mod: return " %= ";
    case AssignOp::Inc: return "++";
    case AssignOp::Dec: return "--";
  }
  return "";
}

std::string indent_str(int indent) { return std::string(static_cast<std::size_t>(indent) * 4, ' '); }

} // namespace

std::string print_expr(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

std::string print_simple_stmt(const Stmt& s) {
  std::string out;
  switch (s.kind) {
    case Stmt::Kind::Decl:
      out = "int ";
      for (std::size_t i = 0; i < s.decls.size(); ++i) {
        const auto& d = s.decls[i];
        if (i)
          out += ", ";
        out += d.name;
        if (d.is_array) {
          out += '[';
          if (d.size)
            print(*d.size, out);
          out += ']';
        }
        if (d.init) {
          out += " = ";
          print(*d.init, out);
        } else if (d.has_init_list) {
          out += " = {";
          for (std::size_t k = 0; k < d.init_list.size(); ++k) {
            if (k)
              out += ", ";
            print(*d.init_list[k], out);
          }
          out += '}';
        }
      }
      break;
    case Stmt::Kind::Assign:
      print(*s.target, out);
      out += " = ";
      print(*s.value, out);
      break;
    case Stmt::Kind::CompoundAssign:
      print(*s.target, out);
      out += assign_op_text(s.aop);
      if (s.value)
        print(*s.value, out);
      break;
    case Stmt::Kind::ExprStmt:
      print(*s.value, out);
      break;
    default:
      break;
  }
  return out;
}

std::string print_stmt(const Stmt& s, int indent) {
  std::string pad = indent_str(indent);
  std::string out;
  switch (s.kind) {
    case Stmt::Kind::Decl:
    case Stmt::Kind::Assign:
    case Stmt::Kind::CompoundAssign:
    case Stmt::Kind::ExprStmt:
      out = pad + print_simple_stmt(s) + ";\n";
      break;
    case Stmt::Kind::Return:
      out = pad + (s.value ? "return " + print_expr(*s.value) + ";\n" : "return;\n");
      break;
    case Stmt::Kind::Block:
      out = pad + "{\n";
      for (const auto& c : s.body)
        out += print_stmt(*c, indent + 1);
      out += pad + "}\n";
      break;
    case Stmt::Kind::If: {
      const Stmt* cur = &s;
      out = pad + "if (" + print_expr(*cur->cond) + ") {\n";
      for (;;) {
        for (const auto& c : cur->then_branch->body)
          out += print_stmt(*c, indent + 1);
        const Stmt* els = cur->else_branch.get();
        if (!els) {
          out += pad + "}\n";
          break;
        }
        if (els->body.size() == 1 && els->body[0]->kind == Stmt::Kind::If) {
          cur = els->body[0].get();
          out += pad + "} else if (" + print_expr(*cur->cond) + ") {\n";
          continue;
        }
        out += pad + "} else {\n";
        for (const auto& c : els->body)
          out += print_stmt(*c, indent + 1);
        out += pad + "}\n";
        break;
      }
      break;
    }
    case Stmt::Kind::While:
      out = pad + "while (" + print_expr(*s.cond) + ") {\n";
      for (const auto& c : s.then_branch->body)
        out += print_stmt(*c, indent + 1);
      out += pad + "}\n";
      break;
    case Stmt::Kind::For:
      out = pad + "for (" + (s.init ? print_simple_stmt(*s.init) : "") + ";" +
            (s.cond ? " " + print_expr(*s.cond) : "") + ";" +
            (s.step ? " " + print_simple_stmt(*s.step) : "") + ") {\n";
      for (const auto& c : s.then_branch->body)
        out += print_stmt(*c, indent + 1);
      out += pad + "}\n";
      break;
  }
  return out;
}

std::string print_signature(const FunctionDef& f) {
  std::string out = f.ret == ReturnType::Int ? "int " : "void ";
  out += f.name + "(";
  for (std::size_t i = 0; i < f.params.size(); ++i) {
    const auto& p = f.params[i];
    if (i)
      out += ", ";
    out += "int " + p.name;
    if (p.is_array)
      out += "[" + (p.size ? print_expr(*p.size) : std::string()) + "]";
  }
  out += ")";
  return out;
}

std::string print_function(const FunctionDef& f) {
  std::string out = print_signature(f) + " {\n";
  for (const auto& c : f.body->body)
    out += print_stmt(*c, 1);
  out += "}\n";
  return out;
}

std::string pretty_print(const Ast& ast) {
  std::string out;
  for (const auto& h : ast.includes)
    out += "#include <" + h + ">\n";
  for (std::size_t i = 0; i < ast.functions.size(); ++i) {
    if (i || !ast.includes.empty())
      out += "\n";
    out += print_function(ast.functions[i]);
  }
  return out;
}

} // namespace memsest
