#include "memsest/instrument.hpp"

#include <algorithm>
#include <sstream>

#include "memsest/error.hpp"
#include "memsest/memscount.hpp"
#include "memsest/printer.hpp"

namespace memsest {

namespace {

bool reserved(std::string_view name) {
  return name == "mems" || name == "path_len" || name.rfind("mems_", 0) == 0;
}

void check_reserved_expr(const Expr& e) {
  if ((e.kind == Expr::Kind::Var || e.kind == Expr::Kind::Index) && reserved(e.name))
    throw Error(Errc::UnsupportedConstruct,
                "identifier '" + e.name + "' is reserved for instrumentation counters");
  for (const auto& a : e.args)
    check_reserved_expr(*a);
}

void check_reserved_stmt(const Stmt& s) {
  for (const auto& d : s.decls)
    if (reserved(d.name))
      throw Error(Errc::UnsupportedConstruct,
                  "identifier '" + d.name + "' is reserved for instrumentation counters");
  for (const auto* e : {&s.target, &s.value, &s.cond})
    if (*e)
      check_reserved_expr(**e);
  for (const auto* c : {&s.init, &s.step, &s.then_branch, &s.else_branch})
    if (*c)
      check_reserved_stmt(**c);
  for (const auto& c : s.body)
    check_reserved_stmt(*c);
}

// printf format string literal for `text` followed by a newline.
std::string format_literal(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '%': out += "%%"; break;
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\\n\"";
}

bool has_conditional_reads(const Expr& e) {
  if (e.kind == Expr::Kind::Binary && is_logical(e.bop)) {
    if (count_expr(e.rhs()).reads > 0)
      return true;
    return has_conditional_reads(e.lhs());
  }
  for (const auto& a : e.args)
    if (has_conditional_reads(*a))
      return true;
  return false;
}

int prec_of(const Expr& e) {
  if (e.kind == Expr::Kind::Binary)
    return precedence(e.bop);
  if (e.kind == Expr::Kind::Unary)
    return 7;
  return 8;
}

std::string counted(const Expr& e);

std::string counted_operand(const Expr& e, int min_prec) {
  std::string s = counted(e);
  return prec_of(e) < min_prec ? "(" + s + ")" : s;
}

std::string bump(std::int64_t k) { return "mems = mems + " + std::to_string(k); }

// Prints `e` like print_expr, charging reads that only happen when the right
// operand of && / || is evaluated inside that operand.
std::string counted(const Expr& e) {
  if (!has_conditional_reads(e))
    return print_expr(e);
  switch (e.kind) {
    case Expr::Kind::Binary: {
      int p = precedence(e.bop);
      std::string out = counted_operand(e.lhs(), p) + " " + binop_text(e.bop) + " ";
      if (is_logical(e.bop)) {
        std::int64_t k = unconditional_reads(e.rhs());
        if (k > 0)
          return out + "(" + bump(k) + ", " + counted(e.rhs()) + ")";
      }
      return out + counted_operand(e.rhs(), p + 1);
    }
    case Expr::Kind::Unary: {
      const Expr& x = e.operand();
      std::string inner = counted(x);
      bool wrap = prec_of(x) < 7 || x.kind == Expr::Kind::Unary;
      return std::string(e.uop == UnOp::Neg ? "-" : "!") + (wrap ? "(" + inner + ")" : inner);
    }
    case Expr::Kind::Index:
      return e.name + "[" + counted(e.index()) + "]";
    case Expr::Kind::Call: {
      std::string out = e.name + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i)
        out += (i ? ", " : "") + counted(*e.args[i]);
      return out + ")";
    }
    default:
      return print_expr(e);
  }
}

// Condition with every read charged at evaluation time.
std::string counted_cond(const Expr& cond) {
  std::int64_t k = unconditional_reads(cond);
  std::string body = counted(cond);
  if (k == 0)
    return body;
  return "(" + bump(k) + ", " + body + ")";
}

// Writes plus reads that always happen when the simple statement runs.
std::int64_t unconditional_cost(const Stmt& s) {
  std::int64_t n = 0;
  auto target = [&](const Expr& t, bool reads_too) {
    if (t.kind != Expr::Kind::Index)
      return;
    n += reads_too ? 2 : 1;
    n += unconditional_reads(t.index());
  };
  switch (s.kind) {
    case Stmt::Kind::Decl:
      for (const auto& d : s.decls) {
        if (d.size)
          n += unconditional_reads(*d.size);
        if (d.init)
          n += unconditional_reads(*d.init);
        for (const auto& e : d.init_list)
          n += unconditional_reads(*e);
      }
      break;
    case Stmt::Kind::Assign:
      target(*s.target, false);
      n += unconditional_reads(*s.value);
      break;
    case Stmt::Kind::CompoundAssign:
      target(*s.target, true);
      if (s.value)
        n += unconditional_reads(*s.value);
      break;
    case Stmt::Kind::ExprStmt:
    case Stmt::Kind::Return:
      if (s.value)
        n += unconditional_reads(*s.value);
      break;
    default:
      break;
  }
  return n;
}

bool stmt_has_conditional_reads(const Stmt& s) {
  for (const auto* e : {&s.target, &s.value})
    if (*e && has_conditional_reads(**e))
      return true;
  for (const auto& d : s.decls) {
    if (d.size && has_conditional_reads(*d.size))
      return true;
    if (d.init && has_conditional_reads(*d.init))
      return true;
    for (const auto& e : d.init_list)
      if (has_conditional_reads(*e))
        return true;
  }
  return false;
}

// Simple statement text (no ';') with conditional reads charged inline.
std::string counted_simple(const Stmt& s) {
  if (!stmt_has_conditional_reads(s))
    return print_simple_stmt(s);
  std::string out;
  switch (s.kind) {
    case Stmt::Kind::Decl:
      out = "int ";
      for (std::size_t i = 0; i < s.decls.size(); ++i) {
        const auto& d = s.decls[i];
        out += (i ? ", " : "") + d.name;
        if (d.is_array)
          out += "[" + (d.size ? counted(*d.size) : std::string()) + "]";
        if (d.init) {
          out += " = " + counted(*d.init);
        } else if (d.has_init_list) {
          out += " = {";
          for (std::size_t k = 0; k < d.init_list.size(); ++k)
            out += (k ? ", " : "") + counted(*d.init_list[k]);
          out += "}";
        }
      }
      return out;
    case Stmt::Kind::Assign:
      return counted(*s.target) + " = " + counted(*s.value);
    case Stmt::Kind::CompoundAssign: {
      std::string full = print_simple_stmt(s);
      std::string lhs = print_expr(*s.target);
      // Only the value side can hold conditional reads.
      std::string op = full.substr(lhs.size(), full.size() - lhs.size() - print_expr(*s.value).size());
      return counted(*s.target) + op + counted(*s.value);
    }
    case Stmt::Kind::ExprStmt:
      return counted(*s.value);
    default:
      return print_simple_stmt(s);
  }
}

class Emitter {
public:
  Emitter(const Ast& ast, const InstrumentConfig& cfg) : ast_(ast), cfg_(cfg) {}

  std::string run() {
    if (cfg_.cond_marker != '#' && cfg_.cond_marker != '@')
      throw Error(Errc::InvalidInput, "condition marker must be '#' or '@'");
    auto targets = resolve_targets(ast_, cfg_);
    for (const auto& f : ast_.functions) {
      for (const auto& p : f.params)
        if (reserved(p.name))
          throw Error(Errc::UnsupportedConstruct,
                      "identifier '" + p.name + "' is reserved for instrumentation counters");
      check_reserved_stmt(*f.body);
    }

    if (cfg_.timer == TimerMode::Monotonic)
      inserted(0, "#define _POSIX_C_SOURCE 199309L");
    inserted(0, "#include <stdio.h>");
    if (cfg_.timer == TimerMode::Monotonic)
      inserted(0, "#include <time.h>");
    if (cfg_.harness_entry) {
      inserted(0, "#include <stdlib.h>");
      inserted(0, "#include <string.h>");
    }
    for (const auto& h : ast_.includes)
      original(0, "#include <" + h + ">");
    for (std::size_t i = 0; i < ast_.functions.size(); ++i) {
      const auto& f = ast_.functions[i];
      if (i || !ast_.includes.empty())
        out_ += "\n";
      if (std::find(targets.begin(), targets.end(), f.name) != targets.end())
        function(f);
      else
        out_ += print_function(f);
    }
    if (cfg_.harness_entry)
      harness(*cfg_.harness_entry);
    return std::move(out_);
  }

private:
  const Ast& ast_;
  const InstrumentConfig& cfg_;
  const FunctionDef* fn_ = nullptr;
  std::string out_;

  static std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent) * 4, ' '); }

  void original(int indent, const std::string& line) { out_ += pad(indent) + line + "\n"; }

  void inserted(int indent, const std::string& line) {
    out_ += pad(indent) + line + " " + std::string(kInsertedTag) + "\n";
  }

  // An original line whose text changed; keeps the original for strip().
  void rewritten(int indent, const std::string& line, const std::string& orig) {
    if (line == orig) {
      original(indent, line);
      return;
    }
    if (orig.find("*/") != std::string::npos)
      throw Error(Errc::UnsupportedConstruct, "cannot tag a line containing '*/': " + orig);
    out_ += pad(indent) + line + " " + std::string(kRewrittenTagPrefix) + orig + " */\n";
  }

  void add_mems(int indent, std::int64_t k) {
    if (k > 0)
      inserted(indent, bump(k) + ";");
  }

  std::string log_call(const std::string& text) const { return "printf(" + format_literal(text) + ")"; }

  void branch_log(int indent, const Expr& cond, bool taken) {
    if (cfg_.trace == TraceMode::Full)
      inserted(indent, log_call(cond_trace_line(cfg_.cond_marker, cond, taken)) + ";");
    inserted(indent, "path_len = path_len + 1;");
  }

  void summary(int indent) {
    if (cfg_.timer == TimerMode::Monotonic)
      inserted(indent, "clock_gettime(CLOCK_MONOTONIC, &mems_end);");
    inserted(indent, "printf(\"Total path length: %lld\\n\", path_len);");
    inserted(indent, "printf(\"Total memory accesses: %lld\\n\", mems);");
    if (cfg_.timer == TimerMode::Monotonic)
      inserted(indent,
               "printf(\"Execution time: %.6f ms\\n\", (double)(mems_end.tv_sec - mems_start.tv_sec) * 1e3 + "
               "(double)(mems_end.tv_nsec - mems_start.tv_nsec) / 1e6);");
  }

  void function(const FunctionDef& f) {
    fn_ = &f;
    out_ += print_signature(f) + " {\n";
    inserted(1, "long long mems = 0;");
    inserted(1, "long long path_len = 0;");
    if (f.ret == ReturnType::Int)
      inserted(1, "int mems_rv = 0;");
    if (cfg_.timer == TimerMode::Monotonic) {
      inserted(1, "struct timespec mems_start, mems_end;");
      inserted(1, "clock_gettime(CLOCK_MONOTONIC, &mems_start);");
    }
    inserted(1, "printf(\"Path:\\n\");");
    const auto& body = f.body->body;
    for (const auto& s : body)
      stmt(*s, 1);
    if (body.empty() || body.back()->kind != Stmt::Kind::Return)
      summary(1);
    out_ += "}\n";
    fn_ = nullptr;
  }

  void body(const Stmt& block, int indent) {
    for (const auto& s : block.body)
      stmt(*s, indent);
  }

  void stmt(const Stmt& s, int indent) {
    switch (s.kind) {
      case Stmt::Kind::Decl:
      case Stmt::Kind::ExprStmt:
        rewritten(indent, counted_simple(s) + ";", print_simple_stmt(s) + ";");
        add_mems(indent, unconditional_cost(s));
        break;
      case Stmt::Kind::Assign:
      case Stmt::Kind::CompoundAssign: {
        std::string text = print_simple_stmt(s) + ";";
        rewritten(indent, counted_simple(s) + ";", text);
        if (cfg_.trace == TraceMode::Full)
          inserted(indent, log_call(text) + ";");
        add_mems(indent, unconditional_cost(s));
        break;
      }
      case Stmt::Kind::Return:
        if (s.value) {
          rewritten(indent, "mems_rv = " + counted(*s.value) + ";", "return " + print_expr(*s.value) + ";");
          add_mems(indent, unconditional_cost(s));
          summary(indent);
          inserted(indent, "return mems_rv;");
        } else {
          summary(indent);
          original(indent, "return;");
        }
        break;
      case Stmt::Kind::Block:
        original(indent, "{");
        body(s, indent + 1);
        original(indent, "}");
        break;
      case Stmt::Kind::If:
        if_chain(s, indent, "if (" + counted_cond(*s.cond) + ") {", "if (" + print_expr(*s.cond) + ") {");
        break;
      case Stmt::Kind::While:
        rewritten(indent, "while (" + counted_cond(*s.cond) + ") {", "while (" + print_expr(*s.cond) + ") {");
        branch_log(indent + 1, *s.cond, true);
        body(*s.then_branch, indent + 1);
        original(indent, "}");
        break;
      case Stmt::Kind::For: {
        std::string init, init_orig, step, step_orig, cond, cond_orig;
        if (s.init) {
          init = counted_simple(*s.init);
          init_orig = print_simple_stmt(*s.init);
          add_mems(indent, unconditional_cost(*s.init));
        }
        if (s.cond) {
          cond = " " + counted_cond(*s.cond);
          cond_orig = " " + print_expr(*s.cond);
        }
        if (s.step) {
          step_orig = print_simple_stmt(*s.step);
          std::int64_t k = unconditional_cost(*s.step);
          step = (k > 0 ? bump(k) + ", " : std::string()) + counted_simple(*s.step);
          step = " " + step;
          step_orig = " " + step_orig;
        }
        rewritten(indent, "for (" + init + ";" + cond + ";" + step + ") {",
                  "for (" + init_orig + ";" + cond_orig + ";" + step_orig + ") {");
        static const ExprPtr always = make_int(1);
        branch_log(indent + 1, s.cond ? *s.cond : *always, true);
        body(*s.then_branch, indent + 1);
        original(indent, "}");
        break;
      }
    }
  }

  // Mirrors the printer's `else if` folding so strip() reproduces pretty_print.
  void if_chain(const Stmt& s, int indent, const std::string& header, const std::string& header_orig) {
    rewritten(indent, header, header_orig);
    const Stmt* cur = &s;
    for (;;) {
      branch_log(indent + 1, *cur->cond, true);
      body(*cur->then_branch, indent + 1);
      const Stmt* els = cur->else_branch.get();
      if (!els) {
        original(indent, "}");
        return;
      }
      if (els->body.size() == 1 && els->body[0]->kind == Stmt::Kind::If) {
        // The else-entry log runs before the nested condition is evaluated.
        const Stmt* next = els->body[0].get();
        std::string prefix = cfg_.trace == TraceMode::Full
                                 ? log_call(cond_trace_line(cfg_.cond_marker, *cur->cond, false)) + ", "
                                 : std::string();
        prefix += "path_len = path_len + 1, ";
        rewritten(indent, "} else if ((" + prefix + counted_cond(*next->cond) + ")) {",
                  "} else if (" + print_expr(*next->cond) + ") {");
        cur = next;
        continue;
      }
      original(indent, "} else {");
      branch_log(indent + 1, *cur->cond, false);
      body(*els, indent + 1);
      original(indent, "}");
      return;
    }
  }

  void harness(const std::string& entry) {
    if (ast_.find("main"))
      throw Error(Errc::UnsupportedConstruct, "the program already defines main; no harness emitted");
    const FunctionDef* f = ast_.find(entry);
    if (!f)
      throw Error(Errc::TargetNotFound, "harness entry '" + entry + "' is not defined");
    const char* fill[] = {
        "static int *mems_fill(const char *spec, long long len) {",
        "    const char *at = strchr(spec, '@');",
        "    const char *colon = strchr(spec, ':');",
        "    long long arg = colon ? strtoll(colon + 1, 0, 10) : 0;",
        "    unsigned long long state = (unsigned long long)arg;",
        "    long long i;",
        "    int *a;",
        "    if (at) len = strtoll(at + 1, 0, 10);",
        "    if (strncmp(spec, \"list:\", 5) == 0) {",
        "        const char *p = spec + 5;",
        "        char *next;",
        "        long long n = 1;",
        "        const char *q;",
        "        for (q = p; *q && *q != '@'; q++) if (*q == ',') n++;",
        "        if (len < 0) len = n;",
        "        a = calloc(len > 0 ? len : 1, sizeof(int));",
        "        for (i = 0; i < n && i < len; i++) { a[i] = (int)strtoll(p, &next, 10); p = next; if (*p == ',') p++; }",
        "        return a;",
        "    }",
        "    if (len < 0) { fprintf(stderr, \"array length unknown for %s\\n\", spec); exit(2); }",
        "    a = calloc(len > 0 ? len : 1, sizeof(int));",
        "    for (i = 0; i < len; i++) {",
        "        if (strncmp(spec, \"sorted\", 6) == 0) a[i] = (int)i;",
        "        else if (strncmp(spec, \"reversed\", 8) == 0) a[i] = (int)(len - 1 - i);",
        "        else if (strncmp(spec, \"const\", 5) == 0) a[i] = (int)arg;",
        "        else if (strncmp(spec, \"random\", 6) == 0) {",
        "            state = state * 6364136223846793005ULL + 1442695040888963407ULL;",
        "            a[i] = (int)((state >> 33) % 1000);",
        "        } else { fprintf(stderr, \"unknown array generator %s\\n\", spec); exit(2); }",
        "    }",
        "    return a;",
        "}",
    };
    inserted(0, "");
    for (const char* line : fill)
      inserted(0, line);
    inserted(0, "");
    std::string usage;
    for (const auto& p : f->params)
      usage += " " + p.name;
    inserted(0, "int main(int mems_argc, char **mems_argv) {");
    inserted(1, "if (mems_argc != " + std::to_string(f->params.size() + 1) + ") {");
    inserted(2, "fprintf(stderr, \"usage: %s" + usage + "\\n\", mems_argv[0]);");
    inserted(2, "return 2;");
    inserted(1, "}");
    for (std::size_t i = 0; i < f->params.size(); ++i) {
      const auto& p = f->params[i];
      if (!p.is_array)
        inserted(1, "int " + p.name + " = (int)strtoll(mems_argv[" + std::to_string(i + 1) + "], 0, 10);");
    }
    std::string call = entry + "(";
    for (std::size_t i = 0; i < f->params.size(); ++i) {
      const auto& p = f->params[i];
      if (p.is_array) {
        std::string len = p.size ? "(long long)(" + print_expr(*p.size) + ")" : "-1";
        inserted(1, "int *" + p.name + " = mems_fill(mems_argv[" + std::to_string(i + 1) + "], " + len + ");");
      }
      call += (i ? ", " : "") + p.name;
    }
    inserted(1, call + ");");
    inserted(1, "return 0;");
    inserted(0, "}");
  }
};

} // namespace

std::vector<std::string> resolve_targets(const Ast& ast, const InstrumentConfig& cfg) {
  for (const auto& name : cfg.target_functions)
    if (!ast.find(name))
      throw Error(Errc::TargetNotFound, "function '" + name + "' is not defined");
  std::vector<std::string> out;
  for (const auto& f : ast.functions) {
    if (f.name == "main")
      continue;
    if (cfg.target_functions.empty() ||
        std::find(cfg.target_functions.begin(), cfg.target_functions.end(), f.name) !=
            cfg.target_functions.end())
      out.push_back(f.name);
  }
  return out;
}

std::string cond_trace_line(char marker, const Expr& cond, bool taken) {
  std::string text = print_expr(cond);
  if (taken)
    return std::string(1, marker) + "(" + text + ")";
  return std::string(1, marker) + "(!(" + text + "))";
}

std::string instrument(const Ast& ast, const InstrumentConfig& cfg) { return Emitter(ast, cfg).run(); }

std::string strip(std::string_view instrumented) {
  std::string out;
  bool tagged = false;
  std::size_t pos = 0;
  const std::string inserted_suffix = " " + std::string(kInsertedTag);
  const std::string orig_marker = " " + std::string(kRewrittenTagPrefix);
  while (pos < instrumented.size()) {
    std::size_t nl = instrumented.find('\n', pos);
    bool has_nl = nl != std::string_view::npos;
    std::string line(instrumented.substr(pos, has_nl ? nl - pos : std::string_view::npos));
    pos = has_nl ? nl + 1 : instrumented.size();

    if (line == std::string(kInsertedTag) ||
        (line.size() >= inserted_suffix.size() &&
         line.compare(line.size() - inserted_suffix.size(), inserted_suffix.size(), inserted_suffix) == 0)) {
      tagged = true;
      continue;
    }
    std::size_t at = line.find(orig_marker);
    if (at != std::string::npos && line.size() >= 3 && line.compare(line.size() - 3, 3, " */") == 0) {
      tagged = true;
      std::size_t indent = line.find_first_not_of(' ');
      std::size_t text_begin = at + orig_marker.size();
      line = line.substr(0, indent) + line.substr(text_begin, line.size() - 3 - text_begin);
    }
    out += line;
    if (has_nl)
      out += '\n';
  }
  if (!tagged)
    throw Error(Errc::NotInstrumentedByUs, "no instrumentation markers found");
  return out;
}

} // namespace memsest
