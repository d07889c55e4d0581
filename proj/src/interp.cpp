#include "memsest/interp.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <limits>
#include <memory>
#include <unordered_map>

#include "memsest/generators.hpp"
#include "memsest/printer.hpp"

namespace memsest {

namespace {

using Array = std::shared_ptr<std::vector<std::int64_t>>;

struct Slot {
  std::int64_t value = 0;
  Array array;
};

struct Frame {
  const FunctionDef* fn = nullptr;
  std::vector<std::unordered_map<std::string, Slot>> scopes;
  bool counting = false;
  std::int64_t mems = 0;
  std::int64_t path_len = 0;
  std::int64_t ret = 0;
};

enum class Flow { Normal, Return };

std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}
std::int64_t wrap_sub(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
}
std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

class Machine {
public:
  Machine(const Ast& ast, const InterpOptions& opts) : ast_(ast), opts_(opts) {
    InstrumentConfig cfg;
    cfg.target_functions = opts.target_functions;
    for (auto& name : resolve_targets(ast, cfg))
      targets_.push_back(ast.find(name));
  }

  InterpResult run(std::string_view fn_name, const std::vector<ArgValue>& args) {
    const FunctionDef* f = ast_.find(fn_name);
    if (!f)
      throw Error(Errc::TargetNotFound, "function '" + std::string(fn_name) + "' is not defined");
    if (args.size() != f->params.size())
      throw Error(Errc::InvalidInput, "function '" + f->name + "' takes " + std::to_string(f->params.size()) +
                                          " arguments, got " + std::to_string(args.size()));
    std::vector<Slot> slots;
    for (std::size_t i = 0; i < args.size(); ++i) {
      const auto& p = f->params[i];
      if (p.is_array != args[i].is_array)
        throw Error(Errc::InvalidInput, "argument '" + p.name + "' must be " + (p.is_array ? "an array" : "a scalar"));
      Slot s;
      if (p.is_array)
        s.array = std::make_shared<std::vector<std::int64_t>>(args[i].array);
      else
        s.value = args[i].scalar;
      slots.push_back(std::move(s));
    }
    InterpResult result;
    try {
      result.return_value = call(*f, std::move(slots));
    } catch (const Error& e) {
      if (dynamic_cast<const InterpError*>(&e))
        throw;
      std::string msg = e.what();
      throw InterpError(e.code(), msg.substr(msg.find(": ") + 2), snapshot(), out_);
    }
    result.record = snapshot();
    result.stdout_text = std::move(out_);
    return result;
  }

private:
  const Ast& ast_;
  const InterpOptions& opts_;
  std::vector<const FunctionDef*> targets_;
  std::vector<Frame> frames_;
  std::string out_;
  std::int64_t steps_ = 0;
  std::int64_t entry_mems_ = 0;
  std::int64_t entry_path_len_ = 0;
  bool entry_done_ = false;
  std::unordered_map<const Expr*, std::string> taken_text_;
  std::unordered_map<const Expr*, std::string> not_taken_text_;
  std::unordered_map<const Stmt*, std::string> stmt_text_;

  bool emulate() const { return opts_.emulate_instrumentation; }
  bool full_trace() const { return emulate() && opts_.trace == TraceMode::Full; }
  Frame& frame() { return frames_.back(); }

  [[noreturn]] void fail(Errc code, const std::string& msg) {
    throw InterpError(code, msg, snapshot(), out_);
  }

  RunRecord snapshot() {
    RunRecord r;
    r.source = RunSource::Interpreter;
    if (entry_done_) {
      r.mems = entry_mems_;
      r.path_len = entry_path_len_;
    } else if (!frames_.empty()) {
      r.mems = frames_.front().mems;
      r.path_len = frames_.front().path_len;
    }
    r.steps = steps_;
    r.trace = entry_trace();
    return r;
  }

  // Lines printed inside the first outermost Path: block; tolerates a cut-off run.
  std::vector<std::string> entry_trace() const {
    std::vector<std::string> trace;
    if (!emulate())
      return trace;
    int depth = 0;
    std::size_t pos = 0;
    bool skip_next = false;
    while (pos < out_.size()) {
      std::size_t nl = out_.find('\n', pos);
      if (nl == std::string::npos)
        nl = out_.size();
      std::string line = out_.substr(pos, nl - pos);
      pos = nl + 1;
      if (skip_next) {
        skip_next = false;
        continue;
      }
      if (line == "Path:") {
        ++depth;
        continue;
      }
      if (depth > 0 && line.rfind("Total path length: ", 0) == 0) {
        skip_next = true;
        if (--depth == 0)
          break;
        continue;
      }
      if (depth == 1)
        trace.push_back(std::move(line));
    }
    return trace;
  }

  void step() {
    if (++steps_ > opts_.max_steps)
      fail(Errc::StepLimitExceeded, "step limit of " + std::to_string(opts_.max_steps) + " exceeded");
  }

  void charge(std::int64_t k) {
    if (frame().counting)
      frame().mems += k;
  }

  void branch(const Expr& cond, bool taken) {
    if (!frame().counting)
      return;
    if (full_trace()) {
      auto& cache = taken ? taken_text_ : not_taken_text_;
      auto it = cache.find(&cond);
      if (it == cache.end())
        it = cache.emplace(&cond, cond_trace_line(opts_.cond_marker, cond, taken) + "\n").first;
      out_ += it->second;
    }
    ++frame().path_len;
  }

  void log_stmt(const Stmt& s) {
    if (!frame().counting || !full_trace())
      return;
    auto it = stmt_text_.find(&s);
    if (it == stmt_text_.end())
      it = stmt_text_.emplace(&s, print_simple_stmt(s) + ";\n").first;
    out_ += it->second;
  }

  void summary() {
    if (!frame().counting)
      return;
    if (frames_.size() == 1) {
      entry_done_ = true;
      entry_mems_ = frame().mems;
      entry_path_len_ = frame().path_len;
    }
    if (!emulate())
      return;
    out_ += "Total path length: " + std::to_string(frame().path_len) + "\n";
    out_ += "Total memory accesses: " + std::to_string(frame().mems) + "\n";
  }

  Slot* lookup(const std::string& name) {
    auto& scopes = frame().scopes;
    for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
      auto found = it->find(name);
      if (found != it->end())
        return &found->second;
    }
    fail(Errc::UnresolvedName, "'" + name + "' is not declared");
  }

  std::int64_t& element(const Expr& e, std::int64_t idx) {
    Slot* s = lookup(e.name);
    if (!s->array)
      fail(Errc::InvalidInput, "'" + e.name + "' is not an array");
    if (idx < 0 || idx >= static_cast<std::int64_t>(s->array->size()))
      fail(Errc::IndexOutOfBounds, "index " + std::to_string(idx) + " out of bounds for '" + e.name + "' of length " +
                                       std::to_string(s->array->size()));
    return (*s->array)[static_cast<std::size_t>(idx)];
  }

  std::int64_t call(const FunctionDef& f, std::vector<Slot> args) {
    if (frames_.size() > 10000)
      fail(Errc::StepLimitExceeded, "call depth limit exceeded in '" + f.name + "'");
    Frame fr;
    fr.fn = &f;
    fr.counting = std::find(targets_.begin(), targets_.end(), &f) != targets_.end();
    fr.scopes.emplace_back();
    for (std::size_t i = 0; i < args.size(); ++i)
      fr.scopes.back()[f.params[i].name] = std::move(args[i]);
    frames_.push_back(std::move(fr));
    if (frame().counting && emulate())
      out_ += "Path:\n";
    Flow flow = block(*f.body);
    if (flow == Flow::Normal)
      summary();
    std::int64_t ret = frame().ret;
    frames_.pop_back();
    return ret;
  }

  std::int64_t binary(BinOp op, std::int64_t a, std::int64_t b) {
    switch (op) {
      case BinOp::Add: return wrap_add(a, b);
      case BinOp::Sub: return wrap_sub(a, b);
      case BinOp::Mul: return wrap_mul(a, b);
      case BinOp::Div:
      case BinOp::Mod:
        if (b == 0)
          fail(Errc::DivisionByZero, op == BinOp::Div ? "division by zero" : "modulo by zero");
        if (a == std::numeric_limits<std::int64_t>::min() && b == -1)
          return op == BinOp::Div ? a : 0;
        return op == BinOp::Div ? a / b : a % b;
      case BinOp::Lt: return a < b;
      case BinOp::Le: return a <= b;
      case BinOp::Gt: return a > b;
      case BinOp::Ge: return a >= b;
      case BinOp::Eq: return a == b;
      case BinOp::Ne: return a != b;
      case BinOp::And:
      case BinOp::Or: break;
    }
    return 0;
  }

  std::int64_t eval(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::IntLit: return e.value;
      case Expr::Kind::StrLit: fail(Errc::UnsupportedConstruct, "string literal used as a value");
      case Expr::Kind::Var: {
        Slot* s = lookup(e.name);
        if (s->array)
          fail(Errc::InvalidInput, "array '" + e.name + "' used as a value");
        return s->value;
      }
      case Expr::Kind::Index: {
        std::int64_t idx = eval(e.index());
        std::int64_t v = element(e, idx);
        charge(1);
        return v;
      }
      case Expr::Kind::Binary: {
        if (e.bop == BinOp::And)
          return eval(e.lhs()) != 0 && eval(e.rhs()) != 0;
        if (e.bop == BinOp::Or)
          return eval(e.lhs()) != 0 || eval(e.rhs()) != 0;
        std::int64_t a = eval(e.lhs());
        std::int64_t b = eval(e.rhs());
        return binary(e.bop, a, b);
      }
      case Expr::Kind::Unary: {
        std::int64_t v = eval(e.operand());
        return e.uop == UnOp::Neg ? wrap_sub(0, v) : v == 0;
      }
      case Expr::Kind::Call: return call_expr(e);
    }
    return 0;
  }

  std::int64_t call_expr(const Expr& e) {
    if (is_extern_function(e.name))
      return call_extern(e);
    const FunctionDef* f = ast_.find(e.name);
    if (!f)
      fail(Errc::UnresolvedName, "function '" + e.name + "' is not defined");
    std::vector<Slot> args;
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      const Expr& a = *e.args[i];
      Slot s;
      if (i < f->params.size() && f->params[i].is_array) {
        if (a.kind != Expr::Kind::Var)
          fail(Errc::InvalidInput, "argument " + std::to_string(i + 1) + " of '" + e.name + "' must be an array");
        s.array = lookup(a.name)->array;
        if (!s.array)
          fail(Errc::InvalidInput, "'" + a.name + "' is not an array");
      } else {
        s.value = eval(a);
      }
      args.push_back(std::move(s));
    }
    return call(*f, std::move(args));
  }

  std::int64_t call_extern(const Expr& e) {
    if (e.name == "putchar") {
      std::int64_t c = eval(*e.args.at(0));
      out_ += static_cast<char>(c);
      return static_cast<unsigned char>(c);
    }
    if (e.name == "puts") {
      const Expr& s = *e.args.at(0);
      if (s.kind != Expr::Kind::StrLit)
        fail(Errc::UnsupportedConstruct, "puts expects a string literal");
      out_ += s.name + "\n";
      return 1;
    }
    // printf
    const Expr& fmt_e = *e.args.at(0);
    if (fmt_e.kind != Expr::Kind::StrLit)
      fail(Errc::UnsupportedConstruct, "printf expects a string literal format");
    const std::string& fmt = fmt_e.name;
    std::size_t next = 1;
    std::string text;
    for (std::size_t i = 0; i < fmt.size(); ++i) {
      if (fmt[i] != '%') {
        text += fmt[i];
        continue;
      }
      std::size_t start = i++;
      while (i < fmt.size() && std::string_view("-+ #0").find(fmt[i]) != std::string_view::npos)
        ++i;
      while (i < fmt.size() && std::isdigit(static_cast<unsigned char>(fmt[i])))
        ++i;
      if (i < fmt.size() && fmt[i] == '.') {
        ++i;
        while (i < fmt.size() && std::isdigit(static_cast<unsigned char>(fmt[i])))
          ++i;
      }
      std::string flags = fmt.substr(start, i - start);
      while (i < fmt.size() && (fmt[i] == 'l' || fmt[i] == 'h'))
        ++i;
      if (i >= fmt.size())
        fail(Errc::UnsupportedConstruct, "incomplete printf conversion");
      char conv = fmt[i];
      if (conv == '%') {
        text += '%';
        continue;
      }
      if (next >= e.args.size())
        fail(Errc::InvalidInput, "printf has fewer arguments than conversions");
      const Expr& arg = *e.args[next++];
      char buf[512];
      if (conv == 's') {
        if (arg.kind != Expr::Kind::StrLit)
          fail(Errc::UnsupportedConstruct, "%s expects a string literal");
        std::snprintf(buf, sizeof buf, (flags + "s").c_str(), arg.name.c_str());
      } else if (conv == 'c') {
        std::snprintf(buf, sizeof buf, (flags + "c").c_str(), static_cast<int>(eval(arg)));
      } else if (std::string_view("diuxXo").find(conv) != std::string_view::npos) {
        std::snprintf(buf, sizeof buf, (flags + "ll" + conv).c_str(), static_cast<long long>(eval(arg)));
      } else {
        fail(Errc::UnsupportedConstruct, std::string("printf conversion '%") + conv + "' is not supported");
      }
      text += buf;
    }
    for (; next < e.args.size(); ++next)
      if (e.args[next]->kind != Expr::Kind::StrLit)
        eval(*e.args[next]);
    out_ += text;
    return static_cast<std::int64_t>(text.size());
  }

  Flow block(const Stmt& b) {
    frame().scopes.emplace_back();
    Flow flow = Flow::Normal;
    for (const auto& s : b.body) {
      flow = exec(*s);
      if (flow == Flow::Return)
        break;
    }
    frame().scopes.pop_back();
    return flow;
  }

  void declare(const Stmt& s) {
    for (const auto& d : s.decls) {
      Slot slot;
      if (d.is_array) {
        std::int64_t len = d.size ? eval(*d.size) : static_cast<std::int64_t>(d.init_list.size());
        if (len < 0 || len > (std::int64_t{1} << 28))
          fail(Errc::IndexOutOfBounds, "invalid length " + std::to_string(len) + " for array '" + d.name + "'");
        if (static_cast<std::int64_t>(d.init_list.size()) > len)
          fail(Errc::IndexOutOfBounds, "too many initializers for array '" + d.name + "'");
        slot.array = std::make_shared<std::vector<std::int64_t>>(static_cast<std::size_t>(len), 0);
        for (std::size_t k = 0; k < d.init_list.size(); ++k)
          (*slot.array)[k] = eval(*d.init_list[k]);
      } else if (d.init) {
        slot.value = eval(*d.init);
      }
      frame().scopes.back()[d.name] = std::move(slot);
    }
  }

  void assign(const Stmt& s) {
    const Expr& t = *s.target;
    if (s.kind == Stmt::Kind::Assign) {
      if (t.kind == Expr::Kind::Index) {
        std::int64_t idx = eval(t.index());
        std::int64_t v = eval(*s.value);
        element(t, idx) = v;
        charge(1);
      } else {
        std::int64_t v = eval(*s.value);
        lookup(t.name)->value = v;
      }
      return;
    }
    std::int64_t* place;
    if (t.kind == Expr::Kind::Index) {
      std::int64_t idx = eval(t.index());
      element(t, idx);   // bounds check before the value side runs
      std::int64_t rhs = s.value ? eval(*s.value) : 1;
      place = &element(t, idx);
      charge(2);
      *place = combine(s.aop, *place, rhs);
    } else {
      std::int64_t rhs = s.value ? eval(*s.value) : 1;
      place = &lookup(t.name)->value;
      *place = combine(s.aop, *place, rhs);
    }
  }

  std::int64_t combine(AssignOp op, std::int64_t cur, std::int64_t rhs) {
    switch (op) {
      case AssignOp::Add:
      case AssignOp::Inc: return wrap_add(cur, rhs);
      case AssignOp::Sub:
      case AssignOp::Dec: return wrap_sub(cur, rhs);
      case AssignOp::Mul: return wrap_mul(cur, rhs);
      case AssignOp::Div: return binary(BinOp::Div, cur, rhs);
      case AssignOp::Mod: return binary(BinOp::Mod, cur, rhs);
    }
    return cur;
  }

  // For headers are bookkeeping; the instrumenter has nowhere to log them.
  void simple(const Stmt& s, bool logged = true) {
    step();
    switch (s.kind) {
      case Stmt::Kind::Decl: declare(s); break;
      case Stmt::Kind::Assign:
      case Stmt::Kind::CompoundAssign:
        assign(s);
        if (logged)
          log_stmt(s);
        break;
      case Stmt::Kind::ExprStmt: eval(*s.value); break;
      default: break;
    }
  }

  bool test(const Expr& cond) { return eval(cond) != 0; }

  Flow exec(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::Decl:
      case Stmt::Kind::Assign:
      case Stmt::Kind::CompoundAssign:
      case Stmt::Kind::ExprStmt:
        simple(s);
        return Flow::Normal;
      case Stmt::Kind::Block: return block(s);
      case Stmt::Kind::Return:
        step();
        frame().ret = s.value ? eval(*s.value) : 0;
        summary();
        return Flow::Return;
      case Stmt::Kind::If: {
        step();
        const Stmt* cur = &s;
        for (;;) {
          if (test(*cur->cond)) {
            branch(*cur->cond, true);
            return block(*cur->then_branch);
          }
          const Stmt* els = cur->else_branch.get();
          if (!els)
            return Flow::Normal;
          branch(*cur->cond, false);
          if (els->body.size() == 1 && els->body[0]->kind == Stmt::Kind::If) {
            // Same shape the instrumenter folds into `else if`.
            cur = els->body[0].get();
            step();
            continue;
          }
          return block(*els);
        }
      }
      case Stmt::Kind::While:
        step();
        for (;;) {
          step();
          if (!test(*s.cond))
            return Flow::Normal;
          branch(*s.cond, true);
          if (block(*s.then_branch) == Flow::Return)
            return Flow::Return;
        }
      case Stmt::Kind::For: {
        step();
        frame().scopes.emplace_back();
        static const ExprPtr always = make_int(1);
        Flow flow = Flow::Normal;
        if (s.init)
          simple(*s.init, false);
        for (;;) {
          step();
          if (s.cond && !test(*s.cond))
            break;
          branch(s.cond ? *s.cond : *always, true);
          if (block(*s.then_branch) == Flow::Return) {
            flow = Flow::Return;
            break;
          }
          if (s.step)
            simple(*s.step, false);
        }
        frame().scopes.pop_back();
        return flow;
      }
    }
    return Flow::Normal;
  }
};

std::int64_t eval_size(const Expr& e, const std::map<std::string, std::int64_t>& env) {
  switch (e.kind) {
    case Expr::Kind::IntLit: return e.value;
    case Expr::Kind::Var: {
      auto it = env.find(e.name);
      if (it == env.end())
        throw Error(Errc::InvalidInput, "array size refers to '" + e.name + "', which is not a scalar parameter");
      return it->second;
    }
    case Expr::Kind::Unary: {
      std::int64_t v = eval_size(e.operand(), env);
      return e.uop == UnOp::Neg ? -v : v == 0;
    }
    case Expr::Kind::Binary: {
      std::int64_t a = eval_size(e.lhs(), env);
      std::int64_t b = eval_size(e.rhs(), env);
      switch (e.bop) {
        case BinOp::Add: return a + b;
        case BinOp::Sub: return a - b;
        case BinOp::Mul: return a * b;
        case BinOp::Div:
        case BinOp::Mod:
          if (b == 0)
            throw Error(Errc::DivisionByZero, "array size divides by zero");
          return e.bop == BinOp::Div ? a / b : a % b;
        default: break;
      }
      break;
    }
    default: break;
  }
  throw Error(Errc::InvalidInput, "unsupported array size expression '" + print_expr(e) + "'");
}

} // namespace

BoundInput bind_input(const FunctionDef& f, const std::vector<std::int64_t>& scalars,
                      const std::map<std::string, std::string>& arrays) {
  std::size_t n_scalars = 0;
  for (const auto& p : f.params)
    if (!p.is_array)
      ++n_scalars;
  if (scalars.size() != n_scalars)
    throw Error(Errc::InvalidInput, "function '" + f.name + "' takes " + std::to_string(n_scalars) +
                                        " scalar arguments, got " + std::to_string(scalars.size()));
  for (const auto& [name, spec] : arrays) {
    auto it = std::find_if(f.params.begin(), f.params.end(), [&](const Param& p) { return p.name == name; });
    if (it == f.params.end() || !it->is_array)
      throw Error(Errc::InvalidInput, "'" + name + "' is not an array parameter of '" + f.name + "'");
  }
  std::map<std::string, std::int64_t> env;
  std::size_t k = 0;
  for (const auto& p : f.params)
    if (!p.is_array)
      env[p.name] = scalars[k++];

  BoundInput in;
  k = 0;
  for (const auto& p : f.params) {
    ArgValue a;
    std::string text;
    if (p.is_array) {
      auto it = arrays.find(p.name);
      if (it == arrays.end())
        throw Error(Errc::InvalidInput, "array parameter '" + p.name + "' needs a generator (--array " + p.name + "=...)");
      ArrayGen gen = parse_array_gen(it->second);
      std::optional<std::int64_t> len;
      if (p.size)
        len = eval_size(*p.size, env);
      a.is_array = true;
      a.array = generate(gen, len);
      text = it->second;
    } else {
      a.scalar = scalars[k++];
      text = std::to_string(a.scalar);
    }
    if (!in.description.empty())
      in.description += ';';
    in.description += p.name + "=" + text;
    in.argv.push_back(text);
    in.args.push_back(std::move(a));
  }
  return in;
}

InterpResult interpret(const Ast& ast, std::string_view fn, const std::vector<ArgValue>& args,
                       const InterpOptions& opts) {
  Machine m(ast, opts);
  return m.run(fn, args);
}

} // namespace memsest
