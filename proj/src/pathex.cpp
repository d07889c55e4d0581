#include "memsest/pathex.hpp"

#include <unordered_map>

#include "memsest/printer.hpp"

namespace memsest {

namespace {

struct SymArray {
  Sym size;
  std::map<std::int64_t, Sym> cells;
  Sym fill;   // value of cells never written
};

struct SymSlot {
  Sym value;
  std::shared_ptr<SymArray> array;
};

struct SymFrame {
  std::vector<std::unordered_map<std::string, SymSlot>> scopes;
  bool counting = false;
  std::int64_t mems = 0;
  std::int64_t path_len = 0;
  Sym ret;
};

enum class Flow { Normal, Return };

// Thrown to abandon the current path when a loop unrolls past the limit.
struct Abandon {};

// Site ids for every expression that can decide a branch: loop and if
// conditions (a for without condition uses the statement) and operands of
// logical operators, numbered in source order.
class Sites {
public:
  explicit Sites(const Ast& ast) {
    for (const auto& f : ast.functions)
      stmt(*f.body);
  }

  int of(const void* key) const { return ids_.at(key); }
  const std::map<int, std::string>& texts() const { return texts_; }

private:
  std::unordered_map<const void*, int> ids_;
  std::map<int, std::string> texts_;

  void add(const void* key, std::string text) {
    if (ids_.count(key))
      return;
    int id = static_cast<int>(ids_.size());
    ids_[key] = id;
    texts_[id] = std::move(text);
  }

  void expr(const Expr& e, bool root) {
    if (root)
      add(&e, print_expr(e));
    bool logical = (e.kind == Expr::Kind::Binary && is_logical(e.bop)) ||
                   (e.kind == Expr::Kind::Unary && e.uop == UnOp::Not);
    for (const auto& a : e.args)
      expr(*a, logical);
  }

  void stmt(const Stmt& s) {
    static const ExprPtr always = make_int(1);
    for (const auto& d : s.decls) {
      if (d.size)
        expr(*d.size, false);
      if (d.init)
        expr(*d.init, false);
      for (const auto& e : d.init_list)
        expr(*e, false);
    }
    if (s.kind == Stmt::Kind::For && s.init)
      stmt(*s.init);
    if (s.cond)
      expr(*s.cond, true);
    else if (s.kind == Stmt::Kind::For)
      add(&s, "1");
    for (const auto* e : {&s.target, &s.value})
      if (*e)
        expr(**e, false);
    if (s.step)
      stmt(*s.step);
    for (const auto* c : {&s.then_branch, &s.else_branch})
      if (*c)
        stmt(**c);
    for (const auto& c : s.body)
      stmt(*c);
  }
};

class Explorer {
public:
  Explorer(const Ast& ast, const Sites& sites, const Domains& domains, const PathLimits& limits,
           const std::vector<bool>& prefix, std::vector<std::vector<bool>>& pending)
      : ast_(ast), sites_(sites), domains_(domains), limits_(limits), prefix_(prefix), pending_(pending) {}

  PathTrace run(const FunctionDef& f, const std::vector<Constraint>& assumptions, std::uint64_t assumed_count) {
    pc_ = assumptions;
    pc_count_ = assumed_count;
    SymFrame fr;
    fr.counting = true;
    fr.scopes.emplace_back();
    for (const auto& p : f.params) {
      SymSlot s;
      if (p.is_array) {
        auto arr = std::make_shared<SymArray>();
        arr->fill = sym_unknown();
        arr->size = p.size ? size_of_param(*p.size, fr) : sym_unknown();
        s.array = arr;
      } else {
        auto d = domains_.find(p.name);
        if (d != domains_.end() && d->second.lo == d->second.hi)
          s.value = sym_const(d->second.lo);
        else
          s.value = sym_input(p.name);
      }
      fr.scopes.back()[p.name] = std::move(s);
    }
    frames_.push_back(std::move(fr));
    block(*f.body);
    PathTrace t;
    t.decisions = std::move(decisions_);
    t.condition.constraints = std::move(pc_);
    t.path_len = frames_.front().path_len;
    t.pind_mems = frames_.front().mems;
    return t;
  }

private:
  const Ast& ast_;
  const Sites& sites_;
  const Domains& domains_;
  const PathLimits& limits_;
  const std::vector<bool>& prefix_;
  std::vector<std::vector<bool>>& pending_;

  std::vector<bool> choices_;
  std::vector<Constraint> pc_;
  std::uint64_t pc_count_ = 0;
  std::vector<Decision> decisions_;
  std::vector<SymFrame> frames_;
  std::int64_t steps_ = 0;
  bool top_forked_ = false;
  bool top_symbolic_ = false;
  std::int64_t symbolic_atoms_ = 0;

  SymFrame& frame() { return frames_.back(); }

  Sym size_of_param(const Expr& e, SymFrame& fr) {
    switch (e.kind) {
      case Expr::Kind::IntLit: return sym_const(e.value);
      case Expr::Kind::Var: {
        auto it = fr.scopes.back().find(e.name);
        return it != fr.scopes.back().end() && it->second.value ? it->second.value : sym_unknown();
      }
      case Expr::Kind::Binary: return sym_binary(e.bop, size_of_param(e.lhs(), fr), size_of_param(e.rhs(), fr));
      case Expr::Kind::Unary: return sym_unary(e.uop, size_of_param(e.operand(), fr));
      default: return sym_unknown();
    }
  }

  std::uint64_t count(const std::vector<Constraint>& cs) {
    CountOptions opts;
    opts.budget = limits_.count_budget;
    return model_count(PathCondition{cs}, domains_, opts);
  }

  void step() {
    if (++steps_ > limits_.max_steps)
      throw Error(Errc::StepLimitExceeded, "path exceeds " + std::to_string(limits_.max_steps) + " steps");
  }

  void charge(std::int64_t k) {
    if (frame().counting)
      frame().mems += k;
  }

  // Splits on `c` when both sides are feasible under the current condition.
  bool fork(const Constraint& c, bool& forked) {
    std::vector<Constraint> with = pc_;
    with.push_back(c);
    std::uint64_t n_true = count(with);
    std::uint64_t n_false;
    Sym diff = sym_binary(BinOp::Sub, c.lhs, c.rhs);
    if (diff->affine) {
      n_false = pc_count_ - n_true;
    } else {
      // Division by zero makes both c and its negation false at a point.
      with.back().rel = negate(c.rel);
      n_false = count(with);
    }
    forked = false;
    if (n_true == 0)
      return false;
    if (n_false == 0)
      return true;
    forked = true;
    bool choice = true;
    std::size_t depth = choices_.size();
    if (depth < prefix_.size()) {
      choice = prefix_[depth];
    } else {
      std::vector<bool> alt = choices_;
      alt.push_back(false);
      pending_.push_back(std::move(alt));
    }
    choices_.push_back(choice);
    Constraint taken = c;
    if (!choice)
      taken.rel = negate(c.rel);
    pc_.push_back(taken);
    pc_count_ = choice ? n_true : n_false;
    return choice;
  }

  bool atom(const Expr& e, bool top) {
    Constraint c;
    if (e.kind == Expr::Kind::Binary && rel_from_binop(e.bop)) {
      Sym l = eval(e.lhs());
      Sym r = eval(e.rhs());
      c = Constraint{l, *rel_from_binop(e.bop), r};
    } else {
      c = Constraint{eval(e), Rel::Ne, sym_const(0)};
    }
    if (c.lhs->tainted || c.rhs->tainted)
      throw Error(Errc::DataDependentBranch, "branch `" + print_expr(e) + "` depends on array contents");
    bool forked = false;
    bool result;
    bool symbolic = !(is_const(c.lhs) && is_const(c.rhs));
    if (!symbolic)
      result = rel_holds(c.rel, c.lhs->value, c.rhs->value);
    else
      result = fork(c, forked);
    if (symbolic)
      ++symbolic_atoms_;
    if (top) {
      top_forked_ = forked;
    } else if (forked) {
      decisions_.push_back({sites_.of(&e), result, false});
    }
    return result;
  }

  bool truth(const Expr& e, bool top) {
    if (e.kind == Expr::Kind::Binary && e.bop == BinOp::And) {
      return truth(e.lhs(), false) && truth(e.rhs(), false);
    }
    if (e.kind == Expr::Kind::Binary && e.bop == BinOp::Or) {
      return truth(e.lhs(), false) || truth(e.rhs(), false);
    }
    if (e.kind == Expr::Kind::Unary && e.uop == UnOp::Not)
      return !truth(e.operand(), top);
    return atom(e, top);
  }

  // Evaluates a branch condition; afterwards top_forked_ tells whether the
  // whole condition was a single forked atom and top_symbolic_ whether any
  // input-dependent test was involved.
  bool test(const Expr& cond) {
    std::int64_t before = symbolic_atoms_;
    top_forked_ = false;
    bool t = truth(cond, true);
    top_symbolic_ = symbolic_atoms_ != before;
    return t;
  }

  void note(const void* site_key, bool taken, bool logged) {
    if (logged && frame().counting) {
      decisions_.push_back({sites_.of(site_key), taken, true});
      ++frame().path_len;
    } else if (top_forked_) {
      decisions_.push_back({sites_.of(site_key), taken, false});
    }
  }

  SymSlot& lookup(const std::string& name) {
    auto& scopes = frame().scopes;
    for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
      auto found = it->find(name);
      if (found != it->end())
        return found->second;
    }
    throw Error(Errc::UnresolvedName, "'" + name + "' is not declared");
  }

  void check_bounds(const SymArray& arr, const Sym& idx, const std::string& name) {
    auto i = const_value(idx);
    auto n = const_value(arr.size);
    if (i && n && (*i < 0 || *i >= *n))
      throw Error(Errc::IndexOutOfBounds, "index " + std::to_string(*i) + " out of bounds for '" + name +
                                              "' of length " + std::to_string(*n));
  }

  Sym read(const std::string& name, const Sym& idx) {
    auto& arr = *lookup(name).array;
    check_bounds(arr, idx, name);
    auto i = const_value(idx);
    if (!i)
      return sym_unknown();
    auto it = arr.cells.find(*i);
    return it != arr.cells.end() ? it->second : arr.fill;
  }

  void write(const std::string& name, const Sym& idx, const Sym& v) {
    auto& arr = *lookup(name).array;
    check_bounds(arr, idx, name);
    auto i = const_value(idx);
    if (!i) {
      arr.cells.clear();
      arr.fill = sym_unknown();
      return;
    }
    arr.cells[*i] = v;
  }

  Sym eval(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::IntLit: return sym_const(e.value);
      case Expr::Kind::StrLit: return sym_unknown();
      case Expr::Kind::Var: return lookup(e.name).value;
      case Expr::Kind::Index: {
        Sym idx = eval(e.index());
        Sym v = read(e.name, idx);
        charge(1);
        return v;
      }
      case Expr::Kind::Binary:
        if (is_logical(e.bop))
          return sym_const(truth(e, false) ? 1 : 0);
        {
          Sym a = eval(e.lhs());
          Sym b = eval(e.rhs());
          return sym_binary(e.bop, a, b);
        }
      case Expr::Kind::Unary: return sym_unary(e.uop, eval(e.operand()));
      case Expr::Kind::Call: return call(e);
    }
    return sym_unknown();
  }

  Sym call(const Expr& e) {
    if (is_extern_function(e.name)) {
      for (const auto& a : e.args)
        if (a->kind != Expr::Kind::StrLit)
          eval(*a);
      return sym_unknown();
    }
    const FunctionDef* f = ast_.find(e.name);
    if (!f)
      throw Error(Errc::UnresolvedName, "function '" + e.name + "' is not defined");
    if (frames_.size() > 10000)
      throw Error(Errc::StepLimitExceeded, "call depth limit exceeded in '" + f->name + "'");
    SymFrame fr;
    fr.scopes.emplace_back();
    for (std::size_t i = 0; i < f->params.size() && i < e.args.size(); ++i) {
      SymSlot s;
      if (f->params[i].is_array)
        s.array = lookup(e.args[i]->name).array;
      else
        s.value = eval(*e.args[i]);
      fr.scopes.back()[f->params[i].name] = std::move(s);
    }
    frames_.push_back(std::move(fr));
    block(*f->body);
    Sym ret = frame().ret ? frame().ret : sym_const(0);
    frames_.pop_back();
    return ret;
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
      SymSlot slot;
      if (d.is_array) {
        auto arr = std::make_shared<SymArray>();
        arr->size = d.size ? eval(*d.size) : sym_const(static_cast<std::int64_t>(d.init_list.size()));
        // Local arrays without an initializer hold indeterminate values.
        arr->fill = d.has_init_list ? sym_const(0) : sym_unknown();
        for (std::size_t k = 0; k < d.init_list.size(); ++k)
          arr->cells[static_cast<std::int64_t>(k)] = eval(*d.init_list[k]);
        slot.array = arr;
      } else {
        slot.value = d.init ? eval(*d.init) : sym_const(0);
      }
      frame().scopes.back()[d.name] = std::move(slot);
    }
  }

  Sym combine(AssignOp op, const Sym& cur, const Sym& rhs) {
    switch (op) {
      case AssignOp::Add:
      case AssignOp::Inc: return sym_binary(BinOp::Add, cur, rhs);
      case AssignOp::Sub:
      case AssignOp::Dec: return sym_binary(BinOp::Sub, cur, rhs);
      case AssignOp::Mul: return sym_binary(BinOp::Mul, cur, rhs);
      case AssignOp::Div: return sym_binary(BinOp::Div, cur, rhs);
      case AssignOp::Mod: return sym_binary(BinOp::Mod, cur, rhs);
    }
    return cur;
  }

  void simple(const Stmt& s) {
    step();
    switch (s.kind) {
      case Stmt::Kind::Decl: declare(s); break;
      case Stmt::Kind::Assign: {
        const Expr& t = *s.target;
        if (t.kind == Expr::Kind::Index) {
          Sym idx = eval(t.index());
          Sym v = eval(*s.value);
          write(t.name, idx, v);
          charge(1);
        } else {
          Sym v = eval(*s.value);
          lookup(t.name).value = v;
        }
        break;
      }
      case Stmt::Kind::CompoundAssign: {
        const Expr& t = *s.target;
        if (t.kind == Expr::Kind::Index) {
          Sym idx = eval(t.index());
          check_bounds(*lookup(t.name).array, idx, t.name);
          Sym rhs = s.value ? eval(*s.value) : sym_const(1);
          Sym cur = read(t.name, idx);
          write(t.name, idx, combine(s.aop, cur, rhs));
          charge(2);
        } else {
          Sym rhs = s.value ? eval(*s.value) : sym_const(1);
          SymSlot& slot = lookup(t.name);
          slot.value = combine(s.aop, slot.value, rhs);
        }
        break;
      }
      case Stmt::Kind::ExprStmt: eval(*s.value); break;
      default: break;
    }
  }

  void unrolled(std::int64_t& iterations) {
    if (top_symbolic_ && ++iterations > limits_.max_loop_unroll)
      throw Abandon{};
  }

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
        frame().ret = s.value ? eval(*s.value) : sym_const(0);
        return Flow::Return;
      case Stmt::Kind::If: {
        step();
        const Stmt* cur = &s;
        for (;;) {
          bool t = test(*cur->cond);
          const Stmt* els = cur->else_branch.get();
          if (t) {
            note(cur->cond.get(), true, true);
            return block(*cur->then_branch);
          }
          note(cur->cond.get(), false, els != nullptr);
          if (!els)
            return Flow::Normal;
          if (els->body.size() == 1 && els->body[0]->kind == Stmt::Kind::If) {
            cur = els->body[0].get();
            step();
            continue;
          }
          return block(*els);
        }
      }
      case Stmt::Kind::While: {
        step();
        std::int64_t iterations = 0;
        for (;;) {
          step();
          bool t = test(*s.cond);
          note(s.cond.get(), t, t);
          if (!t)
            return Flow::Normal;
          unrolled(iterations);
          if (block(*s.then_branch) == Flow::Return)
            return Flow::Return;
        }
      }
      case Stmt::Kind::For: {
        step();
        frame().scopes.emplace_back();
        Flow flow = Flow::Normal;
        std::int64_t iterations = 0;
        if (s.init)
          simple(*s.init);
        for (;;) {
          step();
          bool t = true;
          if (s.cond) {
            t = test(*s.cond);
          } else {
            top_forked_ = false;
            top_symbolic_ = false;
          }
          note(s.cond ? static_cast<const void*>(s.cond.get()) : &s, t, t);
          if (!t)
            break;
          unrolled(iterations);
          if (block(*s.then_branch) == Flow::Return) {
            flow = Flow::Return;
            break;
          }
          if (s.step)
            simple(*s.step);
        }
        frame().scopes.pop_back();
        return flow;
      }
    }
    return Flow::Normal;
  }
};

} // namespace

PathSet enumerate_paths(const Ast& ast, const std::string& fn, const Domains& domains, const PathLimits& limits,
                        const std::vector<Constraint>& assumptions) {
  const FunctionDef* f = ast.find(fn);
  if (!f)
    throw Error(Errc::TargetNotFound, "function '" + fn + "' is not defined");
  for (const auto& p : f->params)
    if (!p.is_array && !domains.count(p.name))
      throw Error(Errc::UnboundedDomain, "parameter '" + p.name + "' needs a domain (--domain " + p.name + "=lo..hi)");

  PathSet set;
  set.function = fn;
  set.domains = domains;
  set.assumptions = assumptions;
  Sites sites(ast);

  CountOptions opts;
  opts.budget = limits.count_budget;
  std::uint64_t assumed = model_count(PathCondition{assumptions}, domains, opts);
  std::vector<int> used;
  if (assumed > 0) {
    std::vector<std::vector<bool>> pending{{}};
    while (!pending.empty()) {
      if (set.paths.size() >= limits.max_paths) {
        set.truncated = Errc::PathLimitExceeded;
        break;
      }
      std::vector<bool> prefix = std::move(pending.back());
      pending.pop_back();
      Explorer ex(ast, sites, domains, limits, prefix, pending);
      try {
        set.paths.push_back(ex.run(*f, assumptions, assumed));
      } catch (const Abandon&) {
        set.truncated = Errc::UnrollLimitExceeded;
      }
    }
  }
  for (const auto& p : set.paths)
    for (const auto& d : p.decisions)
      set.sites[d.site] = sites.texts().at(d.site);
  return set;
}

std::vector<std::string> expected_trace(const PathSet& set, const PathTrace& t, char marker) {
  std::vector<std::string> out;
  for (const auto& d : t.decisions) {
    if (!d.logged)
      continue;
    const std::string& text = set.sites.at(d.site);
    out.push_back(d.taken ? std::string(1, marker) + "(" + text + ")"
                          : std::string(1, marker) + "(!(" + text + "))");
  }
  return out;
}

} // namespace memsest
