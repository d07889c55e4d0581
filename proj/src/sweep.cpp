#include "memsest/sweep.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>

#include "memsest/csv.hpp"
#include "memsest/error.hpp"
#include "memsest/instrument.hpp"
#include "memsest/interp.hpp"
#include "memsest/native.hpp"
#include "memsest/parser.hpp"
#include "memsest/printer.hpp"

namespace memsest {

namespace {

[[noreturn]] void bad(std::size_t line, const std::string& msg) {
  throw Error(Errc::InvalidInput, "sweep config line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"')
      quoted = !quoted;
    else if (s[i] == '#' && !quoted)
      return s.substr(0, i);
  }
  return s;
}

// A scalar value or a list of them; strings lose their quotes.
std::vector<std::string> parse_value(const std::string& raw, std::size_t line) {
  std::string v = trim(raw);
  if (v.empty())
    bad(line, "missing value");
  auto item = [&](std::string t) {
    t = trim(t);
    if (t.size() >= 2 && t.front() == '"' && t.back() == '"')
      return t.substr(1, t.size() - 2);
    if (t.empty() || t.find('"') != std::string::npos)
      bad(line, "malformed value '" + t + "'");
    return t;
  };
  if (v.front() != '[')
    return {item(v)};
  if (v.back() != ']')
    bad(line, "unterminated list");
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    char c = v[i];
    if (c == '"')
      quoted = !quoted;
    if (c == ',' && !quoted) {
      out.push_back(item(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty())
    out.push_back(item(cur));
  return out;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0)))
    --q;
  return q;
}

std::int64_t eval_grid(const Expr& e, const std::map<std::string, std::int64_t>& env) {
  switch (e.kind) {
    case Expr::Kind::IntLit: return e.value;
    case Expr::Kind::Var: {
      auto it = env.find(e.name);
      if (it == env.end())
        throw Error(Errc::InvalidInput, "grid expression uses '" + e.name + "' before it is bound");
      return it->second;
    }
    case Expr::Kind::Unary: {
      std::int64_t v = eval_grid(e.operand(), env);
      return e.uop == UnOp::Neg ? -v : v == 0;
    }
    case Expr::Kind::Binary: {
      std::int64_t a = eval_grid(e.lhs(), env), b = eval_grid(e.rhs(), env);
      switch (e.bop) {
        case BinOp::Add: return a + b;
        case BinOp::Sub: return a - b;
        case BinOp::Mul: return a * b;
        case BinOp::Div:
        case BinOp::Mod:
          if (b == 0)
            throw Error(Errc::InvalidInput, "grid expression divides by zero");
          return e.bop == BinOp::Div ? floor_div(a, b) : a - floor_div(a, b) * b;
        default: break;
      }
      break;
    }
    default: break;
  }
  throw Error(Errc::InvalidInput, "unsupported grid expression '" + print_expr(e) + "'");
}

struct Cell {
  const ProgramSpec* program = nullptr;
  const Ast* ast = nullptr;
  std::vector<std::int64_t> scalars;
  std::map<std::string, std::string> arrays;
  std::int64_t n = 0;
};

void expand(const ProgramSpec& ps, const FunctionDef& f, std::size_t k, std::map<std::string, std::int64_t>& env,
            std::map<std::string, std::string>& arrays, const Ast& ast, std::vector<Cell>& cells) {
  if (k == f.params.size()) {
    Cell c;
    c.program = &ps;
    c.ast = &ast;
    for (const auto& p : f.params)
      if (!p.is_array)
        c.scalars.push_back(env.at(p.name));
    c.arrays = arrays;
    std::string size = ps.size_param;
    if (size.empty())
      for (const auto& p : f.params)
        if (!p.is_array) {
          size = p.name;
          break;
        }
    c.n = size.empty() ? 0 : env.at(size);
    cells.push_back(std::move(c));
    return;
  }
  const Param& p = f.params[k];
  auto it = std::find_if(ps.grid.begin(), ps.grid.end(), [&](const auto& g) { return g.first == p.name; });
  if (it == ps.grid.end())
    throw Error(Errc::InvalidInput, "program '" + ps.name + "' has no values for parameter '" + p.name + "'");
  std::vector<std::string> values = it->second;
  if (!p.is_array) {
    // Fractions like n/2 can coincide for small n; keep each value once.
    std::vector<std::int64_t> seen;
    for (const auto& text : values) {
      std::int64_t v = eval_grid(*parse_expression(text), env);
      if (std::find(seen.begin(), seen.end(), v) != seen.end())
        continue;
      seen.push_back(v);
      env[p.name] = v;
      expand(ps, f, k + 1, env, arrays, ast, cells);
    }
    env.erase(p.name);
  } else {
    for (const auto& gen : values) {
      arrays[p.name] = gen;
      expand(ps, f, k + 1, env, arrays, ast, cells);
    }
    arrays.erase(p.name);
  }
}

std::string cell_name(const Cell& c, const std::string& input) { return c.program->name + " [" + input + "]"; }

} // namespace

SweepSpec parse_sweep_spec(const std::string& text, const std::string& base_dir) {
  SweepSpec spec;
  ProgramSpec* cur = nullptr;
  std::size_t no = 0;
  std::size_t pos = 0;
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? p : (std::filesystem::path(base_dir) / path).lexically_normal().string();
  };
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos)
      nl = text.size();
    std::string line = trim(strip_comment(text.substr(pos, nl - pos)));
    pos = nl + 1;
    ++no;
    if (line.empty())
      continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.rfind("[program.", 0) != 0)
        bad(no, "expected a [program.<name>] section");
      std::string name = line.substr(9, line.size() - 10);
      if (name.empty())
        bad(no, "empty program name");
      for (const auto& p : spec.programs)
        if (p.name == name)
          bad(no, "duplicate program '" + name + "'");
      spec.programs.push_back(ProgramSpec{});
      cur = &spec.programs.back();
      cur->name = name;
      cur->fn = name;
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      bad(no, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::vector<std::string> values = parse_value(line.substr(eq + 1), no);
    auto single = [&]() {
      if (values.size() != 1)
        bad(no, "'" + key + "' takes a single value");
      return values[0];
    };
    auto integer = [&]() {
      std::string v = single();
      try {
        std::size_t used = 0;
        long long x = std::stoll(v, &used);
        if (used != v.size())
          throw std::invalid_argument(v);
        return static_cast<std::int64_t>(x);
      } catch (const std::logic_error&) {
        bad(no, "'" + key + "' must be an integer");
      }
    };
    if (!cur) {
      if (key == "repeat") {
        spec.repeat = static_cast<int>(integer());
        if (spec.repeat < 1)
          bad(no, "repeat must be at least 1");
      } else if (key == "executor") {
        std::string v = single();
        if (v == "interpreter")
          spec.executor = Executor::Interpreter;
        else if (v == "native")
          spec.executor = Executor::Native;
        else
          bad(no, "executor must be \"interpreter\" or \"native\"");
      } else if (key == "cc") {
        spec.cc = single();
      } else if (key == "output") {
        spec.output = resolve(single());
      } else if (key == "runs_output") {
        spec.runs_output = resolve(single());
      } else if (key == "max_steps") {
        spec.max_steps = integer();
      } else if (key == "parallel_native") {
        std::string v = single();
        if (v != "true" && v != "false")
          bad(no, "parallel_native must be true or false");
        spec.parallel_native = v == "true";
      } else {
        bad(no, "unknown key '" + key + "'");
      }
      continue;
    }
    if (key == "file") {
      cur->file = resolve(single());
    } else if (key == "fn") {
      cur->fn = single();
    } else if (key == "size") {
      cur->size_param = single();
    } else {
      for (const auto& g : cur->grid)
        if (g.first == key)
          bad(no, "duplicate parameter '" + key + "'");
      cur->grid.emplace_back(key, values);
    }
  }
  for (const auto& p : spec.programs)
    if (p.file.empty())
      throw Error(Errc::InvalidInput, "program '" + p.name + "' has no file");
  return spec;
}

namespace {

std::vector<AnalysisRow> run_sweep(const SweepSpec& spec, std::vector<RunRecord>* runs, bool allow_parallel) {
  std::vector<Ast> asts;
  asts.reserve(spec.programs.size());
  for (const auto& p : spec.programs)
    asts.push_back(parse(read_file(p.file)));

  std::vector<Cell> cells;
  for (std::size_t i = 0; i < spec.programs.size(); ++i) {
    const auto& ps = spec.programs[i];
    const FunctionDef* f = asts[i].find(ps.fn);
    if (!f)
      throw Error(Errc::TargetNotFound, "program '" + ps.name + "': function '" + ps.fn + "' is not defined");
    for (const auto& g : ps.grid)
      if (std::none_of(f->params.begin(), f->params.end(), [&](const Param& p) { return p.name == g.first; }))
        throw Error(Errc::InvalidInput, "program '" + ps.name + "': '" + g.first + "' is not a parameter of " + ps.fn);
    std::map<std::string, std::int64_t> env;
    std::map<std::string, std::string> arrays;
    expand(ps, *f, 0, env, arrays, asts[i], cells);
  }

  std::vector<AnalysisRow> rows(cells.size());
  std::vector<std::vector<RunRecord>> records(cells.size());
  std::vector<std::optional<Error>> errors(cells.size());

  auto run_cell = [&](std::size_t i) {
    const Cell& c = cells[i];
    const FunctionDef& f = *c.ast->find(c.program->fn);
    std::string input;
    try {
      BoundInput in = bind_input(f, c.scalars, c.arrays);
      input = in.description;
      AnalysisRow row;
      row.program = c.program->name;
      row.input = in.description;
      row.n = c.n;
      if (spec.executor == Executor::Interpreter) {
        InterpOptions opts;
        opts.max_steps = spec.max_steps;
        opts.trace = TraceMode::CountsOnly;
        RunRecord r = interpret(*c.ast, c.program->fn, in.args, opts).record;
        r.program = row.program;
        r.input = row.input;
        row.path_len = r.path_len;
        row.mems = r.mems;
        row.steps = r.steps;
        records[i].push_back(std::move(r));
      } else {
        InstrumentConfig cfg;
        cfg.trace = TraceMode::CountsOnly;
        cfg.harness_entry = c.program->fn;
        NativeOptions opts;
        opts.compile_cmd = spec.cc;
        opts.repeat = spec.repeat;
        opts.program = row.program;
        opts.input = row.input;
        auto rs = run_native(instrument(*c.ast, cfg), in.argv, opts);
        double sum = 0;
        for (const auto& r : rs)
          sum += r.time_ms.value_or(0);
        row.path_len = rs.front().path_len;
        row.mems = rs.front().mems;
        row.time_ms = sum / static_cast<double>(rs.size());
        records[i] = std::move(rs);
      }
      row.bucket = bucket_label(row.mems);
      rows[i] = std::move(row);
    } catch (const Error& e) {
      std::string msg = e.what();
      msg = msg.substr(msg.find(": ") + 2);
      errors[i] = Error(e.code(), "cell " + cell_name(c, input.empty() ? "?" : input) + ": " + msg);
    }
  };

  bool parallel = allow_parallel && (spec.executor == Executor::Interpreter || spec.parallel_native);
  if (parallel) {
    const auto count = static_cast<std::int64_t>(cells.size());
#ifdef MEMSEST_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (std::int64_t i = 0; i < count; ++i)
      run_cell(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < cells.size(); ++i)
      run_cell(i);
  }
  for (auto& e : errors)
    if (e)
      throw *e;
  if (runs)
    for (auto& rs : records)
      for (auto& r : rs)
        runs->push_back(std::move(r));
  return rows;
}

} // namespace

std::vector<AnalysisRow> sweep(const SweepSpec& spec, std::vector<RunRecord>* runs) {
  return run_sweep(spec, runs, true);
}

std::vector<AnalysisRow> sweep_serial(const SweepSpec& spec, std::vector<RunRecord>* runs) {
  return run_sweep(spec, runs, false);
}

} // namespace memsest
