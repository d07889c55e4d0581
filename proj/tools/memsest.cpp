#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "memsest/countest.hpp"
#include "memsest/csv.hpp"
#include "memsest/error.hpp"
#include "memsest/instrument.hpp"
#include "memsest/interp.hpp"
#include "memsest/memscount.hpp"
#include "memsest/native.hpp"
#include "memsest/parser.hpp"
#include "memsest/paths_io.hpp"
#include "memsest/pathex.hpp"
#include "memsest/printer.hpp"
#include "memsest/report.hpp"
#include "memsest/stats.hpp"
#include "memsest/sweep.hpp"

using namespace memsest;

namespace {

constexpr int kUsage = 1;
constexpr int kAnalysis = 2;
constexpr int kExternal = 3;

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-")
    std::cout << text;
  else
    write_file(out, text);
}

Ast load(const std::string& file) {
  std::string src = read_file(file);
  try {
    return parse(src);
  } catch (ParseError& e) {
    for (const auto& d : e.diagnostics())
      std::cerr << format_diagnostic(d, file) << "\n";
    throw;
  }
}

Domains domains_of(const std::vector<std::string>& specs) {
  Domains d;
  for (const auto& s : specs) {
    auto [name, dom] = parse_domain(s);
    d[name] = dom;
  }
  return d;
}

// --args 10 5, --args 10,5 and --args "10 5" all mean (10, 5).
std::vector<std::int64_t> ints_of(const std::vector<std::string>& raw) {
  std::vector<std::int64_t> out;
  for (auto s : raw) {
    for (char& c : s)
      if (c == ',')
        c = ' ';
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) {
      try {
        std::size_t used = 0;
        long long v = std::stoll(tok, &used);
        if (used != tok.size())
          throw std::invalid_argument(tok);
        out.push_back(v);
      } catch (const std::logic_error&) {
        throw Error(Errc::InvalidInput, "argument '" + tok + "' is not an integer");
      }
    }
  }
  return out;
}

std::map<std::string, std::string> arrays_of(const std::vector<std::string>& specs) {
  std::map<std::string, std::string> out;
  for (const auto& s : specs) {
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Error(Errc::InvalidInput, "--array expects name=generator, got '" + s + "'");
    out[s.substr(0, eq)] = s.substr(eq + 1);
  }
  return out;
}

const FunctionDef& function_of(const Ast& ast, const std::string& fn) {
  const FunctionDef* f = ast.find(fn);
  if (!f)
    throw Error(Errc::TargetNotFound, "function '" + fn + "' is not defined");
  return *f;
}

std::string opt_time(const std::optional<double>& t) {
  if (!t)
    return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", *t);
  return buf;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"memsest: static performance estimation with mems (array-access counts)"};
  app.require_subcommand(1);

  // instrument
  std::string file, out, marker = "#", timer = "monotonic", trace = "full", harness;
  std::vector<std::string> fns;
  auto* instr = app.add_subcommand("instrument", "Insert path, mems and timing instrumentation");
  instr->add_option("file", file, "MiniC source")->required();
  instr->add_option("--marker", marker, "Condition marker")->check(CLI::IsMember({"#", "@"}));
  instr->add_option("--timer", timer, "Timer")->check(CLI::IsMember({"monotonic", "none"}));
  instr->add_option("--trace", trace, "Trace detail")->check(CLI::IsMember({"full", "counts"}));
  instr->add_option("--fn", fns, "Functions to instrument (default: all but main)");
  instr->add_option("--harness", harness, "Emit a main() that calls this function with argv values");
  instr->add_option("-o,--output", out, "Output file (default stdout)");

  auto* strip_cmd = app.add_subcommand("strip", "Remove instrumentation");
  strip_cmd->add_option("file", file, "Instrumented source")->required();
  strip_cmd->add_option("-o,--output", out, "Output file (default stdout)");

  auto* fmt = app.add_subcommand("fmt", "Pretty-print a MiniC source");
  fmt->add_option("file", file, "MiniC source")->required();
  fmt->add_option("-o,--output", out, "Output file (default stdout)");

  auto* mems = app.add_subcommand("mems", "Static mems per statement");
  mems->add_option("file", file, "MiniC source")->required();

  // paths
  std::string fn, paths_file, counts_file, assume;
  std::vector<std::string> domains;
  std::size_t max_paths = PathLimits{}.max_paths;
  std::int64_t unroll = PathLimits{}.max_loop_unroll;
  std::uint64_t budget = CountOptions{}.budget;
  auto* paths = app.add_subcommand("paths", "Enumerate feasible paths symbolically");
  paths->add_option("file", file, "MiniC source")->required();
  paths->add_option("--fn", fn, "Function")->required();
  paths->add_option("--domain", domains, "name=lo..hi for each scalar parameter")->required();
  paths->add_option("--assume", assume, "Condition assumed on entry, e.g. \"x > 20 && x <= 100\"");
  paths->add_option("--max-paths", max_paths, "Path limit");
  paths->add_option("--unroll", unroll, "Input-dependent iterations allowed per loop entry");
  paths->add_option("--budget", budget, "Enumeration budget for model counting");
  paths->add_option("-o,--output", out, "Paths file (default stdout)");

  auto* count = app.add_subcommand("count", "Model-count each path condition");
  count->add_option("--paths", paths_file, "Paths file")->required();
  count->add_option("--domain", domains, "Override domains (name=lo..hi)");
  count->add_option("--budget", budget, "Enumeration budget");
  count->add_option("-o,--output", out, "Counts CSV (default stdout)");

  int precision = 6;
  auto* estimate = app.add_subcommand("estimate", "Weighted-average mems over paths");
  estimate->add_option("--paths", paths_file, "Paths file")->required();
  estimate->add_option("--counts", counts_file, "Counts CSV")->required();
  estimate->add_option("--precision", precision, "Decimal places");

  // dynamic
  std::vector<std::string> args, arrays;
  std::int64_t max_steps = InterpOptions{}.max_steps;
  bool csv = false;
  auto* interp = app.add_subcommand("interp", "Run a function in the interpreter");
  interp->add_option("file", file, "MiniC source")->required();
  interp->add_option("--fn", fn, "Function")->required();
  interp->add_option("--args", args, "Scalar arguments in order");
  interp->add_option("--array", arrays, "name=generator (sorted, reversed, const:V, random:SEED, list:..., @LEN)");
  interp->add_option("--max-steps", max_steps, "Step limit");
  interp->add_option("--marker", marker, "Condition marker")->check(CLI::IsMember({"#", "@"}));
  interp->add_flag("--csv", csv, "Print a run-record CSV instead of the program output");

  std::string cc = NativeOptions{}.compile_cmd;
  int repeat = 5;
  auto* run = app.add_subcommand("run", "Compile the instrumented program and run it natively");
  run->add_option("file", file, "MiniC source")->required();
  run->add_option("--fn", fn, "Function")->required();
  run->add_option("--cc", cc, "Compile command with {src} and {bin}");
  run->add_option("--args", args, "Scalar arguments in order");
  run->add_option("--array", arrays, "name=generator");
  run->add_option("--repeat", repeat, "Runs")->check(CLI::PositiveNumber);
  run->add_option("-o,--output", out, "Run-record CSV (default stdout)");

  // lab
  std::string config;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run an input grid and write analysis rows");
  sweep_cmd->add_option("config", config, "Sweep config")->required();
  sweep_cmd->add_option("-o,--output", out, "Rows CSV (overrides the config)");

  std::string group_by = "program", measure;
  std::vector<std::string> csvs, estimates;
  auto* analyze = app.add_subcommand("analyze", "Correlations from a rows CSV");
  analyze->add_option("csv", file, "Rows CSV")->required();
  analyze->add_option("--group-by", group_by, "Grouping")->check(CLI::IsMember({"bucket", "program"}));
  analyze->add_option("--measure", measure, "Cost column")->check(CLI::IsMember({"steps", "time"}));

  auto* report_cmd = app.add_subcommand("report", "Write the CSV/text report bundle");
  report_cmd->add_option("csv", csvs, "Rows CSV, optionally a second one for bucket speedups")->required()->expected(1, 2);
  report_cmd->add_option("--estimate", estimates, "program=counts.csv");
  report_cmd->add_option("-o,--output", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (*instr) {
      InstrumentConfig cfg;
      cfg.cond_marker = marker[0];
      cfg.timer = timer == "none" ? TimerMode::None : TimerMode::Monotonic;
      cfg.trace = trace == "counts" ? TraceMode::CountsOnly : TraceMode::Full;
      cfg.target_functions = fns;
      if (!harness.empty())
        cfg.harness_entry = harness;
      emit(instrument(load(file), cfg), out);
    } else if (*strip_cmd) {
      emit(strip(read_file(file)), out);
    } else if (*fmt) {
      emit(pretty_print(load(file)), out);
    } else if (*mems) {
      Ast ast = load(file);
      std::string src = read_file(file);
      auto line_of = [&](std::uint32_t offset) {
        return 1 + std::count(src.begin(), src.begin() + std::min<std::size_t>(offset, src.size()), '\n');
      };
      std::function<void(const Stmt&)> walk = [&](const Stmt& s) {
        if (s.kind != Stmt::Kind::Block) {
          MemsDelta d = count_stmt(s);
          if (d.total() > 0) {
            std::string text = s.cond ? print_expr(*s.cond) : s.kind == Stmt::Kind::Return ? "return" : print_simple_stmt(s);
            std::cout << file << ":" << line_of(s.span.begin) << ": reads " << d.reads << " writes " << d.writes
                      << " total " << d.total() << "  " << text << "\n";
          }
        }
        for (const auto* c : {&s.init, &s.step, &s.then_branch, &s.else_branch})
          if (*c)
            walk(**c);
        for (const auto& c : s.body)
          walk(*c);
      };
      for (const auto& f : ast.functions)
        walk(*f.body);
    } else if (*paths) {
      Ast ast = load(file);
      PathLimits limits;
      limits.max_paths = max_paths;
      limits.max_loop_unroll = unroll;
      limits.count_budget = budget;
      std::vector<Constraint> assumptions;
      if (!assume.empty())
        assumptions = parse_conjunction(assume);
      PathSet set = enumerate_paths(ast, fn, domains_of(domains), limits, assumptions);
      emit(write_paths(set), out);
      std::cerr << set.paths.size() << " path(s)\n";
      if (set.truncated) {
        std::cerr << "warning: enumeration truncated (" << errc_name(*set.truncated) << ")\n";
        return kAnalysis;
      }
    } else if (*count) {
      PathSet set = read_paths(read_file(paths_file));
      Domains d = set.domains;
      for (const auto& [name, dom] : domains_of(domains))
        d[name] = dom;
      CountOptions opts;
      opts.budget = budget;
      std::vector<PathWeight> weights;
      for (std::size_t i = 0; i < set.paths.size(); ++i) {
        const auto& p = set.paths[i];
        weights.push_back({path_id(i), model_count(p.condition, d, opts), static_cast<std::uint64_t>(p.pind_mems)});
      }
      Estimate est;
      try {
        est = estimate_performance(weights);
      } catch (const Error& e) {
        if (e.code() != Errc::EmptyOrZeroWeight)
          throw;
        est.per_path = weights;
      }
      emit(counts_csv(est), out);
    } else if (*estimate) {
      PathSet set = read_paths(read_file(paths_file));
      auto weights = parse_counts_csv(read_file(counts_file));
      if (weights.size() != set.paths.size())
        throw Error(Errc::InvalidInput, "counts file has " + std::to_string(weights.size()) + " paths, paths file has " +
                                            std::to_string(set.paths.size()));
      for (std::size_t i = 0; i < weights.size(); ++i)
        if (weights[i].path_id != path_id(i) || weights[i].pind != static_cast<std::uint64_t>(set.paths[i].pind_mems))
          throw Error(Errc::InvalidInput, "counts row " + std::to_string(i + 1) + " does not match " + path_id(i));
      Estimate est = estimate_performance(weights);
      std::cout << est.fraction() << " = " << est.decimal(precision) << "\n";
    } else if (*interp) {
      Ast ast = load(file);
      BoundInput in = bind_input(function_of(ast, fn), ints_of(args), arrays_of(arrays));
      InterpOptions opts;
      opts.max_steps = max_steps;
      opts.cond_marker = marker[0];
      InterpResult r;
      try {
        r = interpret(ast, fn, in.args, opts);
      } catch (const InterpError& e) {
        std::cout << e.stdout_text();
        throw;
      }
      r.record.program = fn;
      r.record.input = in.description;
      if (csv) {
        std::cout << run_records_to_csv({r.record});
      } else {
        std::cout << r.stdout_text;
        std::cout << "Steps: " << *r.record.steps << "\n";
      }
    } else if (*run) {
      Ast ast = load(file);
      BoundInput in = bind_input(function_of(ast, fn), ints_of(args), arrays_of(arrays));
      InstrumentConfig cfg;
      cfg.harness_entry = fn;
      NativeOptions opts;
      opts.compile_cmd = cc;
      opts.repeat = repeat;
      opts.program = fn;
      opts.input = in.description;
      auto records = run_native(instrument(ast, cfg), in.argv, opts);
      emit(run_records_to_csv(records), out);
    } else if (*sweep_cmd) {
      std::string base = std::filesystem::path(config).parent_path().string();
      SweepSpec spec = parse_sweep_spec(read_file(config), base.empty() ? "." : base);
      std::vector<RunRecord> runs;
      auto rows = sweep(spec, &runs);
      std::string target = out.empty() ? spec.output : out;
      emit(rows_to_csv(rows), target);
      if (!spec.runs_output.empty())
        write_file(spec.runs_output, run_records_to_csv(runs));
      if (!target.empty() && target != "-")
        std::cerr << rows.size() << " row(s) written to " << target << "\n";
    } else if (*analyze) {
      auto rows = rows_from_csv(read_file(file));
      CostMeasure m = measure.empty() ? default_measure(rows) : measure == "time" ? CostMeasure::Time : CostMeasure::Steps;
      std::map<std::string, std::vector<AnalysisRow>> groups;
      std::vector<std::string> order;
      for (const auto& r : rows) {
        std::string key = group_by == "bucket" ? bucket_label(r.mems) : r.program;
        if (!groups.count(key))
          order.push_back(key);
        groups[key].push_back(r);
      }
      if (group_by == "bucket") {
        order.clear();
        for (const auto& b : bucket_labels())
          if (groups.count(b))
            order.push_back(b);
      }
      std::cout << "group,rows,mean_mems,mean_" << (m == CostMeasure::Steps ? "steps" : "time_ms") << ",pearson\n";
      for (const auto& key : order) {
        const auto& g = groups[key];
        double sm = 0, sc = 0;
        std::vector<double> xs, ys;
        for (const auto& r : g) {
          sm += static_cast<double>(r.mems);
          sc += cost_of(r, m);
          xs.push_back(static_cast<double>(r.mems));
          ys.push_back(cost_of(r, m));
        }
        std::string r;
        try {
          r = opt_time(pearson(xs, ys));
        } catch (const Error&) {
          r = "NA";
        }
        std::cout << csv_row({key, std::to_string(g.size()), opt_time(sm / static_cast<double>(g.size())),
                              opt_time(sc / static_cast<double>(g.size())), r});
      }
      if (rows.size() >= 2) {
        std::string r;
        try {
          r = opt_time(correlate_across(rows, m));
        } catch (const Error&) {
          r = "NA";
        }
        std::cout << "ALL," << rows.size() << ",,," << r << "\n";
      }
    } else if (*report_cmd) {
      ReportInput in;
      in.rows = rows_from_csv(read_file(csvs[0]));
      if (csvs.size() > 1)
        in.compare = rows_from_csv(read_file(csvs[1]));
      for (const auto& spec : estimates) {
        auto eq = spec.find('=');
        if (eq == std::string::npos)
          throw Error(Errc::InvalidInput, "--estimate expects program=counts.csv");
        in.estimates[spec.substr(0, eq)] = estimate_performance(parse_counts_csv(read_file(spec.substr(eq + 1))));
      }
      write_report(report(in), out);
    }
  } catch (const ParseError&) {
    return kAnalysis;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (is_external(e.code()))
      return kExternal;
    return e.code() == Errc::InvalidInput ? kUsage : kAnalysis;
  }
  return 0;
}
