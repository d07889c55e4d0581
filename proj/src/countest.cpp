#include "memsest/countest.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <optional>

#include "memsest/csv.hpp"
#include "memsest/error.hpp"

#ifdef MEMSEST_HAVE_OPENMP
#include <omp.h>
#endif

namespace memsest {

namespace {

using i128 = __int128;

// Counts above this are only ever compared against the uint64 range.
constexpr i128 kSaturated = static_cast<i128>(1) << 100;

i128 sat_add(i128 a, i128 b) { return std::min(a + b, kSaturated); }
i128 sat_mul(i128 a, i128 b) {
  if (a == 0 || b == 0)
    return 0;
  if (a >= kSaturated / b)
    return kSaturated;
  return a * b;
}

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0)))
    --q;
  return q;
}
i128 ceil_div(i128 a, i128 b) { return -floor_div(-a, b); }

// Flattened expression over variable indices.
struct CNode {
  SymNode::Kind kind = SymNode::Kind::Const;
  std::int64_t value = 0;
  int var = -1;
  BinOp bop = BinOp::Add;
  UnOp uop = UnOp::Neg;
  int a = -1, b = -1;
};

struct Tree {
  std::vector<CNode> nodes;
  int root = -1;

  std::optional<std::int64_t> eval(int i, const std::vector<std::int64_t>& x) const {
    const CNode& n = nodes[static_cast<std::size_t>(i)];
    switch (n.kind) {
      case SymNode::Kind::Const: return n.value;
      case SymNode::Kind::Input: return x[static_cast<std::size_t>(n.var)];
      case SymNode::Kind::Unary: {
        auto v = eval(n.a, x);
        if (!v)
          return v;
        return n.uop == UnOp::Neg ? static_cast<std::int64_t>(0ULL - static_cast<std::uint64_t>(*v)) : *v == 0;
      }
      case SymNode::Kind::Binary: {
        auto l = eval(n.a, x);
        if (!l)
          return l;
        if (n.bop == BinOp::And && *l == 0)
          return 0;
        if (n.bop == BinOp::Or && *l != 0)
          return 1;
        auto r = eval(n.b, x);
        if (!r)
          return r;
        std::uint64_t ul = static_cast<std::uint64_t>(*l), ur = static_cast<std::uint64_t>(*r);
        switch (n.bop) {
          case BinOp::Add: return static_cast<std::int64_t>(ul + ur);
          case BinOp::Sub: return static_cast<std::int64_t>(ul - ur);
          case BinOp::Mul: return static_cast<std::int64_t>(ul * ur);
          case BinOp::Div:
          case BinOp::Mod:
            if (*r == 0)
              return std::nullopt;
            if (*l == std::numeric_limits<std::int64_t>::min() && *r == -1)
              return n.bop == BinOp::Div ? *l : 0;
            return n.bop == BinOp::Div ? *l / *r : *l % *r;
          case BinOp::Lt: return *l < *r;
          case BinOp::Le: return *l <= *r;
          case BinOp::Gt: return *l > *r;
          case BinOp::Ge: return *l >= *r;
          case BinOp::Eq: return *l == *r;
          case BinOp::Ne: return *l != *r;
          case BinOp::And:
          case BinOp::Or: return *r != 0;
        }
        return std::nullopt;
      }
      case SymNode::Kind::Unknown: break;
    }
    return std::nullopt;
  }
};

struct Linear {
  std::vector<std::pair<int, std::int64_t>> terms;   // (var, coeff), coeff != 0
  std::int64_t constant = 0;
  Rel rel = Rel::Ne;
};

struct NonLinear {
  Tree lhs, rhs;
  Rel rel = Rel::Ne;
  std::vector<int> vars;
};

struct Problem {
  std::vector<std::string> names;
  std::vector<VarDomain> domains;
  std::vector<Linear> linear;
  std::vector<NonLinear> nonlinear;
  bool infeasible = false;   // a constant constraint is false
};

int compile(const Sym& s, const std::map<std::string, int>& index, Tree& t) {
  if (s->tainted)
    throw Error(Errc::DataDependentBranch, "constraint depends on array contents");
  CNode n;
  n.kind = s->kind;
  n.value = s->value;
  n.bop = s->bop;
  n.uop = s->uop;
  if (s->kind == SymNode::Kind::Input)
    n.var = index.at(s->name);
  if (s->a)
    n.a = compile(s->a, index, t);
  if (s->b)
    n.b = compile(s->b, index, t);
  t.nodes.push_back(n);
  return static_cast<int>(t.nodes.size()) - 1;
}

Problem build(const PathCondition& pc, const Domains& domains) {
  Problem p;
  std::map<std::string, int> index;
  for (const auto& [name, d] : domains) {
    if (d.lo > d.hi)
      throw Error(Errc::InvalidInput, "empty domain for '" + name + "'");
    index[name] = static_cast<int>(p.names.size());
    p.names.push_back(name);
    p.domains.push_back(d);
  }
  for (const auto& v : vars_of(pc))
    if (!index.count(v))
      throw Error(Errc::UnboundedDomain, "variable '" + v + "' has no domain");
  for (const auto& c : pc.constraints) {
    if (c.lhs->tainted || c.rhs->tainted)
      throw Error(Errc::DataDependentBranch, "constraint depends on array contents");
    Sym diff = sym_binary(BinOp::Sub, c.lhs, c.rhs);
    if (diff->affine) {
      if (diff->affine->is_const()) {
        if (!rel_holds(c.rel, diff->affine->constant, 0))
          p.infeasible = true;
        continue;
      }
      Linear l;
      l.constant = diff->affine->constant;
      l.rel = c.rel;
      for (const auto& [v, k] : diff->affine->coeffs)
        l.terms.emplace_back(index.at(v), k);
      p.linear.push_back(std::move(l));
    } else {
      NonLinear n;
      n.rel = c.rel;
      n.lhs.root = compile(c.lhs, index, n.lhs);
      n.rhs.root = compile(c.rhs, index, n.rhs);
      std::set<std::string> vs = c.lhs->vars;
      vs.insert(c.rhs->vars.begin(), c.rhs->vars.end());
      for (const auto& v : vs)
        n.vars.push_back(index.at(v));
      p.nonlinear.push_back(std::move(n));
    }
  }
  return p;
}

struct Range {
  i128 lo = 0, hi = -1;
  std::vector<std::int64_t> excluded;

  i128 size() const {
    if (hi < lo)
      return 0;
    i128 n = hi - lo + 1;
    std::vector<std::int64_t> ex;
    for (auto v : excluded)
      if (v >= lo && v <= hi)
        ex.push_back(v);
    std::sort(ex.begin(), ex.end());
    ex.erase(std::unique(ex.begin(), ex.end()), ex.end());
    return n - static_cast<i128>(ex.size());
  }

  bool excludes(std::int64_t v) const { return std::find(excluded.begin(), excluded.end(), v) != excluded.end(); }
};

// a*x + c rel 0, a != 0, narrowed into r.
void narrow(Range& r, i128 a, i128 c, Rel rel) {
  i128 rhs = -c;
  if (a < 0) {
    a = -a;
    rhs = -rhs;
    switch (rel) {
      case Rel::Lt: rel = Rel::Gt; break;
      case Rel::Le: rel = Rel::Ge; break;
      case Rel::Gt: rel = Rel::Lt; break;
      case Rel::Ge: rel = Rel::Le; break;
      default: break;
    }
  }
  // a*x rel rhs with a > 0
  switch (rel) {
    case Rel::Lt: r.hi = std::min(r.hi, floor_div(rhs - 1, a)); break;
    case Rel::Le: r.hi = std::min(r.hi, floor_div(rhs, a)); break;
    case Rel::Gt: r.lo = std::max(r.lo, floor_div(rhs, a) + 1); break;
    case Rel::Ge: r.lo = std::max(r.lo, ceil_div(rhs, a)); break;
    case Rel::Eq:
      if (rhs % a != 0) {
        r.hi = r.lo - 1;
      } else {
        r.lo = std::max(r.lo, rhs / a);
        r.hi = std::min(r.hi, rhs / a);
      }
      break;
    case Rel::Ne:
      if (rhs % a == 0) {
        i128 v = rhs / a;
        if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
          r.excluded.push_back(static_cast<std::int64_t>(v));
      }
      break;
  }
}

bool holds(Rel rel, i128 lhs, i128 rhs) {
  switch (rel) {
    case Rel::Lt: return lhs < rhs;
    case Rel::Le: return lhs <= rhs;
    case Rel::Gt: return lhs > rhs;
    case Rel::Ge: return lhs >= rhs;
    case Rel::Eq: return lhs == rhs;
    case Rel::Ne: return lhs != rhs;
  }
  return false;
}

// One reduction step: assigned variables substituted, single-variable
// constraints folded into ranges, the rest left for enumeration.
struct Reduced {
  bool empty = false;
  std::vector<Range> ranges;
  std::vector<bool> complex;
  bool any_complex = false;
};

Reduced reduce(const Problem& p, const std::vector<bool>& assigned, const std::vector<std::int64_t>& x) {
  Reduced r;
  std::size_t n = p.names.size();
  r.ranges.resize(n);
  r.complex.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (assigned[i]) {
      r.ranges[i].lo = r.ranges[i].hi = x[i];
    } else {
      r.ranges[i].lo = p.domains[i].lo;
      r.ranges[i].hi = p.domains[i].hi;
    }
  }
  for (const auto& l : p.linear) {
    i128 c = l.constant;
    int free_var = -1;
    i128 free_coeff = 0;
    int n_free = 0;
    for (const auto& [v, k] : l.terms) {
      if (assigned[static_cast<std::size_t>(v)]) {
        c += static_cast<i128>(k) * x[static_cast<std::size_t>(v)];
      } else {
        ++n_free;
        free_var = v;
        free_coeff = k;
      }
    }
    if (n_free == 0) {
      if (!holds(l.rel, c, 0)) {
        r.empty = true;
        return r;
      }
    } else if (n_free == 1) {
      narrow(r.ranges[static_cast<std::size_t>(free_var)], free_coeff, c, l.rel);
    } else {
      for (const auto& [v, k] : l.terms)
        if (!assigned[static_cast<std::size_t>(v)])
          r.complex[static_cast<std::size_t>(v)] = true;
      r.any_complex = true;
    }
  }
  for (const auto& nl : p.nonlinear) {
    bool all = std::all_of(nl.vars.begin(), nl.vars.end(), [&](int v) { return assigned[static_cast<std::size_t>(v)]; });
    if (all) {
      auto a = nl.lhs.eval(nl.lhs.root, x);
      auto b = a ? nl.rhs.eval(nl.rhs.root, x) : std::nullopt;
      if (!a || !b || !rel_holds(nl.rel, *a, *b)) {
        r.empty = true;
        return r;
      }
    } else {
      for (int v : nl.vars)
        if (!assigned[static_cast<std::size_t>(v)])
          r.complex[static_cast<std::size_t>(v)] = true;
      r.any_complex = true;
    }
  }
  for (const auto& range : r.ranges)
    if (range.hi < range.lo) {
      r.empty = true;
      return r;
    }
  return r;
}

i128 closed_form(const Reduced& r, const std::vector<bool>& assigned) {
  i128 total = 1;
  for (std::size_t i = 0; i < r.ranges.size(); ++i)
    if (!assigned[i])
      total = sat_mul(total, r.ranges[i].size());
  return total;
}

int pick(const Reduced& r, const std::vector<bool>& assigned) {
  int best = -1;
  i128 best_size = 0;
  for (std::size_t i = 0; i < r.ranges.size(); ++i) {
    if (assigned[i] || !r.complex[i])
      continue;
    i128 s = r.ranges[i].hi - r.ranges[i].lo + 1;
    if (best < 0 || s < best_size) {
      best = static_cast<int>(i);
      best_size = s;
    }
  }
  return best;
}

i128 count_rec(const Problem& p, std::vector<bool>& assigned, std::vector<std::int64_t>& x) {
  Reduced r = reduce(p, assigned, x);
  if (r.empty)
    return 0;
  if (!r.any_complex)
    return closed_form(r, assigned);
  int v = pick(r, assigned);
  auto vi = static_cast<std::size_t>(v);
  const Range& range = r.ranges[vi];
  i128 total = 0;
  assigned[vi] = true;
  for (i128 val = range.lo; val <= range.hi; ++val) {
    auto value = static_cast<std::int64_t>(val);
    if (range.excludes(value))
      continue;
    x[vi] = value;
    total = sat_add(total, count_rec(p, assigned, x));
  }
  assigned[vi] = false;
  return total;
}

void check_budget(const Reduced& r, std::uint64_t budget) {
  i128 box = 1;
  for (std::size_t i = 0; i < r.ranges.size(); ++i)
    if (r.complex[i])
      box = sat_mul(box, r.ranges[i].hi - r.ranges[i].lo + 1);
  if (box > static_cast<i128>(budget))
    throw Error(Errc::BudgetExceeded, "enumeration box exceeds the budget of " + std::to_string(budget) + " points");
}

std::uint64_t finish(i128 total) {
  if (total > static_cast<i128>(std::numeric_limits<std::uint64_t>::max()))
    throw Error(Errc::CountOverflow, "model count does not fit in 64 bits");
  return static_cast<std::uint64_t>(total);
}

std::uint64_t count(const PathCondition& pc, const Domains& domains, std::uint64_t budget, bool parallel) {
  Problem p = build(pc, domains);
  if (p.infeasible)
    return 0;
  std::size_t n = p.names.size();
  std::vector<bool> assigned(n, false);
  std::vector<std::int64_t> x(n, 0);
  Reduced r = reduce(p, assigned, x);
  if (r.empty)
    return 0;
  if (!r.any_complex)
    return finish(closed_form(r, assigned));
  check_budget(r, budget);
  if (!parallel)
    return finish(count_rec(p, assigned, x));

  int v = pick(r, assigned);
  auto vi = static_cast<std::size_t>(v);
  const Range range = r.ranges[vi];
  const std::int64_t lo = static_cast<std::int64_t>(range.lo);
  const std::int64_t span = static_cast<std::int64_t>(range.hi - range.lo);
  i128 total = 0;
#ifdef MEMSEST_HAVE_OPENMP
#pragma omp parallel
#endif
  {
    std::vector<bool> a = assigned;
    std::vector<std::int64_t> xs = x;
    a[vi] = true;
    i128 local = 0;
#ifdef MEMSEST_HAVE_OPENMP
#pragma omp for schedule(dynamic, 64)
#endif
    for (std::int64_t k = 0; k <= span; ++k) {
      std::int64_t value = lo + k;
      if (range.excludes(value))
        continue;
      xs[vi] = value;
      local = sat_add(local, count_rec(p, a, xs));
    }
#ifdef MEMSEST_HAVE_OPENMP
#pragma omp critical
#endif
    total = sat_add(total, local);
  }
  return finish(total);
}

std::int64_t parse_i64(std::string_view s, const std::string& what) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw Error(Errc::InvalidInput, "bad " + what + " '" + std::string(s) + "'");
  return v;
}

std::uint64_t parse_u64(std::string_view s, const std::string& what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw Error(Errc::InvalidInput, "bad " + what + " '" + std::string(s) + "'");
  return v;
}

} // namespace

std::pair<std::string, VarDomain> parse_domain(const std::string& spec) {
  auto eq = spec.find('=');
  auto dots = spec.find("..", eq == std::string::npos ? 0 : eq);
  if (eq == std::string::npos || dots == std::string::npos || eq == 0)
    throw Error(Errc::InvalidInput, "domain '" + spec + "' must look like name=lo..hi");
  VarDomain d;
  d.lo = parse_i64(std::string_view(spec).substr(eq + 1, dots - eq - 1), "domain bound");
  d.hi = parse_i64(std::string_view(spec).substr(dots + 2), "domain bound");
  if (d.lo > d.hi)
    throw Error(Errc::InvalidInput, "domain '" + spec + "' is empty");
  return {spec.substr(0, eq), d};
}

std::uint64_t model_count(const PathCondition& pc, const Domains& domains, const CountOptions& opts) {
  return count(pc, domains, opts.budget, opts.parallel);
}

std::uint64_t model_count_serial(const PathCondition& pc, const Domains& domains, std::uint64_t budget) {
  return count(pc, domains, budget, false);
}

std::string Estimate::fraction() const { return weighted_sum.str() + "/" + total_weight.str(); }

std::string Estimate::decimal(int precision) const { return render_decimal(value, precision); }

Estimate estimate_performance(const std::vector<PathWeight>& paths) {
  Estimate e;
  e.per_path = paths;
  for (const auto& p : paths) {
    e.weighted_sum += BigInt(p.delta) * BigInt(p.pind);
    e.total_weight += BigInt(p.delta);
  }
  if (e.total_weight == 0)
    throw Error(Errc::EmptyOrZeroWeight, paths.empty() ? "no paths" : "every path has zero weight");
  e.value = Rational(e.weighted_sum, e.total_weight);
  return e;
}

std::string render_decimal(const Rational& value, int precision) {
  if (precision < 0)
    precision = 0;
  BigInt scale = 1;
  for (int i = 0; i < precision; ++i)
    scale *= 10;
  bool negative = value < 0;
  Rational mag = negative ? Rational(-value) : value;
  BigInt num = boost::multiprecision::numerator(mag) * scale;
  BigInt den = boost::multiprecision::denominator(mag);
  BigInt q = (2 * num + den) / (2 * den);   // round half up
  std::string digits = q.str();
  if (precision > 0) {
    if (digits.size() <= static_cast<std::size_t>(precision))
      digits.insert(0, static_cast<std::size_t>(precision) + 1 - digits.size(), '0');
    digits.insert(digits.size() - static_cast<std::size_t>(precision), ".");
    while (digits.back() == '0')
      digits.pop_back();
    if (digits.back() == '.')
      digits.pop_back();
  }
  if (negative && digits != "0")
    digits.insert(0, "-");
  return digits;
}

std::string counts_csv(const Estimate& est, int precision) {
  std::string out = "path_id,delta,pind\n";
  for (const auto& p : est.per_path)
    out += csv_row({p.path_id, std::to_string(p.delta), std::to_string(p.pind)});
  out += csv_row({"weighted", est.total_weight.str(), est.decimal(precision)});
  return out;
}

std::vector<PathWeight> parse_counts_csv(const std::string& text) {
  auto rows = parse_csv(text);
  if (rows.empty() || rows[0] != std::vector<std::string>{"path_id", "delta", "pind"})
    throw Error(Errc::InvalidInput, "expected CSV header `path_id,delta,pind`");
  std::vector<PathWeight> out;
  bool footer = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 3)
      throw Error(Errc::InvalidInput, "row " + std::to_string(i + 1) + " needs 3 fields");
    if (r[0] == "weighted") {
      footer = true;
      continue;
    }
    if (footer)
      throw Error(Errc::InvalidInput, "rows after the `weighted` footer");
    out.push_back({r[0], parse_u64(r[1], "delta"), parse_u64(r[2], "pind")});
  }
  return out;
}

} // namespace memsest
