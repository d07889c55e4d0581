#pragma once

// Test-side oracles shared by the unit tests and the acceptance binary. They
// only use the library to parse and print text.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "memsest/countest.hpp"
#include "memsest/parser.hpp"
#include "memsest/pathex.hpp"
#include "test_support.hpp"

namespace oracles {

using namespace memsest;
using testsupport::Rng;

struct DivByZero {};

// Plain C evaluation of a condition over a point.
inline std::int64_t eval(const Expr& e, const std::map<std::string, std::int64_t>& env) {
  switch (e.kind) {
    case Expr::Kind::IntLit: return e.value;
    case Expr::Kind::Var: return env.at(e.name);
    case Expr::Kind::Unary: return e.uop == UnOp::Neg ? -eval(e.operand(), env) : !eval(e.operand(), env);
    case Expr::Kind::Binary: {
      std::int64_t a = eval(e.lhs(), env);
      if (e.bop == BinOp::And)
        return a && eval(e.rhs(), env);
      if (e.bop == BinOp::Or)
        return a || eval(e.rhs(), env);
      std::int64_t b = eval(e.rhs(), env);
      switch (e.bop) {
        case BinOp::Add: return a + b;
        case BinOp::Sub: return a - b;
        case BinOp::Mul: return a * b;
        case BinOp::Div: if (b == 0) throw DivByZero{}; return a / b;
        case BinOp::Mod: if (b == 0) throw DivByZero{}; return a % b;
        case BinOp::Lt: return a < b;
        case BinOp::Le: return a <= b;
        case BinOp::Gt: return a > b;
        case BinOp::Ge: return a >= b;
        case BinOp::Eq: return a == b;
        case BinOp::Ne: return a != b;
        default: break;
      }
      break;
    }
    default: break;
  }
  throw std::logic_error("unexpected expression in a path condition");
}

inline bool satisfied(const PathTrace& t, const std::map<std::string, std::int64_t>& env) {
  for (const auto& c : t.condition.constraints) {
    try {
      if (!eval(*parse_expression(render(c)), env))
        return false;
    } catch (const DivByZero&) {
      return false;
    }
  }
  return true;
}

// Test-side model of a constraint: sum of terms + k REL 0, evaluated with C
// integer semantics and no help from the library.
struct Term {
  enum Kind { Lin, Prod, Mod, Div, DivVar } kind = Lin;
  std::int64_t c = 1;
  int v = 0;
  int w = 0;
};

struct Cons {
  std::vector<Term> terms;
  std::int64_t k = 0;
  std::string rel;
};

inline const std::vector<std::string> kNames = {"x", "y", "z"};

inline std::string render(const Cons& c) {
  std::string s;
  for (const auto& t : c.terms) {
    if (!s.empty())
      s += " + ";
    const std::string& v = kNames[static_cast<std::size_t>(t.v)];
    const std::string& w = kNames[static_cast<std::size_t>(t.w)];
    switch (t.kind) {
      case Term::Lin: s += std::to_string(t.c) + " * " + v; break;
      case Term::Prod: s += std::to_string(t.c) + " * " + v + " * " + w; break;
      case Term::Mod: s += v + " % " + std::to_string(t.c); break;
      case Term::Div: s += v + " / " + std::to_string(t.c); break;
      case Term::DivVar: s += v + " / " + w; break;
    }
  }
  return s + " + " + std::to_string(c.k) + " " + c.rel + " 0";
}

inline bool holds(const Cons& c, const std::int64_t* p) {
  std::int64_t sum = c.k;
  for (const auto& t : c.terms) {
    std::int64_t a = p[t.v], b = p[t.w];
    switch (t.kind) {
      case Term::Lin: sum += t.c * a; break;
      case Term::Prod: sum += t.c * a * b; break;
      case Term::Mod: sum += a % t.c; break;
      case Term::Div: sum += a / t.c; break;
      case Term::DivVar:
        if (b == 0)
          return false;
        sum += a / b;
        break;
    }
  }
  if (c.rel == "<") return sum < 0;
  if (c.rel == "<=") return sum <= 0;
  if (c.rel == ">") return sum > 0;
  if (c.rel == ">=") return sum >= 0;
  if (c.rel == "==") return sum == 0;
  return sum != 0;
}

inline std::uint64_t brute(const std::vector<Cons>& cs, const std::vector<std::pair<std::int64_t, std::int64_t>>& box) {
  std::uint64_t n = 0;
  std::int64_t p[3] = {0, 0, 0};
  std::vector<std::pair<std::int64_t, std::int64_t>> b = box;
  while (b.size() < 3)
    b.push_back({0, 0});
  for (p[0] = b[0].first; p[0] <= b[0].second; ++p[0])
    for (p[1] = b[1].first; p[1] <= b[1].second; ++p[1])
      for (p[2] = b[2].first; p[2] <= b[2].second; ++p[2]) {
        bool ok = true;
        for (const auto& c : cs)
          ok = ok && holds(c, p);
        n += ok;
      }
  return n;
}

struct Case {
  std::vector<Cons> cons;
  std::vector<std::pair<std::int64_t, std::int64_t>> box;
  bool affine_only = true;
};

inline Case random_case(Rng& rng, bool allow_nonlinear) {
  static const std::vector<std::string> rels = {"<", "<=", ">", ">=", "==", "!="};
  Case c;
  int nv = static_cast<int>(rng.in(1, 3));
  std::int64_t width = nv == 1 ? rng.in(0, 99999) : nv == 2 ? rng.in(0, 300) : rng.in(0, 44);
  for (int i = 0; i < nv; ++i) {
    std::int64_t lo = rng.in(-60, 60);
    c.box.push_back({lo, lo + (i == 0 ? width : rng.in(0, width))});
  }
  auto var = [&] { return static_cast<int>(rng.in(0, nv - 1)); };
  for (auto n = rng.in(1, 4); n > 0; --n) {
    Cons k;
    for (auto m = rng.in(1, nv); m > 0; --m) {
      Term t;
      t.v = var();
      t.w = var();
      t.c = rng.in(-5, 5);
      if (t.c == 0)
        t.c = 1;
      if (allow_nonlinear && rng.chance(35)) {
        t.kind = static_cast<Term::Kind>(rng.in(1, 4));
        if (t.kind == Term::Mod || t.kind == Term::Div)
          t.c = rng.in(1, 7);
        c.affine_only = false;
      }
      k.terms.push_back(t);
    }
    k.k = rng.in(-80, 80);
    k.rel = rng.pick(rels);
    c.cons.push_back(k);
  }
  return c;
}

inline PathCondition condition_of(const Case& c) {
  PathCondition pc;
  for (const auto& k : c.cons)
    for (auto& parsed : parse_conjunction(render(k)))
      pc.constraints.push_back(parsed);
  return pc;
}

inline Domains domains_of(const Case& c) {
  Domains d;
  for (std::size_t i = 0; i < c.box.size(); ++i)
    d[kNames[i]] = {c.box[i].first, c.box[i].second};
  return d;
}

} // namespace oracles
