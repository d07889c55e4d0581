#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "memsest/csv.hpp"

namespace testsupport {

inline std::string corpus_dir() { return MEMSEST_CORPUS_DIR; }

inline std::string corpus(const std::string& file) { return memsest::read_file(corpus_dir() + "/" + file); }

inline std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(corpus_dir()))
    if (e.path().extension() == ".c")
      out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

class Rng {
public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}

  std::int64_t in(std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(g_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g_); }
  bool chance(int percent) { return in(0, 99) < percent; }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(in(0, static_cast<std::int64_t>(v.size()) - 1))];
  }

private:
  std::mt19937_64 g_;
};

// Random MiniC functions `int f(int n, int a[n])` that always terminate, never
// divide, keep indices in range for n >= 4 and keep values far from int32
// overflow, so the interpreter and a C compiler must agree on them.
// With scalar_inputs the signature is `int f(int n, int m)`, some loops run n
// times, and indices stay in range for n <= 8.
class ProgramGen {
public:
  explicit ProgramGen(Rng& rng, bool scalar_inputs = false) : rng_(rng), scalar_(scalar_inputs) {}

  std::string program() {
    loops_.clear();
    fresh_ = 0;
    std::string s = std::string(scalar_ ? "int f(int n, int m) {\n" : "int f(int n, int a[n]) {\n") +
                    "    int x = 1, y = 2, b[8];\n"
                    "    for (int z = 0; z < 8; z++) {\n        b[z] = z;\n    }\n";
    for (auto k = rng_.in(1, 5); k > 0; --k)
      s += stmt(1, 2);
    s += "    return x + y;\n}\n";
    return s;
  }

private:
  std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent) * 4, ' '); }

  std::string index() {
    if (!loops_.empty() && rng_.chance(60))
      return rng_.pick(loops_);
    return std::to_string(rng_.in(0, 3));
  }

  std::string atom() {
    switch (rng_.in(0, 4)) {
      case 0: return "x";
      case 1: return "y";
      case 2: return std::to_string(rng_.in(0, 9));
      case 3: return "b[" + index() + "]";
      default: return scalar_ ? (rng_.chance(50) ? "n" : "m") : "a[" + index() + "]";
    }
  }

  std::string expr(int depth) {
    if (depth == 0 || rng_.chance(40))
      return atom();
    switch (rng_.in(0, 3)) {
      case 0: return "(" + expr(depth - 1) + " + " + expr(depth - 1) + ")";
      case 1: return "(" + expr(depth - 1) + " - " + expr(depth - 1) + ")";
      case 2: return expr(depth - 1) + " * " + std::to_string(rng_.in(1, 3));
      default: return "-" + atom();
    }
  }

  std::string relation() {
    static const std::vector<std::string> rels = {"<", "<=", ">", ">=", "==", "!="};
    return expr(1) + " " + rng_.pick(rels) + " " + expr(1);
  }

  std::string cond() {
    switch (rng_.in(0, 4)) {
      case 0: return relation() + " && " + relation();
      case 1: return relation() + " || " + relation();
      case 2: return "!(" + relation() + ")";
      case 3: return atom();
      default: return relation();
    }
  }

  std::string block(int indent, int depth) {
    std::string s;
    for (auto k = rng_.in(1, 3); k > 0; --k)
      s += stmt(indent, depth);
    return s;
  }

  std::string stmt(int indent, int depth) {
    std::string p = pad(indent);
    int kind = static_cast<int>(rng_.in(0, depth > 0 ? 7 : 3));
    switch (kind) {
      case 0: return p + "x = (" + expr(2) + ") % 1000;\n";
      case 1: return p + "y = (" + expr(2) + ") % 1000;\n";
      case 2: return p + "b[" + index() + "] = (" + expr(2) + ") % 1000;\n";
      case 3: return p + (rng_.chance(50) ? "x++;\n" : "y -= " + atom() + " % 7;\n");
      case 4:
      case 5: {
        std::string s = p + "if (" + cond() + ") {\n" + block(indent + 1, depth - 1) + p + "}";
        if (rng_.chance(30))
          s += " else if (" + cond() + ") {\n" + block(indent + 1, depth - 1) + p + "}";
        if (rng_.chance(50))
          s += " else {\n" + block(indent + 1, depth - 1) + p + "}";
        return s + "\n";
      }
      case 6: {
        std::string v = "k" + std::to_string(fresh_++);
        std::string s = p + "for (int " + v + " = 0; " + v + " < " + (scalar_ && rng_.chance(40) ? std::string("n") : std::to_string(rng_.in(1, 3))) + "; " + v + "++) {\n";
        loops_.push_back(v);
        s += block(indent + 1, depth - 1);
        loops_.pop_back();
        return s + p + "}\n";
      }
      default: {
        std::string v = "w" + std::to_string(fresh_++);
        std::string s = p + "int " + v + " = 0;\n" + p + "while (" + v + " < 2 && " + relation() + ") {\n" + pad(indent + 1) +
                        v + "++;\n";
        s += block(indent + 1, depth - 1);
        return s + p + "}\n";
      }
    }
  }

  Rng& rng_;
  bool scalar_ = false;
  std::vector<std::string> loops_;
  int fresh_ = 0;
};

struct CorpusCase {
  std::string file;
  std::string fn;
  std::vector<std::int64_t> scalars;
  std::map<std::string, std::string> arrays;
  bool scalar_only = false;
};

// Three inputs for each of the ten benchmark programs.
inline std::vector<CorpusCase> benchmark_cases() {
  std::vector<CorpusCase> out;
  auto scalar = [&](const std::string& name, std::vector<std::int64_t> values) {
    for (auto v : values)
      out.push_back({name + ".c", name, {v}, {}, true});
  };
  auto sorting = [&](const std::string& name, std::vector<std::pair<std::int64_t, std::string>> cells) {
    for (const auto& [n, gen] : cells)
      out.push_back({name + ".c", name, {n}, {{"a", gen}}, false});
  };
  scalar("array", {5, 50, 500});
  sorting("bubble", {{8, "reversed"}, {16, "random:1"}, {32, "sorted"}});
  sorting("insertsort", {{8, "reversed"}, {16, "random:2"}, {30, "sorted"}});
  sorting("shell", {{10, "reversed"}, {33, "random:3"}, {64, "sorted"}});
  sorting("binsearch", {{16, "sorted"}, {100, "random:4"}, {1000, "sorted"}});
  scalar("sieve", {10, 100, 1000});
  scalar("change", {10, 50, 100});
  scalar("fft", {1, 3, 5});
  scalar("matmul", {2, 5, 8});
  scalar("topo", {3, 6, 10});
  return out;
}

} // namespace testsupport
