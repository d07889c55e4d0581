#include "memsest/paths_io.hpp"

#include <charconv>
#include <sstream>

namespace memsest {

namespace {

[[noreturn]] void bad(std::size_t line, const std::string& msg) {
  throw Error(Errc::InvalidInput, "paths file line " + std::to_string(line) + ": " + msg);
}

std::int64_t to_i64(const std::string& s, std::size_t line) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    bad(line, "expected an integer, got '" + s + "'");
  return v;
}

std::pair<std::string, std::string> split_key(const std::string& line) {
  auto sp = line.find(' ');
  if (sp == std::string::npos)
    return {line, ""};
  return {line.substr(0, sp), line.substr(sp + 1)};
}

} // namespace

std::string path_id(std::size_t index) { return "path_" + std::to_string(index); }

std::string write_paths(const PathSet& set) {
  std::ostringstream out;
  out << "mems-paths 1\n";
  out << "function " << set.function << "\n";
  for (const auto& [v, d] : set.domains)
    out << "domain " << v << " " << d.lo << " " << d.hi << "\n";
  for (const auto& c : set.assumptions)
    out << "assume " << render(c) << "\n";
  out << "truncated " << (set.truncated ? std::string(errc_name(*set.truncated)) : "none") << "\n";
  for (const auto& [id, text] : set.sites)
    out << "site " << id << " " << text << "\n";
  for (std::size_t i = 0; i < set.paths.size(); ++i) {
    const auto& p = set.paths[i];
    out << "path " << path_id(i) << "\n";
    out << "decisions";
    for (const auto& d : p.decisions)
      out << " s" << d.site << "=" << (d.logged ? (d.taken ? 'T' : 'F') : (d.taken ? 't' : 'f'));
    out << "\n";
    out << "condition " << render(p.condition) << "\n";
    for (const auto& c : p.condition.constraints)
      out << "constraint " << render(c) << "\n";
    out << "path_len " << p.path_len << "\n";
    out << "pind " << p.pind_mems << "\n";
    out << "end\n";
  }
  return out.str();
}

PathSet read_paths(const std::string& text) {
  PathSet set;
  std::istringstream in(text);
  std::string line;
  std::size_t no = 0;
  bool header = false;
  PathTrace* cur = nullptr;
  while (std::getline(in, line)) {
    ++no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    auto [key, rest] = split_key(line);
    if (!header) {
      if (line != "mems-paths 1")
        bad(no, "expected `mems-paths 1`");
      header = true;
      continue;
    }
    if (key == "function") {
      set.function = rest;
    } else if (key == "domain") {
      std::istringstream ds(rest);
      std::string v, lo, hi;
      if (!(ds >> v >> lo >> hi))
        bad(no, "expected `domain <var> <lo> <hi>`");
      set.domains[v] = VarDomain{to_i64(lo, no), to_i64(hi, no)};
    } else if (key == "assume") {
      set.assumptions.push_back(parse_constraint(rest));
    } else if (key == "truncated") {
      if (rest == "PathLimitExceeded")
        set.truncated = Errc::PathLimitExceeded;
      else if (rest == "UnrollLimitExceeded")
        set.truncated = Errc::UnrollLimitExceeded;
      else if (rest != "none")
        bad(no, "unknown truncation '" + rest + "'");
    } else if (key == "site") {
      auto [id, t] = split_key(rest);
      set.sites[static_cast<int>(to_i64(id, no))] = t;
    } else if (key == "path") {
      if (cur)
        bad(no, "missing `end` before next path");
      set.paths.emplace_back();
      cur = &set.paths.back();
    } else if (!cur) {
      bad(no, "unexpected `" + key + "` outside a path");
    } else if (key == "decisions") {
      std::istringstream ds(rest);
      std::string tok;
      while (ds >> tok) {
        auto eq = tok.find('=');
        if (tok.size() < 4 || tok[0] != 's' || eq == std::string::npos || eq + 2 != tok.size())
          bad(no, "bad decision '" + tok + "'");
        char c = tok.back();
        if (c != 'T' && c != 'F' && c != 't' && c != 'f')
          bad(no, "bad decision '" + tok + "'");
        Decision d;
        d.site = static_cast<int>(to_i64(tok.substr(1, eq - 1), no));
        d.taken = c == 'T' || c == 't';
        d.logged = c == 'T' || c == 'F';
        cur->decisions.push_back(d);
      }
    } else if (key == "condition") {
      // Display only; the constraint lines carry the semantics.
    } else if (key == "constraint") {
      cur->condition.constraints.push_back(parse_constraint(rest));
    } else if (key == "path_len") {
      cur->path_len = to_i64(rest, no);
    } else if (key == "pind") {
      cur->pind_mems = to_i64(rest, no);
    } else if (key == "end") {
      cur = nullptr;
    } else {
      bad(no, "unknown key '" + key + "'");
    }
  }
  if (!header)
    bad(no + 1, "expected `mems-paths 1`");
  if (cur)
    bad(no + 1, "missing `end`");
  return set;
}

} // namespace memsest
