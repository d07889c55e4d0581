#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "memsest/ast.hpp"
#include "memsest/countest.hpp"
#include "memsest/error.hpp"
#include "memsest/symexpr.hpp"

namespace memsest {

/// One branch outcome on a path. Logged decisions are the ones the
/// instrumented program prints and counts in path_len; unlogged ones are
/// symbolic forks it does not report (loop exits, an if without else taking
/// the false side, operands of && / ||, branches inside callees).
struct Decision {
  int site = 0;
  bool taken = false;
  bool logged = false;

  bool operator==(const Decision&) const = default;
};

struct PathTrace {
  std::vector<Decision> decisions;
  PathCondition condition;
  std::int64_t path_len = 0;
  std::int64_t pind_mems = 0;
};

struct PathLimits {
  std::size_t max_paths = 10000;
  std::int64_t max_loop_unroll = 1024;       // input-dependent iterations per loop entry
  std::int64_t max_steps = 10'000'000;       // statements per path
  std::uint64_t count_budget = CountOptions{}.budget;
};

struct PathSet {
  std::string function;
  Domains domains;
  std::vector<Constraint> assumptions;   // prefix of every path condition
  std::map<int, std::string> sites;      // site id -> condition text
  std::vector<PathTrace> paths;
  std::optional<Errc> truncated;         // PathLimitExceeded or UnrollLimitExceeded
};

/// Enumerates the feasible paths of `fn` over the domain box, restricted to
/// points satisfying `assumptions`. Paths come in lexicographic order of their
/// fork choices, true before false. Constraints already implied by the path so
/// far are not added. Throws DataDependentBranch, UnboundedDomain.
PathSet enumerate_paths(const Ast& ast, const std::string& fn, const Domains& domains,
                        const PathLimits& limits = {}, const std::vector<Constraint>& assumptions = {});

inline std::int64_t path_pind(const PathTrace& t) { return t.pind_mems; }

/// Condition lines the instrumented program prints for this path, in order.
std::vector<std::string> expected_trace(const PathSet& set, const PathTrace& t, char marker = '#');

} // namespace memsest
