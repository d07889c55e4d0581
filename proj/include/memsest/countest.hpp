#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "memsest/symexpr.hpp"

namespace memsest {

struct VarDomain {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  bool operator==(const VarDomain&) const = default;
};

using Domains = std::map<std::string, VarDomain>;

/// Parses `x=-1000..1000`.
std::pair<std::string, VarDomain> parse_domain(const std::string& spec);

struct CountOptions {
  /// Largest box (over variables in multi-variable or non-affine constraints)
  /// that may be enumerated.
  std::uint64_t budget = 10'000'000;
  bool parallel = true;
};

/// Exact number of points of the domain box satisfying every constraint.
/// Single-variable affine constraints are solved in closed form; the rest are
/// reduced by enumerating their smallest variable. Points where a constraint
/// divides by zero do not satisfy it.
std::uint64_t model_count(const PathCondition& pc, const Domains& domains, const CountOptions& opts = {});

/// Same count computed on one thread; kept as the reference for the parallel kernel.
std::uint64_t model_count_serial(const PathCondition& pc, const Domains& domains,
                                 std::uint64_t budget = CountOptions{}.budget);

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct PathWeight {
  std::string path_id;
  std::uint64_t delta = 0;
  std::uint64_t pind = 0;
};

struct Estimate {
  std::vector<PathWeight> per_path;
  BigInt weighted_sum;   // Σ δ·pind
  BigInt total_weight;   // Σ δ
  Rational value;

  /// `220/80`, unreduced.
  std::string fraction() const;
  std::string decimal(int precision = 6) const;
};

/// Σ δ·pind / Σ δ exactly. Throws EmptyOrZeroWeight when Σ δ is zero.
Estimate estimate_performance(const std::vector<PathWeight>& paths);

/// Round-half-up to `precision` places, trailing zeros trimmed: 2.75, 3, 0.333333.
std::string render_decimal(const Rational& value, int precision = 6);

/// `path_id,delta,pind` rows plus a `weighted,<Σδ>,<value>` footer.
std::string counts_csv(const Estimate& est, int precision = 6);
/// Reads the per-path rows back (the footer is checked but not returned).
std::vector<PathWeight> parse_counts_csv(const std::string& text);

} // namespace memsest
