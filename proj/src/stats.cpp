#include "memsest/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

#include "memsest/csv.hpp"
#include "memsest/error.hpp"

namespace memsest {

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::int64_t field_int(const std::string& s, const char* what) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw Error(Errc::InvalidInput, std::string("bad ") + what + " '" + s + "'");
  return v;
}

} // namespace

std::string rows_to_csv(const std::vector<AnalysisRow>& rows) {
  std::string out = std::string(kRowCsvHeader) + "\n";
  for (const auto& r : rows)
    out += csv_row({r.program, r.input, std::to_string(r.n), std::to_string(r.path_len), std::to_string(r.mems),
                    r.time_ms ? fixed6(*r.time_ms) : "", r.steps ? std::to_string(*r.steps) : "",
                    r.bucket.empty() ? bucket_label(r.mems) : r.bucket});
  return out;
}

std::vector<AnalysisRow> rows_from_csv(const std::string& text) {
  auto table = parse_csv(text);
  if (table.empty() || csv_row(table[0]) != std::string(kRowCsvHeader) + "\n")
    throw Error(Errc::InvalidInput, std::string("expected CSV header `") + kRowCsvHeader + "`");
  std::vector<AnalysisRow> rows;
  for (std::size_t i = 1; i < table.size(); ++i) {
    const auto& f = table[i];
    if (f.size() != 8)
      throw Error(Errc::InvalidInput, "row " + std::to_string(i + 1) + " needs 8 fields");
    AnalysisRow r;
    r.program = f[0];
    r.input = f[1];
    r.n = field_int(f[2], "n");
    r.path_len = field_int(f[3], "path_len");
    r.mems = field_int(f[4], "mems");
    if (!f[5].empty()) {
      try {
        r.time_ms = std::stod(f[5]);
      } catch (const std::logic_error&) {
        throw Error(Errc::InvalidInput, "bad time_ms '" + f[5] + "'");
      }
    }
    if (!f[6].empty())
      r.steps = field_int(f[6], "steps");
    r.bucket = f[7].empty() ? bucket_label(r.mems) : f[7];
    rows.push_back(std::move(r));
  }
  return rows;
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size())
    throw Error(Errc::DegenerateInput, "series lengths differ (" + std::to_string(xs.size()) + " vs " +
                                           std::to_string(ys.size()) + ")");
  if (xs.size() < 2)
    throw Error(Errc::DegenerateInput, "need at least two points");
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<long double>(xs.size());
  my /= static_cast<long double>(ys.size());
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    long double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0)
    throw Error(Errc::DegenerateInput, "a series is constant");
  long double r = sxy / std::sqrt(sxx * syy);
  return static_cast<double>(std::clamp(r, -1.0L, 1.0L));
}

const std::vector<std::string>& bucket_labels() {
  static const std::vector<std::string> labels = {"<1K", "1K-10K", "10K-100K", "100K-1M", "1M-10M", ">10M"};
  return labels;
}

std::string bucket_label(std::int64_t mems) {
  if (mems < 0)
    throw Error(Errc::InvalidInput, "negative mems");
  std::int64_t bound = 1000;
  for (std::size_t i = 0; i + 1 < bucket_labels().size(); ++i, bound *= 10)
    if (mems < bound)
      return bucket_labels()[i];
  return bucket_labels().back();
}

double cost_of(const AnalysisRow& row, CostMeasure m) {
  if (m == CostMeasure::Steps) {
    if (!row.steps)
      throw Error(Errc::InvalidInput, "row " + row.program + " [" + row.input + "] has no steps");
    return static_cast<double>(*row.steps);
  }
  if (!row.time_ms)
    throw Error(Errc::InvalidInput, "row " + row.program + " [" + row.input + "] has no time");
  return *row.time_ms;
}

CostMeasure default_measure(const std::vector<AnalysisRow>& rows) {
  bool all_steps = std::all_of(rows.begin(), rows.end(), [](const AnalysisRow& r) { return r.steps.has_value(); });
  return all_steps ? CostMeasure::Steps : CostMeasure::Time;
}

double correlate_within_program(const std::vector<AnalysisRow>& rows, const std::string& program, CostMeasure m) {
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    if (r.program != program)
      continue;
    xs.push_back(static_cast<double>(r.mems));
    ys.push_back(cost_of(r, m));
  }
  return pearson(xs, ys);
}

double correlate_across(const std::vector<AnalysisRow>& rows, CostMeasure m) {
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    xs.push_back(static_cast<double>(r.mems));
    ys.push_back(cost_of(r, m));
  }
  return pearson(xs, ys);
}

namespace {

struct Acc {
  std::size_t n = 0;
  long double mems = 0;
  long double cost = 0;
};

std::map<std::string, Acc> accumulate(const std::vector<AnalysisRow>& rows, CostMeasure m) {
  std::map<std::string, Acc> acc;
  for (const auto& r : rows) {
    auto& a = acc[bucket_label(r.mems)];
    ++a.n;
    a.mems += static_cast<long double>(r.mems);
    a.cost += cost_of(r, m);
  }
  return acc;
}

} // namespace

std::vector<BucketStat> bucket_table(const std::vector<AnalysisRow>& rows, CostMeasure m) {
  auto acc = accumulate(rows, m);
  std::vector<BucketStat> out;
  for (const auto& label : bucket_labels()) {
    auto it = acc.find(label);
    if (it == acc.end())
      continue;
    const Acc& a = it->second;
    out.push_back({label, a.n, static_cast<double>(a.mems / a.n), static_cast<double>(a.cost / a.n)});
  }
  return out;
}

std::vector<SpeedupRow> bucket_speedup(const std::vector<AnalysisRow>& a, const std::vector<AnalysisRow>& b,
                                       CostMeasure m) {
  auto acc_a = accumulate(a, m);
  auto acc_b = accumulate(b, m);
  std::vector<SpeedupRow> out;
  for (const auto& label : bucket_labels()) {
    auto ia = acc_a.find(label);
    auto ib = acc_b.find(label);
    if (ia == acc_a.end() || ib == acc_b.end())
      continue;
    SpeedupRow s;
    s.bucket = label;
    s.mean_a = static_cast<double>(ia->second.cost / ia->second.n);
    s.mean_b = static_cast<double>(ib->second.cost / ib->second.n);
    if (s.mean_b == 0)
      throw Error(Errc::DegenerateInput, "bucket " + label + " has zero mean cost in the second set");
    s.ratio = s.mean_a / s.mean_b;
    out.push_back(s);
  }
  if (out.empty())
    throw Error(Errc::NoOverlappingBuckets, "the two row sets share no bucket");
  return out;
}

} // namespace memsest
