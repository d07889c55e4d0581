#include "memsest/report.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <filesystem>
#include <set>

#include "memsest/csv.hpp"
#include "memsest/error.hpp"

namespace memsest {

namespace {

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string cost_name(CostMeasure m) { return m == CostMeasure::Steps ? "steps" : "time_ms"; }

std::string opt_time(const AnalysisRow& r) { return r.time_ms ? fixed(*r.time_ms) : ""; }
std::string opt_steps(const AnalysisRow& r) { return r.steps ? std::to_string(*r.steps) : ""; }

std::vector<std::string> programs_of(const std::vector<AnalysisRow>& rows) {
  std::vector<std::string> out;
  for (const auto& r : rows)
    if (std::find(out.begin(), out.end(), r.program) == out.end())
      out.push_back(r.program);
  return out;
}

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w)
    s.append(w - s.size(), ' ');
  return s;
}

} // namespace

std::vector<ReportFile> report(const ReportInput& in) {
  std::vector<ReportFile> files;
  const auto& rows = in.rows;
  CostMeasure m = default_measure(rows);
  auto programs = programs_of(rows);
  std::string summary;

  files.push_back({"rows.csv", rows_to_csv(rows)});

  std::string table = "path,program,input,len,mems," + cost_name(m) + "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    table += csv_row({"path_" + std::to_string(i), r.program, r.input, std::to_string(r.path_len),
                   std::to_string(r.mems), m == CostMeasure::Steps ? opt_steps(r) : opt_time(r)});
  }
  files.push_back({"path_table.csv", table});

  std::string corr = "program,rows,measure,pearson_mems\n";
  summary += "Correlation between mems and " + cost_name(m) + "\n";
  auto corr_line = [&](const std::string& label, std::size_t n, const std::function<double()>& f) {
    std::string r;
    try {
      r = fixed(f());
    } catch (const Error& e) {
      if (e.code() != Errc::DegenerateInput)
        throw;
      r = "NA";
    }
    corr += csv_row({label, std::to_string(n), cost_name(m), r});
    summary += "  " + pad(label, 16) + pad(std::to_string(n) + " rows", 12) + r + "\n";
  };
  for (const auto& p : programs) {
    std::size_t n = static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [&](const AnalysisRow& r) { return r.program == p; }));
    corr_line(p, n, [&] { return correlate_within_program(rows, p, m); });
  }
  if (programs.size() > 1)
    corr_line("ALL", rows.size(), [&] { return correlate_across(rows, m); });
  files.push_back({"correlations.csv", corr});

  std::string buckets = "bucket,rows,mean_mems,mean_" + cost_name(m) + "\n";
  summary += "\nBuckets by mems\n";
  for (const auto& b : bucket_table(rows, m)) {
    buckets += csv_row({b.bucket, std::to_string(b.rows), fixed(b.mean_mems), fixed(b.mean_cost)});
    summary += "  " + pad(b.bucket, 12) + pad(std::to_string(b.rows) + " rows", 12) + "mean mems " +
               fixed(b.mean_mems, 1) + ", mean " + cost_name(m) + " " + fixed(b.mean_cost, 3) + "\n";
  }
  files.push_back({"buckets.csv", buckets});

  for (const auto& p : programs) {
    std::string series = "n,mems,path_len," + cost_name(m) + "\n";
    for (const auto& r : rows)
      if (r.program == p)
        series += csv_row({std::to_string(r.n), std::to_string(r.mems), std::to_string(r.path_len),
                           m == CostMeasure::Steps ? opt_steps(r) : opt_time(r)});
    files.push_back({"series/" + p + ".csv", series});
  }

  if (!in.estimates.empty()) {
    std::string est = "program,paths,total_weight,weighted_sum,value\n";
    summary += "\nStatic estimates\n";
    for (const auto& [program, e] : in.estimates) {
      est += csv_row({program, std::to_string(e.per_path.size()), e.total_weight.str(), e.weighted_sum.str(),
                      e.decimal()});
      summary += "  " + pad(program, 16) + e.fraction() + " = " + e.decimal() + "\n";
    }
    files.push_back({"estimates.csv", est});
  }

  if (!in.compare.empty()) {
    CostMeasure cm = default_measure(in.compare) == CostMeasure::Steps && m == CostMeasure::Steps ? CostMeasure::Steps
                                                                                                : CostMeasure::Time;
    std::string sp = "bucket,mean_a,mean_b,ratio\n";
    summary += "\nSpeedup by bucket (" + cost_name(cm) + ")\n";
    for (const auto& s : bucket_speedup(rows, in.compare, cm)) {
      sp += csv_row({s.bucket, fixed(s.mean_a), fixed(s.mean_b), fixed(s.ratio)});
      summary += "  " + pad(s.bucket, 12) + fixed(s.ratio, 2) + "x\n";
    }
    files.push_back({"speedup.csv", sp});
  }

  files.insert(files.begin(), {"summary.txt", std::to_string(rows.size()) + " rows, " +
                                                  std::to_string(programs.size()) + " programs\n\n" + summary});
  return files;
}

void write_report(const std::vector<ReportFile>& files, const std::string& dir) {
  namespace fs = std::filesystem;
  for (const auto& f : files) {
    fs::path p = fs::path(dir) / f.name;
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    if (ec)
      throw Error(Errc::InvalidInput, "cannot create '" + p.parent_path().string() + "': " + ec.message());
    write_file(p.string(), f.contents);
  }
}

} // namespace memsest
