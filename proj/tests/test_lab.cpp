#include <doctest.h>

#include <cmath>

#include "memsest/error.hpp"
#include "memsest/report.hpp"
#include "memsest/stats.hpp"
#include "memsest/sweep.hpp"
#include "test_support.hpp"

using namespace memsest;
using testsupport::Rng;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::InvalidInput;
}

AnalysisRow row(const std::string& program, std::int64_t n, std::int64_t mems, std::optional<std::int64_t> steps,
                std::optional<double> time = std::nullopt) {
  AnalysisRow r;
  r.program = program;
  r.input = "n=" + std::to_string(n);
  r.n = n;
  r.path_len = 2 * n;
  r.mems = mems;
  r.steps = steps;
  r.time_ms = time;
  r.bucket = bucket_label(mems);
  return r;
}

std::vector<double> random_vec(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v)
    x = rng.real(-1000, 1000);
  return v;
}

} // namespace

TEST_CASE("pearson against a hand computation") {
  // means 2.5 and 2.75; Sxy = 6.5, Sxx = 5, Syy = 8.75; r = 6.5 / sqrt(43.75)
  CHECK(pearson({1, 2, 3, 4}, {1, 2, 3, 5}) == doctest::Approx(0.9827076298239908).epsilon(1e-14));
}

TEST_CASE("pearson on exact lines") {
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    auto xs = random_vec(rng, static_cast<std::size_t>(rng.in(2, 60)));
    std::vector<double> up, down;
    for (double x : xs) {
      up.push_back(3 * x + 1);
      down.push_back(-x);
    }
    CHECK(std::fabs(pearson(xs, up) - 1) < 1e-12);
    CHECK(std::fabs(pearson(xs, down) + 1) < 1e-12);
  }
}

TEST_CASE("pearson properties on random vectors") {
  Rng rng(10);
  for (int i = 0; i < 100; ++i) {
    std::size_t n = static_cast<std::size_t>(rng.in(2, 80));
    auto xs = random_vec(rng, n);
    auto ys = random_vec(rng, n);
    double r = pearson(xs, ys);
    CHECK(r >= -1);
    CHECK(r <= 1);
    CHECK(pearson(ys, xs) == doctest::Approx(r).epsilon(1e-12));
    double a = rng.real(0.01, 100), b = rng.real(-500, 500);
    std::vector<double> scaled;
    for (double x : xs)
      scaled.push_back(a * x + b);
    CHECK(pearson(scaled, ys) == doctest::Approx(r).epsilon(1e-9));
    std::vector<double> flipped;
    for (double x : xs)
      flipped.push_back(-a * x + b);
    CHECK(pearson(flipped, ys) == doctest::Approx(-r).epsilon(1e-9));
  }
}

TEST_CASE("pearson degenerate input") {
  CHECK(code_of([] { pearson({1}, {2}); }) == Errc::DegenerateInput);
  CHECK(code_of([] { pearson({1, 1, 1}, {1, 2, 3}); }) == Errc::DegenerateInput);
  CHECK(code_of([] { pearson({1, 2}, {1, 2, 3}); }) == Errc::DegenerateInput);
  CHECK(code_of([] { correlate_within_program({row("p", 1, 5, 5), row("p", 1, 5, 5)}, "p"); }) ==
        Errc::DegenerateInput);
}

TEST_CASE("buckets are half-open and total") {
  CHECK(bucket_label(0) == "<1K");
  CHECK(bucket_label(999) == "<1K");
  CHECK(bucket_label(1000) == "1K-10K");
  CHECK(bucket_label(9999) == "1K-10K");
  CHECK(bucket_label(10000) == "10K-100K");
  CHECK(bucket_label(100000) == "100K-1M");
  CHECK(bucket_label(1000000) == "1M-10M");
  CHECK(bucket_label(10000000) == ">10M");
  Rng rng(12);
  const auto& labels = bucket_labels();
  for (int i = 0; i < 1000; ++i) {
    std::int64_t m = rng.in(0, 100000000);
    std::string b = bucket_label(m);
    CHECK(std::count(labels.begin(), labels.end(), b) == 1);
  }
}

TEST_CASE("bucket table and speedups") {
  std::vector<AnalysisRow> a = {row("p", 1, 10, std::nullopt, 2.56), row("p", 2, 20, std::nullopt, 2.56),
                                row("p", 3, 5000, std::nullopt, 10.0)};
  std::vector<AnalysisRow> b = {row("p", 1, 10, std::nullopt, 2.0), row("p", 2, 30, std::nullopt, 2.0),
                                row("p", 9, 200000, std::nullopt, 1.0)};
  auto t = bucket_table(a, CostMeasure::Time);
  REQUIRE(t.size() == 2);
  CHECK(t[0].bucket == "<1K");
  CHECK(t[0].rows == 2);
  CHECK(t[0].mean_mems == 15);
  auto s = bucket_speedup(a, b);
  REQUIRE(s.size() == 1);
  CHECK(s[0].bucket == "<1K");
  CHECK(s[0].ratio == doctest::Approx(1.28));
  for (const auto& r : bucket_speedup(a, a))
    CHECK(r.ratio == 1.0);
  CHECK(code_of([&] { bucket_speedup(a, {row("p", 9, 200000, std::nullopt, 1.0)}); }) == Errc::NoOverlappingBuckets);
}

TEST_CASE("rows CSV round trip") {
  std::vector<AnalysisRow> rows = {row("a,b", 3, 7, 11), row("q\"x", 4, 1, std::nullopt, 0.25)};
  std::string text = rows_to_csv(rows);
  auto back = rows_from_csv(text);
  REQUIRE(back.size() == 2);
  CHECK(back[0].program == "a,b");
  CHECK(back[1].program == "q\"x");
  CHECK(back[0].steps == 11);
  CHECK(!back[0].time_ms);
  CHECK(back[1].time_ms == 0.25);
  CHECK(rows_to_csv(back) == text);
  CHECK(rows_to_csv({}) == std::string(kRowCsvHeader) + "\n");
  CHECK(code_of([] { rows_from_csv("nope\n"); }) == Errc::InvalidInput);
}

TEST_CASE("report is deterministic and shaped like the tables") {
  std::vector<AnalysisRow> rows;
  for (int n : {10, 20, 30})
    rows.push_back(row("bubble", n, n * n, n * n + 3 * n));
  for (int n : {10, 20, 30})
    rows.push_back(row("change", n, 3, n * n * n));
  ReportInput in;
  in.rows = rows;
  in.estimates["test"] = estimate_performance({{"path_0", 60, 3}, {"path_1", 20, 2}});
  auto files = report(in);
  auto again = report(in);
  REQUIRE(files.size() == again.size());
  for (std::size_t i = 0; i < files.size(); ++i) {
    CHECK(files[i].name == again[i].name);
    CHECK(files[i].contents == again[i].contents);
  }
  std::map<std::string, std::string> by_name;
  for (const auto& f : files)
    by_name[f.name] = f.contents;
  CHECK(files[0].name == "summary.txt");
  REQUIRE(by_name.count("correlations.csv"));
  CHECK(by_name["correlations.csv"].rfind("program,rows,measure,pearson_mems\nbubble,3,steps,", 0) == 0);
  CHECK(by_name["correlations.csv"].find("change,3,steps,NA\n") != std::string::npos);
  CHECK(by_name["correlations.csv"].find("\nALL,6,steps,") != std::string::npos);
  CHECK(by_name["path_table.csv"].rfind("path,program,input,len,mems,steps\npath_0,bubble,n=10,20,100,130\n", 0) == 0);
  CHECK(by_name["series/change.csv"] == "n,mems,path_len,steps\n10,3,20,1000\n20,3,40,8000\n30,3,60,27000\n");
  CHECK(by_name["estimates.csv"] == "program,paths,total_weight,weighted_sum,value\ntest,2,80,220,2.75\n");
  CHECK(!by_name.count("speedup.csv"));

  auto empty = report({});
  for (const auto& f : empty)
    if (f.name == "rows.csv")
      CHECK(f.contents == std::string(kRowCsvHeader) + "\n");
}

TEST_CASE("sweep config parsing") {
  SweepSpec s = parse_sweep_spec("repeat = 3\nexecutor = \"native\"\n# comment\n[program.t]\nfile = \"x/test.c\"\nfn = \"test\"\n"
                                 "n = [10, 50]\nmode = [\"0\", \"n/2\", \"n\"]\n",
                                 "/base");
  CHECK(s.repeat == 3);
  CHECK(s.executor == Executor::Native);
  REQUIRE(s.programs.size() == 1);
  CHECK(s.programs[0].file == "/base/x/test.c");
  CHECK(s.programs[0].fn == "test");
  REQUIRE(s.programs[0].grid.size() == 2);
  CHECK(s.programs[0].grid[1].second == std::vector<std::string>{"0", "n/2", "n"});
  CHECK(code_of([] { parse_sweep_spec("[program.a]\n"); }) == Errc::InvalidInput);
  CHECK(code_of([] { parse_sweep_spec("repeat = x\n"); }) == Errc::InvalidInput);
  CHECK(code_of([] { parse_sweep_spec("[oops]\n"); }) == Errc::InvalidInput);
  CHECK(parse_sweep_spec("").programs.empty());
}

TEST_CASE("test.c sweep gives len 2n and mems 2 mode") {
  SweepSpec s = parse_sweep_spec("[program.test]\nfile = \"test.c\"\nn = [10, 50, 100, 500]\nmode = [\"0\", \"n/2\", \"n\"]\n",
                                 testsupport::corpus_dir());
  auto rows = sweep(s);
  REQUIRE(rows.size() == 12);
  for (const auto& r : rows) {
    CAPTURE(r.input);
    CHECK(r.path_len == 2 * r.n);
  }
  CHECK(rows[0].input == "n=10;mode=0");
  CHECK(rows[0].mems == 0);
  CHECK(rows[1].mems == 10);
  CHECK(rows[2].mems == 20);
  CHECK(rows[11].mems == 1000);
  CHECK(sweep(parse_sweep_spec("")).empty());
}

TEST_CASE("parallel sweep equals the serial reference") {
  SweepSpec s = parse_sweep_spec(memsest::read_file(testsupport::corpus_dir() + "/sweep.toml"), testsupport::corpus_dir());
  std::vector<RunRecord> runs_a, runs_b;
  auto a = sweep(s, &runs_a);
  auto b = sweep_serial(s, &runs_b);
  CHECK(rows_to_csv(a) == rows_to_csv(b));
  CHECK(run_records_to_csv(runs_a) == run_records_to_csv(runs_b));
  CHECK(a.size() > 100);
}

TEST_CASE("sweep errors name the cell") {
  SweepSpec s = parse_sweep_spec("[program.bubble]\nfile = \"bubble.c\"\nn = [4, -1]\na = [\"sorted\"]\n",
                                 testsupport::corpus_dir());
  try {
    sweep(s);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("bubble [") != std::string::npos);
  }
}
