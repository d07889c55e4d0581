#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>

#include "memsest/native.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result cli(const std::string& args) {
  std::string cmd = std::string(MEMSEST_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0)
    r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string corpus(const std::string& f) { return testsupport::corpus_dir() + "/" + f; }

struct TempDir {
  fs::path path = fs::temp_directory_path() / ("memsest_cli_" + std::to_string(getpid()));
  TempDir() { fs::create_directories(path); }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

} // namespace

TEST_CASE("usage errors exit 1") {
  CHECK(cli("").code == 1);
  CHECK(cli("frobnicate").code == 1);
  CHECK(cli("paths " + corpus("test.c")).code == 1);
  CHECK(cli("instrument " + corpus("test.c") + " --marker %").code == 1);
  CHECK(cli("paths " + corpus("snippet.c") + " --fn snippet --domain x=5").code == 1);
  CHECK(cli("interp " + corpus("test.c") + " --fn test --args ten").code == 1);
  CHECK(cli("--help").code == 0);
}

TEST_CASE("analysis errors exit 2") {
  TempDir tmp;
  memsest::write_file(tmp / "bad.c", "void f() { x = 1; }\n");
  CHECK(cli("fmt " + tmp / "bad.c").code == 2);
  CHECK(cli("paths " + corpus("bubble.c") + " --fn bubble --domain n=1..3").code == 2);
  CHECK(cli("interp " + corpus("test.c") + " --fn test --args 10 5 --max-steps 10").code == 2);
  CHECK(cli("interp " + corpus("test.c") + " --fn nope --args 1").code == 2);
}

TEST_CASE("external failures exit 3") {
  CHECK(cli("run " + corpus("test.c") + " --fn test --args 3 1 --cc 'false {src} {bin}'").code == 3);
}

TEST_CASE("paths, count and estimate") {
  TempDir tmp;
  Result r = cli("paths " + corpus("snippet.c") + " --fn snippet --domain x=-1000..1000 --assume 'x > 20 && x <= 100' -o " +
                 tmp / "s.paths");
  REQUIRE(r.code == 0);
  r = cli("count --paths " + tmp / "s.paths");
  REQUIRE(r.code == 0);
  CHECK(r.out == "path_id,delta,pind\npath_0,60,0\npath_1,20,0\nweighted,80,0\n");

  r = cli("paths " + corpus("test.c") + " --fn test --domain n=3..3 --domain mode=0..3 -o " + tmp / "t.paths");
  REQUIRE(r.code == 0);
  REQUIRE(cli("count --paths " + tmp / "t.paths" + " -o " + tmp / "t.csv").code == 0);
  r = cli("estimate --paths " + tmp / "t.paths" + " --counts " + tmp / "t.csv");
  CHECK(r.code == 0);
  CHECK(r.out == "12/4 = 3\n");

  memsest::write_file(tmp / "w.csv", "path_id,delta,pind\npath_0,60,3\npath_1,20,2\nweighted,80,2.75\n");
  memsest::write_file(tmp / "w.paths", "mems-paths 1\nfunction g\ndomain x 0 1\ntruncated none\n"
                                       "path path_0\ndecisions\ncondition 1\npath_len 0\npind 3\nend\n"
                                       "path path_1\ndecisions\ncondition 1\npath_len 0\npind 2\nend\n");
  r = cli("estimate --paths " + tmp / "w.paths" + " --counts " + tmp / "w.csv");
  CHECK(r.code == 0);
  CHECK(r.out == "220/80 = 2.75\n");
  CHECK(cli("estimate --paths " + tmp / "t.paths" + " --counts " + tmp / "w.csv").code == 1);

  r = cli("paths " + corpus("test.c") + " --fn test --domain n=0..50 --domain mode=0..0 --unroll 8 -o " + tmp / "u.paths");
  CHECK(r.code == 2);
  CHECK(fs::exists(tmp / "u.paths"));
}

TEST_CASE("instrument, strip and fmt") {
  TempDir tmp;
  REQUIRE(cli("instrument " + corpus("test.c") + " --marker @ --timer none -o " + tmp / "i.c").code == 0);
  std::string inst = memsest::read_file(tmp / "i.c");
  CHECK(inst.find("printf(\"@(mode > 0)\\n\");") != std::string::npos);
  Result stripped = cli("strip " + tmp / "i.c");
  Result pretty = cli("fmt " + corpus("test.c"));
  CHECK(stripped.code == 0);
  CHECK(stripped.out == pretty.out);
  CHECK(cli("strip " + corpus("test.c")).code == 2);
}

TEST_CASE("interp output") {
  Result r = cli("interp " + corpus("test.c") + " --fn test --args 10,5");
  CHECK(r.code == 0);
  CHECK(r.out.find("Total path length: 20\nTotal memory accesses: 10\n") != std::string::npos);
  r = cli("interp " + corpus("bubble.c") + " --fn bubble --args 4 --array a=reversed --csv");
  CHECK(r.out == "program,input,source,path_len,mems,time_ms,steps\nbubble,n=4;a=reversed,interpreter,15,36,,55\n");
}

TEST_CASE("sweep, analyze and report") {
  TempDir tmp;
  memsest::write_file(tmp / "s.toml", "[program.test]\nfile = \"" + corpus("test.c") +
                                          "\"\nn = [10, 50]\nmode = [\"0\", \"n/2\", \"n\"]\n"
                                          "[program.bubble]\nfile = \"" + corpus("bubble.c") +
                                          "\"\nn = [4, 8, 16]\na = [\"reversed\"]\n");
  REQUIRE(cli("sweep " + tmp / "s.toml" + " -o " + tmp / "rows.csv").code == 0);
  Result r = cli("analyze " + tmp / "rows.csv");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("group,rows,mean_mems,mean_steps,pearson\ntest,6,", 0) == 0);
  CHECK(r.out.find("\nbubble,3,") != std::string::npos);
  CHECK(r.out.find("\nALL,9,") != std::string::npos);
  CHECK(cli("analyze " + tmp / "rows.csv --group-by bucket").code == 0);
  REQUIRE(cli("report " + tmp / "rows.csv " + tmp / "rows.csv -o " + tmp / "rep").code == 0);
  for (const char* f : {"summary.txt", "rows.csv", "path_table.csv", "correlations.csv", "buckets.csv", "series/test.csv",
                        "series/bubble.csv", "speedup.csv"})
    CHECK(fs::exists(tmp / (std::string("rep/") + f)));
}

TEST_CASE("native run") {
  if (!memsest::find_c_compiler())
    return;
  Result r = cli("run " + corpus("test.c") + " --fn test --args 10 5 --repeat 2");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("program,input,source,path_len,mems,time_ms,steps\ntest,n=10;mode=5,native,20,10,", 0) == 0);
}
