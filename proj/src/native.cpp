#include "memsest/native.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>
#include <unistd.h>

#include "memsest/csv.hpp"
#include "memsest/error.hpp"
#include "memsest/output_format.hpp"

namespace fs = std::filesystem;

namespace memsest {

namespace {

std::string shell_quote(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  return out + "'";
}

class TempDir {
public:
  TempDir() {
    std::string pattern = (fs::temp_directory_path() / "memsest-XXXXXX").string();
    if (!mkdtemp(pattern.data()))
      throw Error(Errc::ExternalToolFailure, "cannot create a temporary directory");
    path_ = pattern;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }

private:
  fs::path path_;
};

int exit_status(int raw) {
  if (raw == -1)
    return -1;
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : 128 + (WIFSIGNALED(raw) ? WTERMSIG(raw) : 0);
}

std::string substitute(std::string cmd, const std::string& key, const std::string& value) {
  for (std::size_t at = cmd.find(key); at != std::string::npos; at = cmd.find(key, at + value.size()))
    cmd.replace(at, key.size(), value);
  return cmd;
}

std::pair<int, std::string> capture(const std::string& cmd) {
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe)
    throw Error(Errc::ExternalToolFailure, "cannot run `" + cmd + "`");
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
    out.append(buf.data(), n);
  return {exit_status(pclose(pipe)), out};
}

} // namespace

std::vector<RunRecord> run_native(std::string_view instrumented_source, const std::vector<std::string>& argv,
                                  const NativeOptions& opts) {
  if (opts.repeat < 1)
    throw Error(Errc::InvalidInput, "repeat must be at least 1");
  TempDir dir;
  fs::path src = dir.path() / "prog.c";
  fs::path bin = dir.path() / "prog";
  fs::path log = dir.path() / "compile.log";
  write_file(src.string(), instrumented_source);

  std::string cmd = substitute(substitute(opts.compile_cmd, "{src}", shell_quote(src.string())), "{bin}",
                               shell_quote(bin.string()));
  int rc = exit_status(std::system(("(" + cmd + ") >" + shell_quote(log.string()) + " 2>&1").c_str()));
  if (rc != 0 || !fs::exists(bin)) {
    std::string msg = fs::exists(log) ? read_file(log.string()) : std::string();
    throw Error(Errc::CompileFailed, "`" + cmd + "` exited with status " + std::to_string(rc) +
                                         (msg.empty() ? std::string() : ":\n" + msg));
  }

  std::string run_cmd = shell_quote(bin.string());
  for (const auto& a : argv)
    run_cmd += " " + shell_quote(a);

  std::vector<RunRecord> records;
  for (int i = 0; i < opts.repeat; ++i) {
    auto [status, out] = capture(run_cmd);
    if (status != 0)
      throw Error(Errc::ExternalToolFailure, "program exited with status " + std::to_string(status));
    ParsedRun parsed = parse_run_output(out);
    RunRecord r;
    r.program = opts.program;
    r.input = opts.input;
    r.source = RunSource::Native;
    r.path_len = parsed.path_len;
    r.mems = parsed.mems;
    r.time_ms = parsed.time_ms;
    r.trace = std::move(parsed.trace);
    if (!records.empty()) {
      const auto& first = records.front();
      if (first.path_len != r.path_len || first.mems != r.mems || first.trace != r.trace)
        throw Error(Errc::NonDeterministicCounts,
                    "run " + std::to_string(i + 1) + " reported path_len=" + std::to_string(r.path_len) +
                        " mems=" + std::to_string(r.mems) + ", run 1 reported path_len=" +
                        std::to_string(first.path_len) + " mems=" + std::to_string(first.mems));
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::optional<std::string> find_c_compiler() {
  for (const char* cc : {"cc", "gcc", "clang"}) {
    std::string probe = std::string("command -v ") + cc + " >/dev/null 2>&1";
    if (std::system(probe.c_str()) == 0)
      return std::string(cc);
  }
  return std::nullopt;
}

} // namespace memsest
