#include "memsest/output_format.hpp"

#include <charconv>

#include "memsest/error.hpp"

namespace memsest {

namespace {

[[noreturn]] void mismatch(std::size_t line_no, std::string_view expected, std::string_view got) {
  throw Error(Errc::OutputFormatMismatch, "line " + std::to_string(line_no) + ": expected `" +
                                              std::string(expected) + "`, got `" + std::string(got) + "`");
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    return std::nullopt;
  return v;
}

} // namespace

ParsedRun parse_run_output(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos)
      nl = text.size();
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }

  constexpr std::string_view kLen = "Total path length: ";
  constexpr std::string_view kMems = "Total memory accesses: ";
  constexpr std::string_view kTime = "Execution time: ";

  ParsedRun run;
  int depth = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (line == "Path:") {
      ++depth;
      continue;
    }
    if (starts_with(line, kLen)) {
      if (depth == 0)
        mismatch(i + 1, "Path:", line);
      auto len = parse_int(line.substr(kLen.size()));
      if (!len)
        mismatch(i + 1, "Total path length: <int>", line);
      if (i + 1 >= lines.size() || !starts_with(lines[i + 1], kMems))
        mismatch(i + 2, "Total memory accesses: <int>", i + 1 < lines.size() ? lines[i + 1] : "<eof>");
      auto mems = parse_int(lines[i + 1].substr(kMems.size()));
      if (!mems)
        mismatch(i + 2, "Total memory accesses: <int>", lines[i + 1]);
      ++i;
      std::optional<double> time;
      if (i + 1 < lines.size() && starts_with(lines[i + 1], kTime)) {
        std::string_view t = lines[i + 1].substr(kTime.size());
        if (t.size() < 4 || t.substr(t.size() - 3) != " ms")
          mismatch(i + 2, "Execution time: <fixed-6-decimal> ms", lines[i + 1]);
        try {
          std::size_t used = 0;
          std::string num(t.substr(0, t.size() - 3));
          time = std::stod(num, &used);
          if (used != num.size())
            mismatch(i + 2, "Execution time: <fixed-6-decimal> ms", lines[i + 1]);
        } catch (const std::logic_error&) {
          mismatch(i + 2, "Execution time: <fixed-6-decimal> ms", lines[i + 1]);
        }
        ++i;
      }
      if (--depth == 0) {
        run.path_len = *len;
        run.mems = *mems;
        run.time_ms = time;
        return run;
      }
      continue;
    }
    if (starts_with(line, kMems) && depth > 0)
      mismatch(i + 1, "Total path length: <int>", line);
    if (depth == 1)
      run.trace.emplace_back(line);
  }
  if (depth == 0)
    mismatch(lines.size() + 1, "Path:", "<eof>");
  mismatch(lines.size() + 1, "Total path length: <int>", "<eof>");
}

} // namespace memsest
